// Apache License, Version 2.0, refer to LICENSE.txt

// Shared test corpora and brute-force oracles. Oracles evaluate quantities
// from their definitions over explicit word sets and never call the
// incremental code paths they check.

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tg/corpus.hh"
#include "tg/rng.hh"

namespace tg::testing {

// Documents as lists of (word, count); the vocabulary follows first
// appearance.
inline Corpus make_corpus(const std::vector<std::vector<std::pair<std::string, int>>>& docs) {
  Vocabulary vocab;
  std::vector<Document> out;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    std::vector<WordCount> counts;
    for (const auto& [w, c] : docs[d]) counts.push_back({vocab.add(w), c});
    out.push_back(Document::from_counts(static_cast<std::int64_t>(d + 1), std::move(counts)));
  }
  return Corpus(vocab, std::move(out));
}

// d1: a x2, b x1; d2: b x1, c x1.
inline Corpus three_word_corpus() {
  return make_corpus({{{"a", 2}, {"b", 1}}, {{"b", 1}, {"c", 1}}});
}

// Random corpus with words "w0".."w{v-1}"; every word is forced to occur.
inline Corpus random_corpus(std::uint64_t seed, int v, int n_docs, int max_count = 4,
                            double density = 0.4) {
  Rng rng(seed);
  std::vector<std::vector<std::pair<std::string, int>>> docs(static_cast<std::size_t>(n_docs));
  for (int w = 0; w < v; ++w) {
    bool placed = false;
    for (int d = 0; d < n_docs; ++d) {
      if (rng.uniform() < density) {
        docs[static_cast<std::size_t>(d)].push_back(
            {"w" + std::to_string(w), 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_count)))});
        placed = true;
      }
    }
    if (!placed) {
      docs[rng.below(static_cast<std::uint64_t>(n_docs))].push_back(
          {"w" + std::to_string(w), 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_count)))});
    }
  }
  std::erase_if(docs, [](const auto& d) { return d.empty(); });
  return make_corpus(docs);
}

// Text-like corpus in the Heaps regime: tokens are Zipf(s) ranks drawn by
// inverting a Pareto tail, so the vocabulary grows like N^(1/s) with the token
// count N.
inline Corpus heaps_corpus(std::uint64_t seed, int n_docs, int doc_length, double s = 1.5) {
  Rng rng(seed);
  Vocabulary vocab;
  std::vector<Document> docs;
  for (int d = 0; d < n_docs; ++d) {
    std::vector<WordCount> counts;
    for (int i = 0; i < doc_length; ++i) {
      const double rank = std::floor(std::pow(rng.uniform_open(), -1.0 / (s - 1.0)));
      counts.push_back({vocab.add(std::to_string(static_cast<long long>(rank))), 1});
    }
    docs.push_back(Document::from_counts(d + 1, std::move(counts)));
  }
  return Corpus(vocab, std::move(docs));
}

// Maximized log-likelihood of the topic's words under ML estimates,
//   sum_d sum_{w in t} f_d(w) * log(p(t|d) * p(w|t)),
// with p(t|d) = f_d(t)/|d| and p(w|t) = f(w)/f(t).
inline double brute_h(const Corpus& corpus, const std::set<WordId>& t) {
  double f_t = 0;
  for (WordId w : t) f_t += static_cast<double>(corpus.frequency(w));
  double sum = 0;
  for (const auto& doc : corpus.documents()) {
    double fd_t = 0;
    for (const auto& wc : doc.counts) {
      if (t.count(wc.word)) fd_t += wc.count;
    }
    for (const auto& wc : doc.counts) {
      if (!t.count(wc.word)) continue;
      const double p_td = fd_t / static_cast<double>(doc.length);
      const double p_wt = static_cast<double>(corpus.frequency(wc.word)) / f_t;
      sum += wc.count * std::log(p_td * p_wt);
    }
  }
  return sum;
}

inline double brute_delta_h(const Corpus& corpus, const std::set<WordId>& s, const std::set<WordId>& t) {
  std::set<WordId> u = s;
  u.insert(t.begin(), t.end());
  return brute_h(corpus, u) - brute_h(corpus, s) - brute_h(corpus, t);
}

inline bool close_rel(double a, double b, double rel = 1e-9) {
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace tg::testing

#include <filesystem>
#include <fstream>
#include <random>

namespace tg::testing {

// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("tg-test-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

  std::filesystem::path write(const std::string& name, const std::string& content) const {
    const auto p = path_ / name;
    std::ofstream(p, std::ios::binary) << content;
    return p;
  }

 private:
  std::filesystem::path path_;
};

}  // namespace tg::testing

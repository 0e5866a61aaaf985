// Apache License, Version 2.0, refer to LICENSE.txt

#include "tg/corpus.hh"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tg/error.hh"
#include "tg/rng.hh"

namespace tg {

Vocabulary::Vocabulary(std::vector<std::string> words) {
  for (auto& w : words) {
    if (w.empty()) throw invalid_argument("vocabulary: empty word");
    if (index_.count(w)) throw invalid_argument("vocabulary: duplicate word '" + w + "'");
    add(w);
  }
}

WordId Vocabulary::add(std::string_view word) {
  auto it = index_.find(std::string(word));
  if (it != index_.end()) return it->second;
  if (word.empty()) throw invalid_argument("vocabulary: empty word");
  const auto id = static_cast<WordId>(words_.size());
  words_.emplace_back(word);
  index_.emplace(words_.back(), id);
  return id;
}

std::optional<WordId> Vocabulary::find(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Document Document::from_counts(std::int64_t id, std::vector<WordCount> counts) {
  std::sort(counts.begin(), counts.end(),
            [](const WordCount& a, const WordCount& b) { return a.word < b.word; });
  Document doc;
  doc.id = id;
  for (const auto& wc : counts) {
    if (wc.count <= 0) throw invalid_argument("document: non-positive count");
    if (!doc.counts.empty() && doc.counts.back().word == wc.word) {
      doc.counts.back().count += wc.count;
    } else {
      doc.counts.push_back(wc);
    }
    doc.length += wc.count;
  }
  return doc;
}

Corpus::Corpus(const Vocabulary& vocabulary, std::vector<Document> documents,
               std::vector<std::string> doc_names) {
  build(vocabulary, std::move(documents), std::move(doc_names), true);
}

Corpus Corpus::over_vocabulary(const Vocabulary& vocabulary, std::vector<Document> documents,
                               std::vector<std::string> doc_names) {
  Corpus c;
  c.build(vocabulary, std::move(documents), std::move(doc_names), false);
  return c;
}

void Corpus::build(const Vocabulary& vocabulary, std::vector<Document> documents,
                   std::vector<std::string> doc_names, bool compact) {
  if (!doc_names.empty() && doc_names.size() != documents.size()) {
    throw invalid_argument("corpus: doc_names size differs from document count");
  }
  const auto n_words = static_cast<WordId>(vocabulary.size());
  std::vector<std::int64_t> freq(vocabulary.size(), 0);
  for (auto& doc : documents) {
    doc = Document::from_counts(doc.id, std::move(doc.counts));
    for (const auto& wc : doc.counts) {
      if (wc.word < 0 || wc.word >= n_words) {
        throw range_error("corpus: word id " + std::to_string(wc.word) + " out of range");
      }
      freq[static_cast<std::size_t>(wc.word)] += wc.count;
    }
  }

  std::vector<WordId> remap(vocabulary.size(), -1);
  if (compact) {
    for (std::size_t w = 0; w < vocabulary.size(); ++w) {
      if (freq[w] > 0) remap[w] = static_cast<WordId>(vocab_.add(vocabulary.word(static_cast<WordId>(w))));
    }
  } else {
    vocab_ = vocabulary;
    std::iota(remap.begin(), remap.end(), 0);
  }

  freq_.assign(vocab_.size(), 0);
  inverted_.assign(vocab_.size(), {});
  for (std::size_t d = 0; d < documents.size(); ++d) {
    Document& doc = documents[d];
    if (compact) {
      // Words of a non-empty document always survive compaction; ids keep
      // their relative order, so counts stay sorted.
      for (auto& wc : doc.counts) wc.word = remap[static_cast<std::size_t>(wc.word)];
    }
    if (doc.length == 0) continue;
    const auto idx = static_cast<DocIndex>(docs_.size());
    for (const auto& wc : doc.counts) {
      freq_[static_cast<std::size_t>(wc.word)] += wc.count;
      inverted_[static_cast<std::size_t>(wc.word)].push_back({idx, wc.count});
    }
    tokens_ += doc.length;
    log_len_.push_back(std::log(static_cast<double>(doc.length)));
    if (!doc_names.empty()) doc_names_.push_back(std::move(doc_names[d]));
    docs_.push_back(std::move(doc));
  }
}

std::vector<Document> Corpus::documents_over(const Vocabulary& vocab) const {
  std::vector<WordId> remap(vocab_.size(), -1);
  for (std::size_t w = 0; w < vocab_.size(); ++w) {
    if (auto id = vocab.find(vocab_.word(static_cast<WordId>(w)))) remap[w] = *id;
  }
  std::vector<Document> out;
  out.reserve(docs_.size());
  for (const auto& doc : docs_) {
    std::vector<WordCount> counts;
    for (const auto& wc : doc.counts) {
      const WordId to = remap[static_cast<std::size_t>(wc.word)];
      if (to >= 0) counts.push_back({to, wc.count});
    }
    if (counts.empty()) continue;
    out.push_back(Document::from_counts(doc.id, std::move(counts)));
  }
  return out;
}

Corpus Corpus::filtered(std::int64_t min_freq) const {
  Vocabulary kept;
  for (std::size_t w = 0; w < vocab_.size(); ++w) {
    if (freq_[w] >= min_freq) kept.add(vocab_.word(static_cast<WordId>(w)));
  }
  std::vector<WordId> remap(vocab_.size(), -1);
  for (std::size_t w = 0; w < vocab_.size(); ++w) {
    if (auto id = kept.find(vocab_.word(static_cast<WordId>(w)))) remap[w] = *id;
  }
  std::vector<Document> docs;
  std::vector<std::string> names;
  for (std::size_t d = 0; d < docs_.size(); ++d) {
    std::vector<WordCount> counts;
    for (const auto& wc : docs_[d].counts) {
      const WordId to = remap[static_cast<std::size_t>(wc.word)];
      if (to >= 0) counts.push_back({to, wc.count});
    }
    if (counts.empty()) continue;
    docs.push_back(Document::from_counts(docs_[d].id, std::move(counts)));
    if (!doc_names_.empty()) names.push_back(doc_names_[d]);
  }
  return Corpus(kept, std::move(docs), std::move(names));
}

SplitResult split(const Corpus& corpus, double test_ratio, std::uint64_t seed,
                  std::int64_t min_train_freq) {
  if (!(test_ratio > 0.0 && test_ratio < 1.0)) {
    throw range_error("split: test ratio must lie in (0, 1)");
  }
  const std::size_t n = corpus.doc_count();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(order);
  const auto n_test = static_cast<std::size_t>(std::llround(test_ratio * static_cast<double>(n)));
  std::vector<bool> is_test(n, false);
  for (std::size_t k = 0; k < n_test; ++k) is_test[order[k]] = true;

  std::vector<Document> train_docs, test_docs;
  std::vector<std::string> train_names, test_names;
  const bool named = !corpus.doc_names().empty();
  for (std::size_t d = 0; d < n; ++d) {
    auto& docs = is_test[d] ? test_docs : train_docs;
    docs.push_back(corpus.documents()[d]);
    if (named) (is_test[d] ? test_names : train_names).push_back(corpus.doc_names()[d]);
  }

  Corpus train = Corpus(corpus.vocabulary(), std::move(train_docs), std::move(train_names))
                     .filtered(min_train_freq);
  if (train.doc_count() == 0) throw range_error("split: empty training set after filtering");

  Corpus test_raw = Corpus::over_vocabulary(corpus.vocabulary(), std::move(test_docs),
                                            std::move(test_names));
  std::vector<std::string> kept_names;
  std::vector<Document> test_over_train;
  {
    // documents_over drops emptied documents; keep names aligned by doc id.
    test_over_train = test_raw.documents_over(train.vocabulary());
    if (named) {
      std::size_t j = 0;
      for (std::size_t d = 0; d < test_raw.doc_count() && j < test_over_train.size(); ++d) {
        if (test_raw.documents()[d].id == test_over_train[j].id) {
          kept_names.push_back(test_raw.doc_names()[d]);
          ++j;
        }
      }
    }
  }
  Corpus test = Corpus::over_vocabulary(train.vocabulary(), std::move(test_over_train),
                                        std::move(kept_names));
  if (test.doc_count() == 0) throw range_error("split: empty test set after filtering");
  return {std::move(train), std::move(test)};
}

}  // namespace tg

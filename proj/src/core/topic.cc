// Apache License, Version 2.0, refer to LICENSE.txt

#include "tg/topic.hh"

#include <algorithm>
#include <cmath>

namespace tg {

namespace {

// Calls fn(doc, a, b) for every document in the union of two sorted posting
// lists, with a or b zero where the document is absent from that side.
template <typename Fn>
void for_each_union(const std::vector<Posting>& x, const std::vector<Posting>& y, Fn&& fn) {
  std::size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    if (j == y.size() || (i < x.size() && x[i].doc < y[j].doc)) {
      fn(x[i].doc, x[i].count, 0);
      ++i;
    } else if (i == x.size() || y[j].doc < x[i].doc) {
      fn(y[j].doc, 0, y[j].count);
      ++j;
    } else {
      fn(x[i].doc, x[i].count, y[j].count);
      ++i;
      ++j;
    }
  }
}

double joined_h(const std::vector<Posting>& x, const std::vector<Posting>& y, double i_sum,
                std::int64_t f_sum, const Corpus& corpus) {
  double sum = 0.0;
  for_each_union(x, y, [&](DocIndex d, std::int32_t a, std::int32_t b) {
    const double c = static_cast<double>(a) + static_cast<double>(b);
    sum += c * (std::log(c) - corpus.log_length(d));
  });
  return sum + i_sum - xlogx(static_cast<double>(f_sum));
}

std::vector<Posting> postings_of(const Corpus& corpus, WordId w) {
  auto p = corpus.postings(w);
  return {p.begin(), p.end()};
}

}  // namespace

double h_singleton(const Corpus& corpus, WordId w) {
  double sum = 0.0;
  for (const auto& p : corpus.postings(w)) {
    const double c = p.count;
    sum += c * (std::log(c) - corpus.log_length(p.doc));
  }
  return sum;
}

double h_pair(const Corpus& corpus, WordId v, WordId w) {
  const auto fv = corpus.frequency(v), fw = corpus.frequency(w);
  return joined_h(postings_of(corpus, v), postings_of(corpus, w),
                  xlogx(static_cast<double>(fv)) + xlogx(static_cast<double>(fw)), fv + fw, corpus);
}

TopicState singleton_topic(const Corpus& corpus, WordId w) {
  TopicState t;
  t.id = w;
  t.key = w;
  t.words = {w};
  t.f = corpus.frequency(w);
  t.i = xlogx(static_cast<double>(t.f));
  t.h = h_singleton(corpus, w);
  t.doc_freq = postings_of(corpus, w);
  return t;
}

double h_merged(const TopicState& s, const TopicState& t, const Corpus& corpus) {
  return joined_h(s.doc_freq, t.doc_freq, s.i + t.i, s.f + t.f, corpus);
}

double delta_h(const TopicState& s, const TopicState& t) {
  const auto& x = s.doc_freq;
  const auto& y = t.doc_freq;
  double gain = 0.0;
  std::size_t i = 0, j = 0;
  while (i < x.size() && j < y.size()) {
    if (x[i].doc < y[j].doc) {
      ++i;
    } else if (y[j].doc < x[i].doc) {
      ++j;
    } else {
      const double a = x[i].count, b = y[j].count;
      gain += a * std::log1p(b / a) + b * std::log1p(a / b);
      ++i;
      ++j;
    }
  }
  const double fs = static_cast<double>(s.f), ft = static_cast<double>(t.f);
  return gain - (fs * std::log1p(ft / fs) + ft * std::log1p(fs / ft));
}

TopicState merge_topics(const TopicState& s, const TopicState& t, TopicId new_id,
                        const Corpus& corpus) {
  TopicState u;
  u.id = new_id;
  u.key = std::min(s.key, t.key);
  u.words.reserve(s.words.size() + t.words.size());
  std::merge(s.words.begin(), s.words.end(), t.words.begin(), t.words.end(),
             std::back_inserter(u.words));
  u.f = s.f + t.f;
  u.i = s.i + t.i;
  u.h = h_merged(s, t, corpus);
  u.doc_freq.reserve(std::max(s.doc_freq.size(), t.doc_freq.size()));
  for_each_union(s.doc_freq, t.doc_freq, [&](DocIndex d, std::int32_t a, std::int32_t b) {
    u.doc_freq.push_back({d, a + b});
  });
  return u;
}

}  // namespace tg

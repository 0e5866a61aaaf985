// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "tg/corpus.hh"

namespace tg {

using TopicId = std::int32_t;

// Cached sufficient statistics of one live topic during agglomeration.
//   f        = sum of f(w) over member words
//   i        = sum of f(w) log f(w) over member words
//   h        = maximized log-likelihood contribution of the topic
//   doc_freq = f_d(t) for every document with f_d(t) > 0, sorted by document
// The topic order used for tie-breaking is `key`, the smallest member word id.
struct TopicState {
  TopicId id = -1;
  WordId key = 0;
  std::vector<WordId> words;
  std::int64_t f = 0;
  double i = 0.0;
  double h = 0.0;
  std::vector<Posting> doc_freq;
};

// x log x with 0 log 0 = 0.
inline double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

// h({w}) = sum_d f_d(w) (log f_d(w) - log |d|), natural log.
double h_singleton(const Corpus& corpus, WordId w);

// h({v, w}) via the inverted index, touching only documents containing v or w.
double h_pair(const Corpus& corpus, WordId v, WordId w);

TopicState singleton_topic(const Corpus& corpus, WordId w);

// h(s u t) from the cached f, i and doc_freq of s and t, iterating only
// documents where f_d(s) + f_d(t) > 0.
double h_merged(const TopicState& s, const TopicState& t, const Corpus& corpus);

// Delta h(s, t) = h(s u t) - h(s) - h(t), evaluated in the cancellation-free
// form
//   sum_{d: f_d(s), f_d(t) > 0} [a log(1 + b/a) + b log(1 + a/b)]
//     - [f(s) log(1 + f(t)/f(s)) + f(t) log(1 + f(s)/f(t))]
// with a = f_d(s), b = f_d(t). Only documents shared by both topics
// contribute. The result is symmetric in (s, t) bit for bit and <= 0.
double delta_h(const TopicState& s, const TopicState& t);

// The joined topic with id `new_id`; h is computed by h_merged.
TopicState merge_topics(const TopicState& s, const TopicState& t, TopicId new_id,
                        const Corpus& corpus);

// A join candidate under the artifact's total order: larger delta_h first,
// then the lexicographically smaller (min key, max key) pair.
struct Candidate {
  double delta_h;
  WordId key_lo;
  WordId key_hi;

  static Candidate of(double dh, WordId a, WordId b) {
    return a < b ? Candidate{dh, a, b} : Candidate{dh, b, a};
  }
};

inline bool better(const Candidate& a, const Candidate& b) {
  if (a.delta_h != b.delta_h) return a.delta_h > b.delta_h;
  if (a.key_lo != b.key_lo) return a.key_lo < b.key_lo;
  return a.key_hi < b.key_hi;
}

}  // namespace tg

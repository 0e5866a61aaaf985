// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "tg/corpus.hh"
#include "tg/topic_model.hh"

namespace tg {

// Collapsed Gibbs sampler state for LDA. z[d][i] is the topic of the i-th
// token of document d, tokens expanded in ascending word id.
struct GibbsState {
  std::vector<std::vector<std::int32_t>> z;
  std::vector<std::int64_t> n_tw;  // topic-major: n_tw[t * |V| + w]
  std::vector<std::int64_t> n_dt;  // n_dt[d * n + t]
  std::vector<std::int64_t> n_t;
  std::vector<double> alpha_m;
  double beta = 0.1;
  int iteration = 0;

  std::size_t n_topics() const { return n_t.size(); }
  // Recounts everything from z and compares; returns false on any mismatch
  // or negative count.
  bool consistent(const Corpus& corpus) const;
};

struct GibbsConfig {
  int iterations = 500;
  int burn_in = 200;
  std::uint64_t seed = 1;
  // Called after every sweep.
  std::function<void(const GibbsState&)> on_sweep;
};

// alpha = 50 / n spread symmetrically, beta = 0.1.
std::pair<std::vector<double>, double> heuristic_hypers(int n);

// Phi_t(w) = (n_tw + beta) / (n_t + |V| beta) from the final sample;
// m = alpha_m / sum alpha_m and alpha = sum alpha_m.
TopicModel gibbs_train(const Corpus& corpus, int n, const std::vector<double>& alpha_m,
                       double beta, const GibbsConfig& cfg = {});

struct FoldInConfig {
  int chains = 10;
  int sweeps = 50;
  int burn_in = 20;
  std::uint64_t seed = 1;
};

// p(t | d) for a new document with Phi held fixed: S independent Gibbs chains
// over the document's token assignments, topic indicator frequencies averaged
// over the retained sweeps of every chain.
std::vector<double> fold_in(const TopicModel& model, const Document& doc,
                            const FoldInConfig& cfg = {});

}  // namespace tg

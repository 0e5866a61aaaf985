// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "tg/corpus.hh"
#include "tg/dendrogram.hh"
#include "tg/exec.hh"
#include "tg/synthetic.hh"
#include "tg/topic_model.hh"

namespace tg {

// Phi_t(w) = f(w) / f(t) for w in t, else 0; m_t = f(t) / sum f. The corpus
// supplies f(w) and must be the training corpus the dendrogram was built on.
// alpha is left unset.
TopicModel tg_to_model(const Dendrogram& dendrogram, const Corpus& corpus, int n);
// Same, using the leaf frequencies stored in the dendrogram.
TopicModel tg_to_model(const Dendrogram& dendrogram, int n);

// Phi_t(w) = f(w) / sum f for every t, m uniform. One topic suffices for
// perplexity; error rates need as many (identical) rows as the truth has.
TopicModel unigram_model(const Corpus& corpus, std::size_t n_topics = 1);

// Phi estimated from `train` under the true word-topic assignment.
TopicModel perfect_model(const TrueModel& truth, const Corpus& train);

struct EstimatorConfig {
  int particles = 20;
  std::uint64_t seed = 1;
  Exec exec = Exec::parallel;
};

// Left-to-right sequential estimate of log p(d | Phi, alpha m). Tokens are
// visited in ascending word id with multiplicity. R particles carry per-topic
// counts of previous assignments; at position j the contribution is
// log((1/R) sum_r p_r) with p_r = sum_t Phi_t(w_j) (c_t + alpha m_t) / (j +
// alpha). Particles are then resampled proportionally to p_r and each draws
// z_j ~ Phi_t(w_j) (c_t + alpha m_t). The resulting estimate of p(d) is
// unbiased.
double log_prob_doc_lrs(const TopicModel& model, const Document& doc, int particles,
                        std::uint64_t seed);

struct DocLogProb {
  std::int64_t doc_id;
  double log_prob;
  std::int64_t length;
};

struct PerplexityReport {
  double total_log_prob = 0.0;
  std::int64_t token_count = 0;
  double perplexity = 0.0;
  std::vector<DocLogProb> per_doc;  // sorted by doc id
  int particles = 0;
  std::uint64_t seed = 0;
};

// The test corpus must be expressed over the model's vocabulary (same word
// ids). Per-document seeds are mix_seed(seed, doc id).
PerplexityReport perplexity(const TopicModel& model, const Corpus& test,
                            const EstimatorConfig& cfg = {});

struct AlphaSearchStep {
  double alpha;
  double objective;
};

struct AlphaFit {
  TopicModel model;
  std::vector<AlphaSearchStep> trace;
};

// Golden-section search for alpha on log10(alpha) in [-2, 2] minimizing the
// training perplexity. The returned alpha is the final bracket midpoint unless
// an endpoint scored strictly better.
AlphaFit fit_alpha(const TopicModel& model, const Corpus& train, const EstimatorConfig& cfg = {},
                   int iterations = 20);

// Cost matrix C[t][s] = sum_w |Phi_t(w) - p~(w | s)| aligned by word string.
std::vector<std::vector<double>> l1_cost_matrix(const TopicModel& model, const TrueModel& truth);

// Minimum total cost over bijections rows -> columns of a square matrix.
// Returns the cost and the column assigned to each row.
std::pair<double, std::vector<int>> assignment_bruteforce(
    const std::vector<std::vector<double>>& cost);
std::pair<double, std::vector<int>> assignment_hungarian(
    const std::vector<std::vector<double>>& cost);

// err = min over bijections of (1 / 2n) sum_t sum_w |Phi_t(w) - p~(w|pi(t))|.
// Brute force up to n = 8, Hungarian above.
double error_rate(const TopicModel& model, const TrueModel& truth);

nlohmann::json to_json(const PerplexityReport& report);

}  // namespace tg

// Apache License, Version 2.0, refer to LICENSE.txt

#include "tg/eval.hh"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "tg/error.hh"
#include "tg/rng.hh"

namespace tg {

namespace {

TopicModel model_from_view(const FlatView& view, std::vector<std::string> vocab,
                           std::span<const std::int64_t> freq) {
  TopicModel model(std::move(vocab), view.topics.size());
  double total = 0.0;
  for (const auto& t : view.topics) total += static_cast<double>(t.f);
  for (std::size_t k = 0; k < view.topics.size(); ++k) {
    const auto& t = view.topics[k];
    const double ft = static_cast<double>(t.f);
    for (WordId w : t.words) {
      model.phi(k, static_cast<std::size_t>(w)) = static_cast<double>(freq[static_cast<std::size_t>(w)]) / ft;
    }
    model.m()[k] = ft / total;
  }
  model.kind = "topic-grouper";
  model.meta["n_topics"] = view.n;
  return model;
}

}  // namespace

TopicModel tg_to_model(const Dendrogram& dendrogram, const Corpus& corpus, int n) {
  if (corpus.vocabulary().words() != dendrogram.vocab) {
    throw invalid_argument("tg_to_model: corpus vocabulary differs from the model's");
  }
  return model_from_view(flat_view(dendrogram, n), dendrogram.vocab, corpus.frequencies());
}

TopicModel tg_to_model(const Dendrogram& dendrogram, int n) {
  return model_from_view(flat_view(dendrogram, n), dendrogram.vocab, dendrogram.leaf_f);
}

TopicModel unigram_model(const Corpus& corpus, std::size_t n_topics) {
  TopicModel model(corpus.vocabulary().words(), n_topics);
  const auto total = static_cast<double>(corpus.token_count());
  for (std::size_t w = 0; w < corpus.vocab_size(); ++w) {
    const double p = static_cast<double>(corpus.frequency(static_cast<WordId>(w))) / total;
    for (std::size_t t = 0; t < n_topics; ++t) model.phi(t, w) = p;
  }
  for (double& m : model.m()) m = 1.0 / static_cast<double>(n_topics);
  model.kind = "unigram";
  return model;
}

TopicModel perfect_model(const TrueModel& truth, const Corpus& train) {
  std::unordered_map<std::string, std::size_t> truth_index;
  for (std::size_t w = 0; w < truth.vocab.size(); ++w) truth_index.emplace(truth.vocab[w], w);
  const std::size_t n = truth.n_topics();
  std::vector<int> topic_of(train.vocab_size());
  std::vector<double> block_f(n, 0.0);
  for (std::size_t w = 0; w < train.vocab_size(); ++w) {
    auto it = truth_index.find(train.vocabulary().word(static_cast<WordId>(w)));
    if (it == truth_index.end()) throw invalid_argument("perfect_model: word unknown to the true model");
    topic_of[w] = truth.word_topic[it->second];
    block_f[static_cast<std::size_t>(topic_of[w])] += static_cast<double>(train.frequency(static_cast<WordId>(w)));
  }
  const double total = static_cast<double>(train.token_count());
  for (std::size_t t = 0; t < n; ++t) {
    if (block_f[t] == 0.0) throw range_error("perfect_model: a true topic never occurs in the training corpus");
  }
  TopicModel model(train.vocabulary().words(), n);
  for (std::size_t w = 0; w < train.vocab_size(); ++w) {
    const auto t = static_cast<std::size_t>(topic_of[w]);
    model.phi(t, w) = static_cast<double>(train.frequency(static_cast<WordId>(w))) / block_f[t];
  }
  for (std::size_t t = 0; t < n; ++t) model.m()[t] = block_f[t] / total;
  model.kind = "perfect";
  return model;
}

double log_prob_doc_lrs(const TopicModel& model, const Document& doc, int particles,
                        std::uint64_t seed) {
  if (particles < 1) throw range_error("particles must be >= 1");
  if (!model.has_alpha()) throw invalid_argument("perplexity: model alpha is unset");
  const std::size_t n = model.n_topics();
  const auto r_count = static_cast<std::size_t>(particles);
  const double alpha = model.alpha();
  std::vector<double> prior(n);
  for (std::size_t t = 0; t < n; ++t) prior[t] = alpha * model.m()[t];

  Rng rng(seed);
  std::vector<std::int32_t> counts(r_count * n, 0), next(r_count * n);
  std::vector<double> p(r_count), cumulative(r_count), weights(n);
  double log_prob = 0.0;
  std::int64_t j = 0;
  for (const auto& wc : doc.counts) {
    if (wc.word < 0 || static_cast<std::size_t>(wc.word) >= model.vocab_size()) {
      throw range_error("perplexity: word id outside the model vocabulary");
    }
    const double* phi = model.word_column(static_cast<std::size_t>(wc.word));
    for (std::int32_t rep = 0; rep < wc.count; ++rep, ++j) {
      const double denom = static_cast<double>(j) + alpha;
      double sum = 0.0;
      for (std::size_t r = 0; r < r_count; ++r) {
        const std::int32_t* c = counts.data() + r * n;
        double pr = 0.0;
        for (std::size_t t = 0; t < n; ++t) pr += phi[t] * (c[t] + prior[t]);
        p[r] = pr / denom;
        sum += p[r];
        cumulative[r] = sum;
      }
      if (!(sum > 0.0)) {
        throw Error("model", "perplexity: word '" + model.vocab()[static_cast<std::size_t>(wc.word)] +
                                 "' has zero probability under every topic");
      }
      log_prob += std::log(sum / static_cast<double>(r_count));

      // Resample histories proportionally to p_r, then extend each by a
      // draw of z_j from its posterior given the history.
      for (std::size_t r = 0; r < r_count; ++r) {
        std::size_t parent = r;
        if (r_count > 1) {
          const double u = rng.uniform() * sum;
          parent = static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), u) -
                                            cumulative.begin());
          parent = std::min(parent, r_count - 1);
        }
        const std::int32_t* c = counts.data() + parent * n;
        std::int32_t* out = next.data() + r * n;
        std::copy(c, c + n, out);
        double total = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
          weights[t] = phi[t] * (c[t] + prior[t]);
          total += weights[t];
        }
        ++out[rng.categorical(weights, total)];
      }
      counts.swap(next);
    }
  }
  return log_prob;
}

PerplexityReport perplexity(const TopicModel& model, const Corpus& test, const EstimatorConfig& cfg) {
  if (test.doc_count() == 0) throw range_error("perplexity: empty test set");
  if (test.vocab_size() != model.vocab_size()) {
    throw invalid_argument("perplexity: test corpus is not expressed over the model vocabulary");
  }
  const auto& docs = test.documents();
  std::vector<DocLogProb> per_doc(docs.size());
  auto eval_doc = [&](std::size_t d) {
    per_doc[d] = {docs[d].id, log_prob_doc_lrs(model, docs[d], cfg.particles, mix_seed(cfg.seed, static_cast<std::uint64_t>(docs[d].id))),
                  docs[d].length};
  };
  parallel_for(static_cast<std::int64_t>(docs.size()), cfg.exec,
               [&](std::int64_t d) { eval_doc(static_cast<std::size_t>(d)); });

  std::sort(per_doc.begin(), per_doc.end(),
            [](const DocLogProb& a, const DocLogProb& b) { return a.doc_id < b.doc_id; });
  PerplexityReport report;
  for (const auto& d : per_doc) {
    report.total_log_prob += d.log_prob;
    report.token_count += d.length;
  }
  report.perplexity = std::exp(-report.total_log_prob / static_cast<double>(report.token_count));
  report.per_doc = std::move(per_doc);
  report.particles = cfg.particles;
  report.seed = cfg.seed;
  return report;
}

AlphaFit fit_alpha(const TopicModel& model, const Corpus& train, const EstimatorConfig& cfg,
                   int iterations) {
  AlphaFit fit{model, {}};
  auto objective = [&](double log_alpha) {
    const double alpha = std::pow(10.0, log_alpha);
    fit.model.set_alpha(alpha);
    const double value = perplexity(fit.model, train, cfg).perplexity;
    if (!std::isfinite(value)) {
      throw Error("degenerate", "alpha search: non-finite training perplexity at alpha = " + std::to_string(alpha));
    }
    fit.trace.push_back({alpha, value});
    return value;
  };

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = -2.0, b = 2.0;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = objective(c), fd = objective(d);
  for (int k = 0; k < iterations; ++k) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = objective(d);
    }
  }
  double best_x = (a + b) / 2.0;
  double best_f = objective(best_x);
  for (double x : {-2.0, 2.0}) {
    const double f = objective(x);
    if (f < best_f) {
      best_f = f;
      best_x = x;
    }
  }
  fit.model.set_alpha(std::pow(10.0, best_x));
  fit.model.meta["alpha_search"] = {{"objective", "training perplexity"},
                                    {"particles", cfg.particles},
                                    {"seed", cfg.seed},
                                    {"iterations", iterations}};
  return fit;
}

std::vector<std::vector<double>> l1_cost_matrix(const TopicModel& model, const TrueModel& truth) {
  const std::size_t n = model.n_topics();
  if (truth.n_topics() != n) {
    throw invalid_argument("error rate: model has " + std::to_string(n) + " topics, truth has " +
                           std::to_string(truth.n_topics()));
  }
  std::unordered_map<std::string, std::size_t> model_index;
  for (std::size_t w = 0; w < model.vocab_size(); ++w) model_index.emplace(model.vocab()[w], w);
  std::vector<bool> matched(model.vocab_size(), false);
  std::vector<std::vector<double>> cost(n, std::vector<double>(n, 0.0));
  std::vector<double> phi(n);
  for (std::size_t w = 0; w < truth.vocab.size(); ++w) {
    std::fill(phi.begin(), phi.end(), 0.0);
    if (auto it = model_index.find(truth.vocab[w]); it != model_index.end()) {
      matched[it->second] = true;
      for (std::size_t t = 0; t < n; ++t) phi[t] = model.phi(t, it->second);
    }
    for (std::size_t t = 0; t < n; ++t) {
      for (std::size_t s = 0; s < n; ++s) cost[t][s] += std::abs(phi[t] - truth.topic_word[s][w]);
    }
  }
  // Words the truth does not know have true probability zero everywhere.
  for (std::size_t w = 0; w < model.vocab_size(); ++w) {
    if (matched[w]) continue;
    for (std::size_t t = 0; t < n; ++t) {
      for (std::size_t s = 0; s < n; ++s) cost[t][s] += model.phi(t, w);
    }
  }
  return cost;
}

std::pair<double, std::vector<int>> assignment_bruteforce(const std::vector<std::vector<double>>& cost) {
  const std::size_t n = cost.size();
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> best_perm = perm;
  do {
    double total = 0.0;
    for (std::size_t t = 0; t < n; ++t) total += cost[t][static_cast<std::size_t>(perm[t])];
    if (total < best) {
      best = total;
      best_perm = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return {best, best_perm};
}

std::pair<double, std::vector<int>> assignment_hungarian(const std::vector<std::vector<double>>& cost) {
  // Shortest augmenting path with row/column potentials, 1-based internally.
  const std::size_t n = cost.size();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> assign(n, -1);
  for (std::size_t j = 1; j <= n; ++j) {
    if (p[j] != 0) assign[p[j] - 1] = static_cast<int>(j - 1);
  }
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += cost[i][static_cast<std::size_t>(assign[i])];
  return {total, assign};
}

double error_rate(const TopicModel& model, const TrueModel& truth) {
  const auto cost = l1_cost_matrix(model, truth);
  const std::size_t n = cost.size();
  const double total = n <= 8 ? assignment_bruteforce(cost).first : assignment_hungarian(cost).first;
  return total / (2.0 * static_cast<double>(n));
}

nlohmann::json to_json(const PerplexityReport& report) {
  nlohmann::json docs = nlohmann::json::array();
  for (const auto& d : report.per_doc) docs.push_back({{"doc_id", d.doc_id}, {"log_prob", d.log_prob}, {"length", d.length}});
  return {{"kind", "perplexity-report"},
          {"total_log_prob", report.total_log_prob},
          {"token_count", report.token_count},
          {"perplexity", report.perplexity},
          {"estimator", {{"particles", report.particles}, {"seed", report.seed}}},
          {"per_doc", std::move(docs)}};
}

}  // namespace tg

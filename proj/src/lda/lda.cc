// Apache License, Version 2.0, refer to LICENSE.txt

#include "tg/lda.hh"

#include <numeric>

#include "tg/error.hh"
#include "tg/rng.hh"

namespace tg {

bool GibbsState::consistent(const Corpus& corpus) const {
  const std::size_t n = n_topics();
  const std::size_t v = corpus.vocab_size();
  std::vector<std::int64_t> tw(n * v, 0), dt(corpus.doc_count() * n, 0), t_tot(n, 0);
  if (z.size() != corpus.doc_count()) return false;
  for (std::size_t d = 0; d < corpus.doc_count(); ++d) {
    const auto& doc = corpus.documents()[d];
    if (static_cast<std::int64_t>(z[d].size()) != doc.length) return false;
    std::size_t i = 0;
    for (const auto& wc : doc.counts) {
      for (std::int32_t rep = 0; rep < wc.count; ++rep, ++i) {
        const auto t = static_cast<std::size_t>(z[d][i]);
        if (t >= n) return false;
        ++tw[t * v + static_cast<std::size_t>(wc.word)];
        ++dt[d * n + t];
        ++t_tot[t];
      }
    }
  }
  return tw == n_tw && dt == n_dt && t_tot == n_t;
}

std::pair<std::vector<double>, double> heuristic_hypers(int n) {
  if (n < 1) throw range_error("number of topics must be >= 1");
  const double alpha = 50.0 / n;
  return {std::vector<double>(static_cast<std::size_t>(n), alpha / n), 0.1};
}

TopicModel gibbs_train(const Corpus& corpus, int n, const std::vector<double>& alpha_m,
                       double beta, const GibbsConfig& cfg) {
  if (n < 1) throw range_error("number of topics must be >= 1");
  if (alpha_m.size() != static_cast<std::size_t>(n)) {
    throw invalid_argument("alpha_m has " + std::to_string(alpha_m.size()) + " entries for " +
                           std::to_string(n) + " topics");
  }
  for (double a : alpha_m) {
    if (!(a > 0.0)) throw invalid_argument("alpha_m entries must be positive");
  }
  if (!(beta > 0.0)) throw invalid_argument("beta must be positive");
  if (cfg.iterations <= cfg.burn_in || cfg.burn_in < 0) {
    throw range_error("Gibbs sampling needs iterations > burn_in >= 0");
  }

  const auto nt = static_cast<std::size_t>(n);
  const std::size_t v = corpus.vocab_size();
  const double v_beta = static_cast<double>(v) * beta;
  GibbsState s;
  s.alpha_m = alpha_m;
  s.beta = beta;
  s.n_tw.assign(nt * v, 0);
  s.n_dt.assign(corpus.doc_count() * nt, 0);
  s.n_t.assign(nt, 0);
  s.z.resize(corpus.doc_count());

  Rng rng(cfg.seed);
  std::vector<double> weights(nt);
  for (std::size_t d = 0; d < corpus.doc_count(); ++d) {
    const auto& doc = corpus.documents()[d];
    s.z[d].reserve(static_cast<std::size_t>(doc.length));
    for (const auto& wc : doc.counts) {
      const auto w = static_cast<std::size_t>(wc.word);
      for (std::int32_t rep = 0; rep < wc.count; ++rep) {
        double total = 0.0;
        for (std::size_t k = 0; k < nt; ++k) {
          weights[k] = (static_cast<double>(s.n_dt[d * nt + k]) + alpha_m[k]) *
                       (static_cast<double>(s.n_tw[k * v + w]) + beta) /
                       (static_cast<double>(s.n_t[k]) + v_beta);
          total += weights[k];
        }
        const auto t = rng.categorical(weights, total);
        s.z[d].push_back(static_cast<std::int32_t>(t));
        ++s.n_tw[t * v + static_cast<std::size_t>(wc.word)];
        ++s.n_dt[d * nt + t];
        ++s.n_t[t];
      }
    }
  }

  for (int it = 0; it < cfg.iterations; ++it) {
    for (std::size_t d = 0; d < corpus.doc_count(); ++d) {
      const auto& doc = corpus.documents()[d];
      std::int64_t* dt = s.n_dt.data() + d * nt;
      std::size_t i = 0;
      for (const auto& wc : doc.counts) {
        const auto w = static_cast<std::size_t>(wc.word);
        for (std::int32_t rep = 0; rep < wc.count; ++rep, ++i) {
          auto t = static_cast<std::size_t>(s.z[d][i]);
          --s.n_tw[t * v + w];
          --dt[t];
          --s.n_t[t];
          double total = 0.0;
          for (std::size_t k = 0; k < nt; ++k) {
            weights[k] = (static_cast<double>(dt[k]) + alpha_m[k]) *
                         (static_cast<double>(s.n_tw[k * v + w]) + beta) /
                         (static_cast<double>(s.n_t[k]) + v_beta);
            total += weights[k];
          }
          t = rng.categorical(weights, total);
          s.z[d][i] = static_cast<std::int32_t>(t);
          ++s.n_tw[t * v + w];
          ++dt[t];
          ++s.n_t[t];
        }
      }
    }
    s.iteration = it + 1;
    if (cfg.on_sweep) cfg.on_sweep(s);
  }

  TopicModel model(corpus.vocabulary().words(), nt);
  for (std::size_t t = 0; t < nt; ++t) {
    const double denom = static_cast<double>(s.n_t[t]) + v_beta;
    for (std::size_t w = 0; w < v; ++w) {
      model.phi(t, w) = (static_cast<double>(s.n_tw[t * v + w]) + beta) / denom;
    }
  }
  const double alpha = std::accumulate(alpha_m.begin(), alpha_m.end(), 0.0);
  for (std::size_t t = 0; t < nt; ++t) model.m()[t] = alpha_m[t] / alpha;
  model.set_alpha(alpha);
  model.kind = "lda";
  model.meta["gibbs"] = {{"iterations", cfg.iterations},
                         {"burn_in", cfg.burn_in},
                         {"seed", cfg.seed},
                         {"alpha_m", alpha_m},
                         {"beta", beta}};
  return model;
}

std::vector<double> fold_in(const TopicModel& model, const Document& doc, const FoldInConfig& cfg) {
  if (!model.has_alpha()) throw invalid_argument("fold-in: model alpha is unset");
  if (cfg.chains < 1 || cfg.sweeps <= cfg.burn_in || cfg.burn_in < 0) {
    throw range_error("fold-in needs chains >= 1 and sweeps > burn_in >= 0");
  }
  const std::size_t n = model.n_topics();
  std::vector<double> prior(n);
  for (std::size_t t = 0; t < n; ++t) prior[t] = model.alpha() * model.m()[t];

  std::vector<std::size_t> tokens;
  for (const auto& wc : doc.counts) {
    if (wc.word < 0 || static_cast<std::size_t>(wc.word) >= model.vocab_size()) {
      throw range_error("fold-in: word id outside the model vocabulary");
    }
    tokens.insert(tokens.end(), static_cast<std::size_t>(wc.count), static_cast<std::size_t>(wc.word));
  }
  std::vector<double> result(n, 0.0);
  if (tokens.empty()) return result;

  std::vector<double> weights(n);
  std::vector<std::int64_t> counts(n);
  std::vector<std::size_t> z(tokens.size());
  auto draw = [&](Rng& rng, std::size_t w) {
    const double* phi = model.word_column(w);
    double total = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      weights[t] = phi[t] * (static_cast<double>(counts[t]) + prior[t]);
      total += weights[t];
    }
    if (!(total > 0.0)) {
      throw Error("model", "fold-in: word '" + model.vocab()[w] + "' has zero probability under every topic");
    }
    return rng.categorical(weights, total);
  };

  const double samples = static_cast<double>(cfg.chains) * (cfg.sweeps - cfg.burn_in) *
                         static_cast<double>(tokens.size());
  for (int chain = 0; chain < cfg.chains; ++chain) {
    Rng rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(chain)));
    std::fill(counts.begin(), counts.end(), 0);
    // Sequential initialization: each token conditioned on the ones before.
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      z[i] = draw(rng, tokens[i]);
      ++counts[z[i]];
    }
    for (int sweep = 0; sweep < cfg.sweeps; ++sweep) {
      for (std::size_t i = 0; i < tokens.size(); ++i) {
        --counts[z[i]];
        z[i] = draw(rng, tokens[i]);
        ++counts[z[i]];
      }
      if (sweep >= cfg.burn_in) {
        for (std::size_t t = 0; t < n; ++t) result[t] += static_cast<double>(counts[t]);
      }
    }
  }
  for (double& x : result) x /= samples;
  return result;
}

}  // namespace tg

// Apache License, Version 2.0, refer to LICENSE.txt

#include "tg/topic_model.hh"

#include <cmath>

#include "tg/error.hh"

namespace tg {

namespace {
constexpr int kTopicModelVersion = 1;
}

TopicModel::TopicModel(std::vector<std::string> vocab, std::size_t n_topics)
    : vocab_(std::move(vocab)), n_(n_topics), phi_(vocab_.size() * n_topics, 0.0), m_(n_topics, 0.0) {
  if (n_topics == 0) throw invalid_argument("topic model: needs at least one topic");
}

double TopicModel::row_sum(std::size_t t) const {
  double s = 0.0;
  for (std::size_t w = 0; w < vocab_.size(); ++w) s += phi(t, w);
  return s;
}

void TopicModel::validate() const {
  if (n_ == 0 || m_.size() != n_) throw invalid_argument("topic model: m has the wrong length");
  for (std::size_t t = 0; t < n_; ++t) {
    const double s = row_sum(t);
    if (!(std::abs(s - 1.0) <= 1e-9)) {
      throw invalid_argument("topic model: row " + std::to_string(t) + " sums to " + std::to_string(s));
    }
  }
  double ms = 0.0;
  for (double x : m_) {
    if (!(x >= 0.0)) throw invalid_argument("topic model: negative entry in m");
    ms += x;
  }
  if (!(std::abs(ms - 1.0) <= 1e-9)) throw invalid_argument("topic model: m does not sum to 1");
  for (std::size_t w = 0; w < vocab_.size(); ++w) {
    bool positive = false;
    for (std::size_t t = 0; t < n_; ++t) {
      const double p = phi(t, w);
      if (!(p >= 0.0)) throw invalid_argument("topic model: negative probability");
      positive |= p > 0.0;
    }
    if (!positive) throw invalid_argument("topic model: word '" + vocab_[w] + "' has no mass in any topic");
  }
  if (has_alpha() && !(alpha_ > 0.0 && std::isfinite(alpha_))) {
    throw invalid_argument("topic model: alpha must be positive");
  }
}

nlohmann::json to_json(const TopicModel& model) {
  // Rows are stored sparsely; Topic Grouper rows are mostly zero.
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t t = 0; t < model.n_topics(); ++t) {
    std::vector<std::size_t> words;
    std::vector<double> probs;
    for (std::size_t w = 0; w < model.vocab_size(); ++w) {
      if (model.phi(t, w) != 0.0) {
        words.push_back(w);
        probs.push_back(model.phi(t, w));
      }
    }
    rows.push_back({{"words", words}, {"probs", probs}});
  }
  return {{"kind", model.kind},
          {"version", kTopicModelVersion},
          {"n_topics", model.n_topics()},
          {"vocab", model.vocab()},
          {"m", model.m()},
          {"alpha", model.has_alpha() ? nlohmann::json(model.alpha()) : nlohmann::json(nullptr)},
          {"phi", std::move(rows)},
          {"meta", model.meta}};
}

TopicModel topic_model_from_json(const nlohmann::json& j) {
  try {
    if (j.at("version").get<int>() != kTopicModelVersion) {
      throw parse_error("unsupported topic model version");
    }
    if (j.contains("merges")) throw parse_error("expected a topic model, found a dendrogram");
    const auto n = j.at("n_topics").get<std::size_t>();
    TopicModel model(j.at("vocab").get<std::vector<std::string>>(), n);
    model.kind = j.value("kind", std::string("topic-model"));
    model.m() = j.at("m").get<std::vector<double>>();
    if (!j.at("alpha").is_null()) model.set_alpha(j.at("alpha").get<double>());
    const auto& rows = j.at("phi");
    if (rows.size() != n) throw parse_error("topic model: phi has " + std::to_string(rows.size()) + " rows");
    for (std::size_t t = 0; t < n; ++t) {
      const auto words = rows[t].at("words").get<std::vector<std::size_t>>();
      const auto probs = rows[t].at("probs").get<std::vector<double>>();
      if (words.size() != probs.size()) throw parse_error("topic model: ragged phi row");
      for (std::size_t k = 0; k < words.size(); ++k) {
        if (words[k] >= model.vocab_size()) throw parse_error("topic model: word id out of range");
        model.phi(t, words[k]) = probs[k];
      }
    }
    if (j.contains("meta")) model.meta = j.at("meta");
    model.validate();
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(std::string("topic model: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == "parse") throw;
    throw parse_error(e.what());
  }
}

}  // namespace tg

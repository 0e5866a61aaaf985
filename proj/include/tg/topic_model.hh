// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "json.hpp"

namespace tg {

// n topic-word distributions Phi over a vocabulary plus the document-topic
// prior alpha * m. Stored word-major: phi(t, w) = data[w * n + t], since the
// evaluators need all topics' probabilities for one word at a time.
class TopicModel {
 public:
  TopicModel() = default;
  TopicModel(std::vector<std::string> vocab, std::size_t n_topics);

  std::size_t n_topics() const { return n_; }
  std::size_t vocab_size() const { return vocab_.size(); }
  const std::vector<std::string>& vocab() const { return vocab_; }

  double phi(std::size_t t, std::size_t w) const { return phi_[w * n_ + t]; }
  double& phi(std::size_t t, std::size_t w) { return phi_[w * n_ + t]; }
  // All n topic probabilities of word w.
  const double* word_column(std::size_t w) const { return phi_.data() + w * n_; }

  std::vector<double>& m() { return m_; }
  const std::vector<double>& m() const { return m_; }

  bool has_alpha() const { return !std::isnan(alpha_); }
  double alpha() const { return alpha_; }
  void set_alpha(double a) { alpha_ = a; }

  std::string kind = "topic-model";
  nlohmann::json meta = nlohmann::json::object();

  double row_sum(std::size_t t) const;
  // Throws unless rows and m sum to 1 within 1e-9 and every word has positive
  // mass in some topic.
  void validate() const;

 private:
  std::vector<std::string> vocab_;
  std::size_t n_ = 0;
  std::vector<double> phi_;
  std::vector<double> m_;
  double alpha_ = std::numeric_limits<double>::quiet_NaN();
};

nlohmann::json to_json(const TopicModel& model);
TopicModel topic_model_from_json(const nlohmann::json& j);

}  // namespace tg

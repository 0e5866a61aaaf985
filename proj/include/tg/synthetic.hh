// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "tg/corpus.hh"

namespace tg {

struct SyntheticSpec {
  int n_topics = 4;
  int words_per_topic = 100;
  int n_docs = 6000;
  int doc_length = 30;
  double beta_tilde = 1.0 / 100.0;
  std::vector<double> alpha_m_tilde = {5.0, 0.5, 0.5, 0.5};
  std::uint64_t seed = 0;

  void validate() const;
};

// Generator-side truth. Defined over the generator's full vocabulary
// (n_topics * words_per_topic words named "0", "1", ...), which may be larger
// than the vocabulary observed in the generated corpus.
struct TrueModel {
  std::vector<std::string> vocab;
  // n_topics rows over vocab, each supported on its own block of words.
  std::vector<std::vector<double>> topic_word;
  std::vector<int> word_topic;

  std::size_t n_topics() const { return topic_word.size(); }
};

struct SyntheticData {
  Corpus corpus;
  TrueModel truth;
};

// Words 0..w-1 belong to topic 0, the next block to topic 1, and so on. Each
// token draws its topic from the document's Dirichlet(alpha_m_tilde) mixture,
// then its word from that topic's Dirichlet(beta_tilde) distribution.
SyntheticData generate_synthetic(const SyntheticSpec& spec);

nlohmann::json to_json(const TrueModel& truth);
TrueModel true_model_from_json(const nlohmann::json& j);

}  // namespace tg

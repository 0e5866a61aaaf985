// Apache License, Version 2.0, refer to LICENSE.txt

#include "tg/synthetic.hh"

#include "tg/error.hh"
#include "tg/rng.hh"

namespace tg {

void SyntheticSpec::validate() const {
  if (n_topics < 1 || words_per_topic < 1 || n_docs < 1 || doc_length < 1) {
    throw invalid_argument("synthetic spec: sizes must be positive");
  }
  if (!(beta_tilde > 0.0)) throw invalid_argument("synthetic spec: beta must be positive");
  if (alpha_m_tilde.size() != static_cast<std::size_t>(n_topics)) {
    throw invalid_argument("synthetic spec: alpha_m has " + std::to_string(alpha_m_tilde.size()) +
                           " entries for " + std::to_string(n_topics) + " topics");
  }
  for (double a : alpha_m_tilde) {
    if (!(a > 0.0)) throw invalid_argument("synthetic spec: alpha_m entries must be positive");
  }
}

SyntheticData generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  const auto n_topics = static_cast<std::size_t>(spec.n_topics);
  const auto block = static_cast<std::size_t>(spec.words_per_topic);
  const std::size_t n_words = n_topics * block;

  TrueModel truth;
  truth.vocab.reserve(n_words);
  for (std::size_t w = 0; w < n_words; ++w) truth.vocab.push_back(std::to_string(w));
  truth.word_topic.resize(n_words);
  truth.topic_word.assign(n_topics, std::vector<double>(n_words, 0.0));
  std::vector<std::vector<double>> block_dist(n_topics);
  const std::vector<double> beta(block, spec.beta_tilde);
  for (std::size_t t = 0; t < n_topics; ++t) {
    block_dist[t] = rng.dirichlet(beta);
    for (std::size_t k = 0; k < block; ++k) {
      truth.topic_word[t][t * block + k] = block_dist[t][k];
      truth.word_topic[t * block + k] = static_cast<int>(t);
    }
  }

  std::vector<Document> docs;
  docs.reserve(static_cast<std::size_t>(spec.n_docs));
  std::vector<WordCount> counts;
  for (int d = 0; d < spec.n_docs; ++d) {
    const auto theta = rng.dirichlet(spec.alpha_m_tilde);
    counts.clear();
    for (int j = 0; j < spec.doc_length; ++j) {
      const std::size_t t = rng.categorical(theta, 1.0);
      const std::size_t k = rng.categorical(block_dist[t], 1.0);
      counts.push_back({static_cast<WordId>(t * block + k), 1});
    }
    docs.push_back(Document::from_counts(d, counts));
  }
  return {Corpus(Vocabulary(truth.vocab), std::move(docs)), std::move(truth)};
}

nlohmann::json to_json(const TrueModel& truth) {
  return {{"version", 1},
          {"kind", "true-model"},
          {"vocab", truth.vocab},
          {"topic_word", truth.topic_word},
          {"word_topic", truth.word_topic}};
}

TrueModel true_model_from_json(const nlohmann::json& j) {
  if (j.value("kind", "") != "true-model") throw parse_error("not a true-model document");
  TrueModel t;
  t.vocab = j.at("vocab").get<std::vector<std::string>>();
  t.topic_word = j.at("topic_word").get<std::vector<std::vector<double>>>();
  t.word_topic = j.at("word_topic").get<std::vector<int>>();
  for (const auto& row : t.topic_word) {
    if (row.size() != t.vocab.size()) throw parse_error("true-model: row size mismatch");
  }
  if (t.word_topic.size() != t.vocab.size()) throw parse_error("true-model: word_topic size mismatch");
  return t;
}

}  // namespace tg

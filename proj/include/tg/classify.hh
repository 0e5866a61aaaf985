// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "tg/corpus.hh"
#include "tg/dendrogram.hh"
#include "tg/lda.hh"
#include "tg/topic_model.hh"

namespace tg {

struct LabeledCorpus {
  Corpus corpus;
  std::vector<int> labels;  // by DocIndex
  std::vector<std::string> classes;

  std::size_t n_classes() const { return classes.size(); }
};

// CSV "doc_id,label" (header optional). doc_id is matched against document
// names first, then numeric document ids. Documents without a label are an
// error.
LabeledCorpus attach_labels(Corpus corpus, const std::filesystem::path& label_file,
                            std::vector<std::string> classes = {});

// Sparse feature counts, sorted by feature index.
using FeatureVector = std::vector<std::pair<std::int32_t, double>>;

class Reducer {
 public:
  virtual ~Reducer() = default;
  virtual std::size_t n_features() const = 0;
  // Documents are expressed over the training vocabulary.
  virtual FeatureVector reduce(const Document& doc) const = 0;
  virtual std::string describe() const = 0;
};

// f_d(t) = sum_{w in t} f_d(w) via the flat view's word-topic assignment.
class TgReducer final : public Reducer {
 public:
  explicit TgReducer(FlatView view) : view_(std::move(view)) {}
  std::size_t n_features() const override { return view_.topics.size(); }
  FeatureVector reduce(const Document& doc) const override;
  std::string describe() const override;

 private:
  FlatView view_;
};

// f_d(t) ~ |d| p(t | d) with p(t | d) from fold-in.
class LdaReducer final : public Reducer {
 public:
  LdaReducer(TopicModel model, FoldInConfig cfg) : model_(std::move(model)), cfg_(cfg) {}
  std::size_t n_features() const override { return model_.n_topics(); }
  FeatureVector reduce(const Document& doc) const override;
  std::string describe() const override;

 private:
  TopicModel model_;
  FoldInConfig cfg_;
};

// Keeps only the selected words; each becomes its own feature.
class WordSelectionReducer final : public Reducer {
 public:
  WordSelectionReducer(std::vector<WordId> selected, std::size_t vocab_size, std::string name);
  std::size_t n_features() const override { return n_features_; }
  FeatureVector reduce(const Document& doc) const override;
  std::string describe() const override { return name_; }

 private:
  std::vector<std::int32_t> feature_of_;  // -1 when dropped
  std::size_t n_features_;
  std::string name_;
};

FeatureVector reduce_tg(const FlatView& view, const Document& doc);
FeatureVector reduce_lda(const TopicModel& model, const Document& doc, const FoldInConfig& cfg);

// IG(w) = H(C) - p(w) H(C | w present) - (1 - p(w)) H(C | w absent) over
// document presence.
std::vector<double> information_gain(const LabeledCorpus& labeled);

// Top-k words by information gain / document frequency, ties by word id.
std::vector<WordId> select_ig(const LabeledCorpus& labeled, std::size_t k);
std::vector<WordId> select_df(const LabeledCorpus& labeled, std::size_t k);

struct NBModel {
  std::vector<double> log_prior;
  // log_cond[c * n_features + t]
  std::vector<double> log_cond;
  std::size_t n_features = 0;
  std::string reducer;

  std::size_t n_classes() const { return log_prior.size(); }
  double log_cond_at(std::size_t c, std::size_t t) const { return log_cond[c * n_features + t]; }
};

// log p(t | c) = log((1 + sum_{d in D_c} f_d(t)) / (n_features + sum_{d in D_c} |d|)).
NBModel nb_train(const LabeledCorpus& labeled, const Reducer& reducer);
// Same, with documents already reduced.
NBModel nb_train(const std::vector<FeatureVector>& reduced, const std::vector<int>& labels,
                 std::size_t n_classes, std::size_t n_features, std::string reducer_name);

int nb_classify(const NBModel& model, const FeatureVector& features);
double micro_accuracy(const NBModel& model, const LabeledCorpus& test, const Reducer& reducer);

}  // namespace tg

// Apache License, Version 2.0, refer to LICENSE.txt

#include "tg/classify.hh"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>

#include "tg/error.hh"
#include "tg/exec.hh"
#include "tg/rng.hh"

namespace tg {

namespace {

std::string strip(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
  return s.substr(i);
}

double entropy(std::span<const std::int64_t> counts) {
  std::int64_t total = 0;
  for (auto c : counts) total += c;
  if (total == 0) return 0.0;
  double h = 0.0;
  for (auto c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log(p);
  }
  return h;
}

std::vector<WordId> top_k(const std::vector<double>& score, std::size_t k) {
  if (k > score.size()) {
    throw range_error("cannot select " + std::to_string(k) + " of " + std::to_string(score.size()) + " words");
  }
  std::vector<WordId> order(score.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](WordId a, WordId b) {
    return score[static_cast<std::size_t>(a)] > score[static_cast<std::size_t>(b)];
  });
  order.resize(k);
  std::sort(order.begin(), order.end());
  return order;
}

}  // namespace

LabeledCorpus attach_labels(Corpus corpus, const std::filesystem::path& label_file,
                            std::vector<std::string> classes) {
  std::ifstream in(label_file);
  if (!in) throw io_error("cannot open " + label_file.string());
  std::unordered_map<std::string, std::string> label_of;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip(line);
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw parse_error(label_file.string() + ":" + std::to_string(line_no) + ": expected doc_id,label");
    }
    std::string doc = strip(line.substr(0, comma)), label = strip(line.substr(comma + 1));
    if (line_no == 1 && doc == "doc_id") continue;
    if (doc.empty() || label.empty()) {
      throw parse_error(label_file.string() + ":" + std::to_string(line_no) + ": empty field");
    }
    label_of[doc] = label;
  }

  const bool fixed = !classes.empty();
  if (!fixed) {
    std::set<std::string> names;
    for (const auto& [doc, label] : label_of) names.insert(label);
    classes.assign(names.begin(), names.end());
  }
  std::unordered_map<std::string, int> class_id;
  for (std::size_t c = 0; c < classes.size(); ++c) class_id.emplace(classes[c], static_cast<int>(c));

  std::vector<int> labels;
  labels.reserve(corpus.doc_count());
  for (std::size_t d = 0; d < corpus.doc_count(); ++d) {
    auto it = label_of.end();
    if (!corpus.doc_names().empty()) it = label_of.find(corpus.doc_names()[d]);
    if (it == label_of.end()) it = label_of.find(std::to_string(corpus.documents()[d].id));
    if (it == label_of.end()) {
      throw range_error("document " + std::to_string(corpus.documents()[d].id) + " has no label");
    }
    auto c = class_id.find(it->second);
    if (c == class_id.end()) throw range_error("unknown class '" + it->second + "'");
    labels.push_back(c->second);
  }
  return {std::move(corpus), std::move(labels), std::move(classes)};
}

FeatureVector reduce_tg(const FlatView& view, const Document& doc) {
  std::map<std::int32_t, double> acc;
  for (const auto& wc : doc.counts) {
    acc[view.assignment.at(static_cast<std::size_t>(wc.word))] += wc.count;
  }
  return {acc.begin(), acc.end()};
}

FeatureVector reduce_lda(const TopicModel& model, const Document& doc, const FoldInConfig& cfg) {
  const auto p = fold_in(model, doc, cfg);
  FeatureVector out;
  for (std::size_t t = 0; t < p.size(); ++t) {
    if (p[t] > 0.0) out.push_back({static_cast<std::int32_t>(t), static_cast<double>(doc.length) * p[t]});
  }
  return out;
}

FeatureVector TgReducer::reduce(const Document& doc) const { return reduce_tg(view_, doc); }

std::string TgReducer::describe() const { return "tg(n=" + std::to_string(view_.n) + ")"; }

FeatureVector LdaReducer::reduce(const Document& doc) const {
  FoldInConfig cfg = cfg_;
  cfg.seed = mix_seed(cfg_.seed, static_cast<std::uint64_t>(doc.id));
  return reduce_lda(model_, doc, cfg);
}

std::string LdaReducer::describe() const { return "lda(n=" + std::to_string(model_.n_topics()) + ")"; }

WordSelectionReducer::WordSelectionReducer(std::vector<WordId> selected, std::size_t vocab_size,
                                           std::string name)
    : feature_of_(vocab_size, -1), n_features_(selected.size()), name_(std::move(name)) {
  std::sort(selected.begin(), selected.end());
  for (std::size_t k = 0; k < selected.size(); ++k) {
    const auto w = static_cast<std::size_t>(selected[k]);
    if (w >= vocab_size) throw range_error("selected word id out of range");
    feature_of_[w] = static_cast<std::int32_t>(k);
  }
}

FeatureVector WordSelectionReducer::reduce(const Document& doc) const {
  FeatureVector out;
  for (const auto& wc : doc.counts) {
    const auto f = feature_of_.at(static_cast<std::size_t>(wc.word));
    if (f >= 0) out.push_back({f, static_cast<double>(wc.count)});
  }
  return out;
}

std::vector<double> information_gain(const LabeledCorpus& labeled) {
  const Corpus& corpus = labeled.corpus;
  const std::size_t n_classes = labeled.n_classes();
  std::vector<std::int64_t> class_docs(n_classes, 0);
  for (int c : labeled.labels) ++class_docs[static_cast<std::size_t>(c)];
  const double h_c = entropy(class_docs);
  const auto n_docs = static_cast<double>(corpus.doc_count());

  std::vector<double> ig(corpus.vocab_size());
  std::vector<std::int64_t> present(n_classes), absent(n_classes);
  for (std::size_t w = 0; w < corpus.vocab_size(); ++w) {
    std::fill(present.begin(), present.end(), 0);
    std::int64_t df = 0;
    for (const auto& p : corpus.postings(static_cast<WordId>(w))) {
      ++present[static_cast<std::size_t>(labeled.labels[static_cast<std::size_t>(p.doc)])];
      ++df;
    }
    for (std::size_t c = 0; c < n_classes; ++c) absent[c] = class_docs[c] - present[c];
    const double p_w = static_cast<double>(df) / n_docs;
    ig[w] = h_c - p_w * entropy(present) - (1.0 - p_w) * entropy(absent);
  }
  return ig;
}

std::vector<WordId> select_ig(const LabeledCorpus& labeled, std::size_t k) {
  return top_k(information_gain(labeled), k);
}

std::vector<WordId> select_df(const LabeledCorpus& labeled, std::size_t k) {
  const Corpus& corpus = labeled.corpus;
  std::vector<double> df(corpus.vocab_size());
  for (std::size_t w = 0; w < corpus.vocab_size(); ++w) {
    df[w] = static_cast<double>(corpus.postings(static_cast<WordId>(w)).size());
  }
  return top_k(df, k);
}

NBModel nb_train(const std::vector<FeatureVector>& reduced, const std::vector<int>& labels,
                 std::size_t n_classes, std::size_t n_features, std::string reducer_name) {
  if (reduced.size() != labels.size()) throw invalid_argument("nb_train: one label per document required");
  std::vector<std::int64_t> docs(n_classes, 0);
  std::vector<double> mass(n_classes, 0.0), counts(n_classes * n_features, 0.0);
  for (std::size_t d = 0; d < reduced.size(); ++d) {
    const auto c = static_cast<std::size_t>(labels[d]);
    if (c >= n_classes) throw range_error("nb_train: class id out of range");
    ++docs[c];
    for (const auto& [t, f] : reduced[d]) {
      if (t < 0 || static_cast<std::size_t>(t) >= n_features) throw range_error("nb_train: feature out of range");
      counts[c * n_features + static_cast<std::size_t>(t)] += f;
      mass[c] += f;
    }
  }
  NBModel model;
  model.n_features = n_features;
  model.reducer = std::move(reducer_name);
  model.log_prior.resize(n_classes);
  model.log_cond.resize(n_classes * n_features);
  const auto total = static_cast<double>(reduced.size());
  for (std::size_t c = 0; c < n_classes; ++c) {
    if (docs[c] == 0) throw range_error("nb_train: class " + std::to_string(c) + " has no documents");
    model.log_prior[c] = std::log(static_cast<double>(docs[c]) / total);
    const double denom = static_cast<double>(n_features) + mass[c];
    for (std::size_t t = 0; t < n_features; ++t) {
      model.log_cond[c * n_features + t] = std::log((1.0 + counts[c * n_features + t]) / denom);
    }
  }
  return model;
}

NBModel nb_train(const LabeledCorpus& labeled, const Reducer& reducer) {
  const auto& docs = labeled.corpus.documents();
  std::vector<FeatureVector> reduced(docs.size());
  parallel_for(static_cast<std::int64_t>(docs.size()), Exec::parallel, [&](std::int64_t d) {
    reduced[static_cast<std::size_t>(d)] = reducer.reduce(docs[static_cast<std::size_t>(d)]);
  });
  return nb_train(reduced, labeled.labels, labeled.n_classes(), reducer.n_features(), reducer.describe());
}

int nb_classify(const NBModel& model, const FeatureVector& features) {
  int best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < model.n_classes(); ++c) {
    double score = model.log_prior[c];
    for (const auto& [t, f] : features) score += f * model.log_cond_at(c, static_cast<std::size_t>(t));
    if (score > best_score) {
      best_score = score;
      best = static_cast<int>(c);
    }
  }
  return best;
}

double micro_accuracy(const NBModel& model, const LabeledCorpus& test, const Reducer& reducer) {
  const auto& docs = test.corpus.documents();
  if (docs.empty()) throw range_error("micro_accuracy: empty test set");
  if (reducer.n_features() != model.n_features) throw invalid_argument("micro_accuracy: reducer does not match model");
  std::vector<char> hit(docs.size(), 0);
  parallel_for(static_cast<std::int64_t>(docs.size()), Exec::parallel, [&](std::int64_t d) {
    const auto du = static_cast<std::size_t>(d);
    hit[du] = nb_classify(model, reducer.reduce(docs[du])) == test.labels[du];
  });
  const auto correct = std::count(hit.begin(), hit.end(), 1);
  return static_cast<double>(correct) / static_cast<double>(docs.size());
}

}  // namespace tg

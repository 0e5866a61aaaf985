// Apache License, Version 2.0, refer to LICENSE.txt

#include <cmath>
#include <numeric>
#include <set>

#include "doctest.h"
#include "fixtures.hh"
#include "tg/classify.hh"
#include "tg/error.hh"
#include "tg/train.hh"

using namespace tg;
using tg::testing::make_corpus;

namespace {

double mass(const FeatureVector& f) {
  double s = 0.0;
  for (const auto& [t, x] : f) s += x;
  return s;
}

// Three classes over a shared vocabulary with class-specific words.
LabeledCorpus toy_three_class(std::uint64_t seed, int n_docs) {
  Rng rng(seed);
  const std::vector<std::vector<std::string>> words = {
      {"apple", "pear", "plum", "fig"}, {"goal", "match", "team", "score"}, {"vote", "law", "party", "seat"}};
  const std::vector<std::string> shared = {"the", "and", "news", "today"};
  std::vector<std::vector<std::pair<std::string, int>>> docs;
  std::vector<int> labels;
  for (int d = 0; d < n_docs; ++d) {
    const int c = static_cast<int>(rng.below(3));
    std::map<std::string, int> counts;
    const int len = 4 + static_cast<int>(rng.below(6));
    for (int i = 0; i < len; ++i) {
      const double u = rng.uniform();
      if (u < 0.5) {
        ++counts[words[static_cast<std::size_t>(c)][rng.below(4)]];
      } else if (u < 0.65) {
        ++counts[words[rng.below(3)][rng.below(4)]];
      } else {
        ++counts[shared[rng.below(4)]];
      }
    }
    docs.emplace_back(counts.begin(), counts.end());
    labels.push_back(c);
  }
  return {make_corpus(docs), labels, {"fruit", "sport", "politics"}};
}

// Plain multinomial NB over words, written out directly.
std::vector<int> word_nb_predictions(const LabeledCorpus& train, const LabeledCorpus& test) {
  const std::size_t v = train.corpus.vocab_size(), k = train.n_classes();
  std::vector<double> prior(k, 0.0), len(k, 0.0), cnt(k * v, 0.0);
  for (std::size_t d = 0; d < train.corpus.doc_count(); ++d) {
    const auto c = static_cast<std::size_t>(train.labels[d]);
    prior[c] += 1.0;
    for (const auto& wc : train.corpus.documents()[d].counts) {
      cnt[c * v + static_cast<std::size_t>(wc.word)] += wc.count;
      len[c] += wc.count;
    }
  }
  std::vector<int> out;
  for (const auto& doc : test.corpus.documents()) {
    int best = 0;
    double best_s = -1e300;
    for (std::size_t c = 0; c < k; ++c) {
      double s = std::log(prior[c] / static_cast<double>(train.corpus.doc_count()));
      for (const auto& wc : doc.counts) {
        s += wc.count * std::log((1.0 + cnt[c * v + static_cast<std::size_t>(wc.word)]) / (static_cast<double>(v) + len[c]));
      }
      if (s > best_s) {
        best_s = s;
        best = static_cast<int>(c);
      }
    }
    out.push_back(best);
  }
  return out;
}

}  // namespace

TEST_CASE("TG reduction on the three-word corpus") {
  const Corpus c = testing::three_word_corpus();
  const Dendrogram d = train_ehac(c);
  const FlatView v2 = flat_view(d, 2);
  // Topic 0 is {b, c}, topic 1 is {a}.
  CHECK(reduce_tg(v2, c.documents()[0]) == FeatureVector{{0, 1.0}, {1, 2.0}});
  CHECK(reduce_tg(v2, c.documents()[1]) == FeatureVector{{0, 2.0}});
  CHECK(reduce_tg(flat_view(d, 1), c.documents()[0]) == FeatureVector{{0, 3.0}});
}

TEST_CASE("TG reduction conserves mass and is the identity at n = |V|") {
  const Corpus c = testing::random_corpus(7, 14, 12);
  const Dendrogram d = train_mehac(c);
  for (int n = 1; n <= d.n_leaves; ++n) {
    const FlatView view = flat_view(d, n);
    for (const auto& doc : c.documents()) CHECK(mass(reduce_tg(view, doc)) == static_cast<double>(doc.length));
  }
  const FlatView full = flat_view(d, d.n_leaves);
  for (const auto& doc : c.documents()) {
    const auto f = reduce_tg(full, doc);
    REQUIRE(f.size() == doc.counts.size());
    std::multiset<std::pair<WordId, double>> got, want;
    for (const auto& [t, x] : f) got.insert({full.topics[static_cast<std::size_t>(t)].words[0], x});
    for (const auto& wc : doc.counts) want.insert({wc.word, static_cast<double>(wc.count)});
    CHECK(got == want);
  }
}

TEST_CASE("LDA reduction") {
  TopicModel m({"a", "b"}, 2);
  m.phi(0, 0) = 0.7;
  m.phi(0, 1) = 0.3;
  m.phi(1, 0) = 0.2;
  m.phi(1, 1) = 0.8;
  m.m() = {0.5, 0.5};
  m.set_alpha(1.0);
  const Document doc = Document::from_counts(4, {{0, 3}, {1, 2}});
  const auto f = reduce_lda(m, doc, {});
  CHECK(mass(f) == doctest::Approx(5.0).epsilon(1e-12));
  LdaReducer r(m, {.seed = 5});
  CHECK(r.reduce(doc) == r.reduce(doc));
  CHECK(r.n_features() == 2);

  TopicModel one({"a", "b"}, 1);
  one.phi(0, 0) = 0.5;
  one.phi(0, 1) = 0.5;
  one.m() = {1.0};
  one.set_alpha(1.0);
  CHECK(reduce_lda(one, doc, {}) == FeatureVector{{0, 5.0}});
}

TEST_CASE("information gain extremes") {
  // w "k" is in every class-0 document and no other; "s" is everywhere.
  const Corpus c = make_corpus({{{"k", 1}, {"s", 1}}, {{"k", 2}, {"s", 1}}, {{"s", 1}, {"x", 1}}, {{"s", 2}, {"y", 1}}});
  const LabeledCorpus lc{c, {0, 0, 1, 1}, {"p", "q"}};
  const auto ig = information_gain(lc);
  CHECK(ig[0] == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(std::abs(ig[1]) <= 1e-15);
  CHECK(select_ig(lc, 1) == std::vector<WordId>{0});
  CHECK(select_ig(lc, 4).size() == 4);
  CHECK_THROWS_AS(select_ig(lc, 5), Error);
}

TEST_CASE("document frequency selection") {
  const Corpus c = testing::three_word_corpus();
  const LabeledCorpus lc{c, {0, 1}, {"p", "q"}};
  CHECK(select_df(lc, 1) == std::vector<WordId>{1});
  CHECK(select_df(lc, 3) == std::vector<WordId>{0, 1, 2});
  // Ties by word id: a and c both occur in one document.
  CHECK(select_df(lc, 2) == std::vector<WordId>{0, 1});
}

TEST_CASE("selection is stable under document reordering") {
  const LabeledCorpus lc = toy_three_class(3, 60);
  std::vector<Document> docs = lc.corpus.documents();
  std::vector<int> labels = lc.labels;
  std::reverse(docs.begin(), docs.end());
  std::reverse(labels.begin(), labels.end());
  const LabeledCorpus rev{Corpus(lc.corpus.vocabulary(), docs), labels, lc.classes};
  for (std::size_t k : {1u, 3u, 7u}) {
    CHECK(select_ig(lc, k) == select_ig(rev, k));
    CHECK(select_df(lc, k) == select_df(rev, k));
    CHECK(select_ig(lc, k).size() == k);
  }
}

TEST_CASE("NB conditionals sum to one and priors follow class shares") {
  const LabeledCorpus lc = toy_three_class(5, 40);
  const Dendrogram d = train_ehac(lc.corpus);
  const NBModel nb = nb_train(lc, TgReducer(flat_view(d, 5)));
  REQUIRE(nb.n_features == 5);
  for (std::size_t c = 0; c < nb.n_classes(); ++c) {
    double s = 0.0;
    for (std::size_t t = 0; t < nb.n_features; ++t) s += std::exp(nb.log_cond_at(c, t));
    CHECK(std::abs(s - 1.0) <= 1e-9);
  }
  double p = 0.0;
  for (double lp : nb.log_prior) p += std::exp(lp);
  CHECK(p == doctest::Approx(1.0));
}

TEST_CASE("TG reducer at n = |V| reproduces word-level NB") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const LabeledCorpus all = toy_three_class(seed, 90);
    const auto parts = split(all.corpus, 0.3, seed);
    // Labels follow document ids, which survive the split.
    auto relabel = [&](const Corpus& c) {
      std::vector<int> labels;
      for (const auto& doc : c.documents()) labels.push_back(all.labels[static_cast<std::size_t>(doc.id - 1)]);
      return LabeledCorpus{c, labels, all.classes};
    };
    const LabeledCorpus train = relabel(parts.train), test = relabel(parts.test);
    const Dendrogram d = train_mehac(train.corpus);
    const TgReducer reducer(flat_view(d, d.n_leaves));
    const NBModel nb = nb_train(train, reducer);
    const auto expected = word_nb_predictions(train, test);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < test.corpus.doc_count(); ++i) {
      CHECK(nb_classify(nb, reducer.reduce(test.corpus.documents()[i])) == expected[i]);
      correct += expected[i] == test.labels[i];
    }
    const double acc = micro_accuracy(nb, test, reducer);
    CHECK(acc == static_cast<double>(correct) / static_cast<double>(test.corpus.doc_count()));
    CHECK(acc >= 0.0);
    CHECK(acc <= 1.0);
  }
}

TEST_CASE("NB classification details") {
  const LabeledCorpus lc = toy_three_class(9, 30);
  const WordSelectionReducer r(select_ig(lc, 6), lc.corpus.vocab_size(), "ig");
  const NBModel nb = nb_train(lc, r);
  // Empty document: the largest prior wins.
  const auto best_prior = std::max_element(nb.log_prior.begin(), nb.log_prior.end()) - nb.log_prior.begin();
  CHECK(nb_classify(nb, {}) == best_prior);
  // Shifting every prior equally changes no prediction.
  NBModel shifted = nb;
  for (double& lp : shifted.log_prior) lp += std::log(0.25);
  for (const auto& doc : lc.corpus.documents()) CHECK(nb_classify(nb, r.reduce(doc)) == nb_classify(shifted, r.reduce(doc)));

  const LabeledCorpus single{lc.corpus, std::vector<int>(lc.corpus.doc_count(), 0), {"only"}};
  const NBModel one = nb_train(single, r);
  CHECK(micro_accuracy(one, single, r) == 1.0);

  const LabeledCorpus missing{lc.corpus, std::vector<int>(lc.corpus.doc_count(), 0), {"a", "b"}};
  CHECK_THROWS_AS(nb_train(missing, r), Error);
}

TEST_CASE("word selection reducer") {
  const WordSelectionReducer r({4, 1}, 6, "df");
  CHECK(r.n_features() == 2);
  CHECK(r.reduce(Document::from_counts(1, {{0, 2}, {1, 3}, {4, 1}})) == FeatureVector{{0, 3.0}, {1, 1.0}});
  CHECK_THROWS_AS(WordSelectionReducer({6}, 6, "x"), Error);
}

TEST_CASE("label files") {
  testing::TempDir dir;
  const Corpus c = testing::three_word_corpus();
  const auto path = dir.write("labels.csv", "doc_id,label\n1,spam\n2, ham\r\n");
  const LabeledCorpus lc = attach_labels(c, path);
  CHECK(lc.classes == std::vector<std::string>{"ham", "spam"});
  CHECK(lc.labels == std::vector<int>{1, 0});
  CHECK(attach_labels(c, path, {"spam", "ham"}).labels == std::vector<int>{0, 1});
  CHECK_THROWS_AS(attach_labels(c, dir.write("short.csv", "1,spam\n")), Error);
  CHECK_THROWS_AS(attach_labels(c, dir.write("bad.csv", "1 spam\n")), Error);
  CHECK_THROWS_AS(attach_labels(c, path, {"spam"}), Error);
  CHECK_THROWS_AS(attach_labels(c, dir.path() / "none.csv"), Error);
}

// Apache License, Version 2.0, refer to LICENSE.txt

// topicgrouper: command line front end for corpus preparation, training,
// inspection, evaluation, classification and the explorer API.

#include <csignal>
#include <cstdio>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "cli_util.hh"
#include "tg/classify.hh"
#include "tg/corpus_io.hh"
#include "tg/eval.hh"
#include "tg/explore.hh"
#include "tg/lda.hh"
#include "tg/server.hh"
#include "tg/synthetic.hh"
#include "tg/train.hh"

namespace fs = std::filesystem;
using namespace tg;
using namespace tg::cli;

namespace {

RunMeta g_meta;

std::string shortest(double x) {
  std::ostringstream s;
  s << std::setprecision(17) << x;
  return s.str();
}

void log_line(const std::string& msg) { std::cerr << msg << '\n'; }

// A model file is either a dendrogram or a TopicModel.
struct LoadedModel {
  std::optional<Dendrogram> dendrogram;
  std::optional<TopicModel> topics;
};

LoadedModel load_model(const fs::path& path) {
  const auto j = read_json(path);
  LoadedModel m;
  if (j.value("kind", std::string()) == "dendrogram") {
    m.dendrogram = dendrogram_from_json(j);
  } else {
    m.topics = topic_model_from_json(j);
  }
  return m;
}

Dendrogram load_dendrogram(const fs::path& path) {
  auto m = load_model(path);
  if (!m.dendrogram) throw invalid_argument(path.string() + " is not a Topic Grouper dendrogram");
  return std::move(*m.dendrogram);
}

// Re-expresses a corpus over the training vocabulary, keeping names aligned
// with the documents that survive.
Corpus over_vocabulary(const Corpus& test, const Vocabulary& vocab) {
  if (test.vocabulary().words() == vocab.words()) return test;
  auto docs = test.documents_over(vocab);
  std::vector<std::string> names;
  if (!test.doc_names().empty()) {
    std::map<std::int64_t, std::string> by_id;
    for (std::size_t d = 0; d < test.doc_count(); ++d) by_id[test.documents()[d].id] = test.doc_names()[d];
    for (const auto& doc : docs) names.push_back(by_id[doc.id]);
  }
  return Corpus::over_vocabulary(vocab, std::move(docs), std::move(names));
}

void write_json_artifact(const fs::path& path, nlohmann::json j) {
  write_text(path, j.dump(1) + "\n");
}

// ---------------------------------------------------------------- commands

void save_corpus_atomic(const Corpus& c, const fs::path& path) {
  auto tmp = path;
  tmp += ".partial";
  try {
    save_corpus(c, tmp);
    fs::rename(tmp, path);
  } catch (...) {
    std::error_code ec;
    fs::remove(tmp, ec);
    throw;
  }
}

struct IngestArgs {
  std::string format = "text";
  fs::path in, out, vocab, stopwords;
  std::int64_t min_freq = -1;
  std::size_t min_length = 3;
  bool stem = false;
  bool keep_non_alpha = false;
  std::int64_t quantity_cap = 100;
};

void cmd_ingest(const IngestArgs& a) {
  Corpus corpus = [&] {
    if (a.format == "bow") {
      Corpus c = ingest_bow(a.in, a.vocab.empty() ? std::nullopt : std::optional<fs::path>(a.vocab));
      return a.min_freq > 1 ? c.filtered(a.min_freq) : c;
    }
    if (a.format == "transactions") {
      Corpus c = ingest_transactions(a.in, a.quantity_cap);
      return a.min_freq > 1 ? c.filtered(a.min_freq) : c;
    }
    TokenizerOptions opts;
    opts.min_token_length = a.min_length;
    opts.alphabetic_only = !a.keep_non_alpha;
    opts.porter_stemming = a.stem;
    if (!a.stopwords.empty()) opts.stopword_file = a.stopwords;
    if (a.min_freq >= 0) opts.min_corpus_freq = a.min_freq;
    return ingest_text(a.in, opts);
  }();
  save_corpus_atomic(corpus, a.out);
  std::cout << "documents " << corpus.doc_count() << "\nvocabulary " << corpus.vocab_size() << "\ntokens "
            << corpus.token_count() << '\n';
}

struct SynthArgs {
  SyntheticSpec spec;
  std::string alpha_m;
  fs::path out, truth;
};

void cmd_synth(SynthArgs a) {
  if (!a.alpha_m.empty()) a.spec.alpha_m_tilde = parse_double_list(a.alpha_m);
  g_meta.seeds["synth"] = a.spec.seed;
  const auto data = generate_synthetic(a.spec);
  if (!a.truth.empty()) {
    auto j = to_json(data.truth);
    j["meta"] = g_meta.json();
    write_json_artifact(a.truth, j);
  }
  save_corpus_atomic(data.corpus, a.out);
  std::cout << "documents " << data.corpus.doc_count() << "\nvocabulary " << data.corpus.vocab_size() << '\n';
}

struct SplitArgs {
  fs::path in, train, test;
  double test_ratio = 0.1;
  std::uint64_t seed = 1;
  std::int64_t min_train_freq = 1;
};

void cmd_split(const SplitArgs& a) {
  const auto parts = split(load_corpus(a.in), a.test_ratio, a.seed, a.min_train_freq);
  save_corpus_atomic(parts.train, a.train);
  save_corpus_atomic(parts.test, a.test);
  std::cout << "train " << parts.train.doc_count() << " documents, " << parts.train.vocab_size()
            << " words\ntest " << parts.test.doc_count() << " documents\n";
}

struct TrainArgs {
  std::string algo = "mehac";
  fs::path in, out;
  double memory_budget_gb = 4.0;
  bool verbose = false;
};

void cmd_train(const TrainArgs& a) {
  const Corpus corpus = load_corpus(a.in);
  TrainOptions opts;
  opts.memory_budget_bytes = static_cast<std::size_t>(a.memory_budget_gb * static_cast<double>(1ull << 30));
  std::int64_t step = 0;
  if (a.verbose) {
    const auto& vocab = corpus.vocabulary();
    opts.on_merge = [&](const Merge& m) {
      ++step;
      std::cerr << "T(" << static_cast<std::int64_t>(corpus.vocab_size()) - step << ") join " << m.left << " + "
                << m.right << " -> " << m.new_id << " delta_h=" << shortest(m.delta_h);
      if (m.left < static_cast<TopicId>(vocab.size()) && m.right < static_cast<TopicId>(vocab.size())) {
        std::cerr << " (" << vocab.word(m.left) << ", " << vocab.word(m.right) << ")";
      }
      std::cerr << '\n';
    };
  }
  TrainStats stats;
  Dendrogram d = a.algo == "ehac" ? train_ehac(corpus, opts, &stats) : train_mehac(corpus, opts, &stats);
  auto meta = g_meta.json();
  meta["algorithm"] = d.meta.value("algorithm", a.algo);
  d.meta = meta;
  write_json_artifact(a.out, to_json(d));
  std::cout << "merges " << d.merges.size() << "\npeak_queue_entries " << stats.peak_queue_entries
            << "\ndelta_h_evaluations " << stats.delta_h_evaluations << '\n';
}

struct TopicsArgs {
  fs::path model, out;
  int n = 10;
  std::size_t top = 7;
};

void cmd_topics(const TopicsArgs& a) {
  const Explorer ex(load_dendrogram(a.model));
  const std::string table = topics_table(ex, a.n, a.top);
  if (a.out.empty()) {
    std::cout << table;
  } else {
    write_text(a.out, g_meta.comment() + table);
  }
}

struct SeriesArgs {
  fs::path model, out;
  int lo = 2, hi = 20;
};

void cmd_series(const SeriesArgs& a) {
  const Dendrogram d = load_dendrogram(a.model);
  const auto series = delta_h_series(d);
  std::ostringstream csv;
  csv << g_meta.comment() << "n,delta_h,ratio\n";
  for (const auto& p : series) {
    csv << p.n << ',' << shortest(p.delta_h) << ',';
    if (!std::isnan(p.ratio)) csv << shortest(p.ratio);
    csv << '\n';
  }
  if (a.out.empty()) {
    std::cout << csv.str();
  } else {
    write_text(a.out, csv.str());
  }
  const int lo = std::max(a.lo, 1), hi = std::min(a.hi, d.n_leaves - 1);
  std::cerr << "sharpest drop in [" << lo << ", " << hi << "]: n = " << sharpest_drop(series, lo, hi) << '\n';
}

struct ExportArgs {
  fs::path model, out;
  std::string format = "freemind";
  int max_depth = 6;
  std::size_t top = 5;
};

void cmd_export(const ExportArgs& a) {
  const Explorer ex(load_dendrogram(a.model));
  std::string body;
  if (a.format == "dot") {
    body = "// " + g_meta.json().dump() + "\n" + export_dot(ex, a.max_depth, a.top);
  } else {
    body = export_freemind(ex, a.max_depth, a.top);
    // FreeMind ignores comments after the root element.
    std::string meta = g_meta.json().dump();
    for (std::size_t p = 0; (p = meta.find("--", p)) != std::string::npos;) meta.replace(p, 2, "- -");
    body += "<!-- " + meta + " -->\n";
  }
  if (a.out.empty()) {
    std::cout << body;
  } else {
    write_text(a.out, body);
  }
}

struct EvalArgs {
  fs::path model, train, test, truth, out, csv;
  std::string baseline;
  std::string n_list;
  int particles = 20;
  std::uint64_t seed = 1;
  double alpha = 0.0;
};

// The models to evaluate, one per requested topic count.
std::vector<std::pair<int, TopicModel>> eval_models(const EvalArgs& a, const Corpus* train,
                                                    std::optional<int> default_n) {
  std::vector<std::pair<int, TopicModel>> out;
  if (!a.baseline.empty()) {
    if (!train) throw invalid_argument("--baseline needs --train");
    if (a.baseline == "unigram") {
      const int n = default_n.value_or(1);
      out.emplace_back(n, unigram_model(*train, static_cast<std::size_t>(n)));
    } else {
      if (a.truth.empty()) throw invalid_argument("--baseline perfect needs --truth");
      const TrueModel truth = true_model_from_json(read_json(a.truth));
      out.emplace_back(static_cast<int>(truth.n_topics()), perfect_model(truth, *train));
    }
    return out;
  }
  if (a.model.empty()) throw invalid_argument("either --model or --baseline is required");
  auto loaded = load_model(a.model);
  if (loaded.topics) {
    out.emplace_back(static_cast<int>(loaded.topics->n_topics()), std::move(*loaded.topics));
    return out;
  }
  const Dendrogram& d = *loaded.dendrogram;
  std::vector<int> ns;
  if (!a.n_list.empty()) {
    ns = parse_int_list(a.n_list);
  } else if (default_n) {
    ns = {*default_n};
  } else {
    throw invalid_argument("--n is required for a dendrogram model");
  }
  for (int n : ns) out.emplace_back(n, train ? tg_to_model(d, *train, n) : tg_to_model(d, n));
  return out;
}

void cmd_eval_perplexity(const EvalArgs& a) {
  std::optional<Corpus> train;
  if (!a.train.empty()) train = load_corpus(a.train);
  const Corpus* train_ptr = train ? &*train : nullptr;
  g_meta.seeds["estimator"] = a.seed;
  const EstimatorConfig cfg{.particles = a.particles, .seed = a.seed};
  nlohmann::json results = nlohmann::json::array();
  std::ostringstream csv;
  csv << g_meta.comment() << "n_topics,perplexity\n";
  const Corpus raw_test = load_corpus(a.test);
  for (auto& [n, model] : eval_models(a, train_ptr, std::nullopt)) {
    nlohmann::json entry = {{"n_topics", n}, {"kind", model.kind}};
    if (a.alpha > 0.0) {
      model.set_alpha(a.alpha);
    } else if (!model.has_alpha() || !a.baseline.empty()) {
      if (!train_ptr) throw invalid_argument("fitting alpha needs --train (or pass --alpha)");
      auto fit = fit_alpha(model, *train, cfg);
      model = std::move(fit.model);
      nlohmann::json trace = nlohmann::json::array();
      for (const auto& s : fit.trace) trace.push_back({{"alpha", s.alpha}, {"objective", s.objective}});
      entry["alpha_trace"] = trace;
    }
    const Corpus test = over_vocabulary(raw_test, Vocabulary(model.vocab()));
    const auto report = perplexity(model, test, cfg);
    entry["alpha"] = model.alpha();
    entry["report"] = to_json(report);
    results.push_back(entry);
    csv << n << ',' << shortest(report.perplexity) << '\n';
    log_line("n=" + std::to_string(n) + " alpha=" + shortest(model.alpha()) + " perplexity=" + shortest(report.perplexity));
  }
  const nlohmann::json doc = {{"kind", "perplexity"}, {"results", results}, {"meta", g_meta.json()}};
  if (!a.out.empty()) write_json_artifact(a.out, doc);
  if (!a.csv.empty()) write_text(a.csv, csv.str());
  if (a.out.empty() && a.csv.empty()) std::cout << csv.str();
}

void cmd_eval_error(const EvalArgs& a) {
  if (a.truth.empty()) throw invalid_argument("--truth is required");
  const TrueModel truth = true_model_from_json(read_json(a.truth));
  std::optional<Corpus> train;
  if (!a.train.empty()) train = load_corpus(a.train);
  const Corpus* train_ptr = train ? &*train : nullptr;
  nlohmann::json results = nlohmann::json::array();
  std::ostringstream csv;
  csv << g_meta.comment() << "n_topics,error_rate\n";
  for (const auto& [n, model] : eval_models(a, train_ptr, static_cast<int>(truth.n_topics()))) {
    const double err = error_rate(model, truth);
    results.push_back({{"n_topics", n}, {"kind", model.kind}, {"error_rate", err}});
    csv << n << ',' << shortest(err) << '\n';
  }
  const nlohmann::json doc = {{"kind", "error-rate"}, {"results", results}, {"meta", g_meta.json()}};
  if (!a.out.empty()) write_json_artifact(a.out, doc);
  if (!a.csv.empty()) write_text(a.csv, csv.str());
  if (a.out.empty()) std::cout << doc["results"].dump(1) << '\n';
}

struct ClassifyArgs {
  std::string reducer = "tg";
  fs::path train, test, labels, model, out;
  std::string sizes;
  std::uint64_t seed = 1;
  int iterations = 500, burn_in = 200;
  FoldInConfig fold;
};

void cmd_classify(const ClassifyArgs& a) {
  const Corpus train_corpus = load_corpus(a.train);
  const Corpus test_corpus = over_vocabulary(load_corpus(a.test), train_corpus.vocabulary());
  LabeledCorpus train = attach_labels(train_corpus, a.labels);
  const LabeledCorpus test = attach_labels(test_corpus, a.labels, train.classes);
  g_meta.seeds["gibbs"] = a.seed;
  g_meta.seeds["fold_in"] = a.fold.seed;

  const std::vector<int> sizes = parse_int_list(a.sizes);
  std::optional<Dendrogram> dendrogram;
  std::optional<TopicModel> lda_model;
  if (a.reducer == "tg") {
    if (!a.model.empty()) {
      dendrogram = load_dendrogram(a.model);
      if (dendrogram->vocab != train_corpus.vocabulary().words()) {
        throw invalid_argument("the dendrogram was not trained on the --train corpus");
      }
    } else {
      dendrogram = train_mehac(train_corpus);
    }
  } else if (a.reducer == "lda" && !a.model.empty()) {
    lda_model = topic_model_from_json(read_json(a.model));
  }

  std::ostringstream csv;
  csv << g_meta.comment() << "feature_count,micro_avg\n";
  for (int k : sizes) {
    std::unique_ptr<Reducer> reducer;
    if (a.reducer == "tg") {
      reducer = std::make_unique<TgReducer>(flat_view(*dendrogram, k));
    } else if (a.reducer == "lda") {
      TopicModel m;
      if (lda_model) {
        m = *lda_model;
      } else {
        const auto [alpha_m, beta] = heuristic_hypers(k);
        m = gibbs_train(train_corpus, k, alpha_m, beta, {.iterations = a.iterations, .burn_in = a.burn_in, .seed = a.seed});
      }
      reducer = std::make_unique<LdaReducer>(std::move(m), a.fold);
    } else {
      const auto words = a.reducer == "ig" ? select_ig(train, static_cast<std::size_t>(k))
                                           : select_df(train, static_cast<std::size_t>(k));
      reducer = std::make_unique<WordSelectionReducer>(words, train_corpus.vocab_size(), a.reducer);
    }
    const NBModel nb = nb_train(train, *reducer);
    const double acc = micro_accuracy(nb, test, *reducer);
    csv << reducer->n_features() << ',' << shortest(acc) << '\n';
    log_line(reducer->describe() + " accuracy=" + shortest(acc));
  }
  if (a.out.empty()) {
    std::cout << csv.str();
  } else {
    write_text(a.out, csv.str());
  }
}

struct LdaArgs {
  fs::path in, out;
  int n = 4;
  std::string alpha_m;
  double beta = 0.1;
  GibbsConfig gibbs;
};

void cmd_lda(LdaArgs a) {
  const Corpus corpus = load_corpus(a.in);
  auto [alpha_m, beta] = heuristic_hypers(a.n);
  if (!a.alpha_m.empty()) alpha_m = parse_double_list(a.alpha_m);
  if (a.beta > 0.0) beta = a.beta;
  g_meta.seeds["gibbs"] = a.gibbs.seed;
  TopicModel m = gibbs_train(corpus, a.n, alpha_m, beta, a.gibbs);
  m.meta["run"] = g_meta.json();
  write_json_artifact(a.out, to_json(m));
}

ApiServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

struct ServeArgs {
  fs::path model;
  std::string host = "127.0.0.1";
  int port = 8080;
};

void cmd_serve(const ServeArgs& a) {
  const Explorer ex(load_dendrogram(a.model));
  ApiServer server(ex);
  const int port = server.bind(a.host, a.port);
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::cout << "listening on http://" << a.host << ':' << port << std::endl;
  server.listen();
  g_server = nullptr;
}

std::string command_line(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += ' ';
    s += argv[i];
  }
  return s;
}

// Every option of the command that ran, with its effective value.
nlohmann::json effective_params(const CLI::App& sub) {
  nlohmann::json out = nlohmann::json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->get_single_name() == "help") continue;
    std::string value;
    if (opt->count() > 0) {
      for (const auto& r : opt->results()) value += (value.empty() ? "" : ",") + r;
    } else {
      value = opt->get_default_str();
      if (value.empty() && opt->get_expected_min() == 0) value = "false";
    }
    out[opt->get_single_name()] = value;
  }
  return out;
}

void print_error(const std::string& code, const std::string& message) {
  std::string m = message;
  for (char& c : m) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  std::string escaped;
  for (char c : m) {
    if (c == '"' || c == '\\') escaped += '\\';
    escaped += c;
  }
  std::cerr << "error: code=" << code << " message=\"" << escaped << "\"\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topic Grouper: agglomerative topic models, baselines and evaluation"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  int threads = 0;
  app.add_option("--threads", threads, "OpenMP thread budget (0 = default)")->check(CLI::NonNegativeNumber);

  IngestArgs ingest;
  auto* c_ingest = app.add_subcommand("ingest", "Build a corpus cache from raw data");
  c_ingest->add_option("--format", ingest.format, "bow | text | transactions")
      ->check(CLI::IsMember({"bow", "text", "transactions"}));
  c_ingest->add_option("--in", ingest.in, "Input file or directory")->required();
  c_ingest->add_option("--out", ingest.out, "Corpus cache to write")->required();
  c_ingest->add_option("--vocab", ingest.vocab, "bow: vocabulary file");
  c_ingest->add_option("--min-freq", ingest.min_freq, "Drop words rarer than this (text default 5)");
  c_ingest->add_option("--min-length", ingest.min_length, "text: minimum token length");
  c_ingest->add_flag("--stem", ingest.stem, "text: Porter stemming");
  c_ingest->add_flag("--keep-non-alpha", ingest.keep_non_alpha, "text: keep tokens with non-letters");
  c_ingest->add_option("--stopwords", ingest.stopwords, "text: stop word list");
  c_ingest->add_option("--quantity-cap", ingest.quantity_cap, "transactions: drop rows above this quantity");

  SynthArgs synth;
  auto* c_synth = app.add_subcommand("synth", "Generate a synthetic corpus and its true model");
  c_synth->add_option("--seed", synth.spec.seed);
  c_synth->add_option("--topics", synth.spec.n_topics);
  c_synth->add_option("--words-per-topic", synth.spec.words_per_topic);
  c_synth->add_option("--docs", synth.spec.n_docs);
  c_synth->add_option("--doc-length", synth.spec.doc_length);
  c_synth->add_option("--beta", synth.spec.beta_tilde);
  c_synth->add_option("--alpha-m", synth.alpha_m, "Comma separated, one per topic");
  c_synth->add_option("--out", synth.out)->required();
  c_synth->add_option("--truth", synth.truth, "True model JSON to write");

  SplitArgs sp;
  auto* c_split = app.add_subcommand("split", "Random train/test split");
  c_split->add_option("--in", sp.in)->required();
  c_split->add_option("--train", sp.train)->required();
  c_split->add_option("--test", sp.test)->required();
  c_split->add_option("--test-ratio", sp.test_ratio);
  c_split->add_option("--seed", sp.seed);
  c_split->add_option("--min-train-freq", sp.min_train_freq);

  TrainArgs tr;
  auto* c_train = app.add_subcommand("train", "Build the topic dendrogram");
  c_train->add_option("--algo", tr.algo)->check(CLI::IsMember({"ehac", "mehac"}));
  c_train->add_option("--in", tr.in)->required();
  c_train->add_option("--out", tr.out)->required();
  c_train->add_option("--memory-budget-gb", tr.memory_budget_gb, "EHAC queue memory limit");
  c_train->add_flag("--verbose", tr.verbose, "Print every join");

  TopicsArgs tp;
  auto* c_topics = app.add_subcommand("topics", "Print T(n) sorted by topic frequency");
  c_topics->add_option("--model", tp.model)->required();
  c_topics->add_option("--n", tp.n)->check(CLI::PositiveNumber);
  c_topics->add_option("--top", tp.top);
  c_topics->add_option("--out", tp.out);

  SeriesArgs se;
  auto* c_series = app.add_subcommand("series", "Delta h_n series as CSV");
  c_series->add_option("--model", se.model)->required();
  c_series->add_option("--out", se.out);
  c_series->add_option("--lo", se.lo, "Lower end of the sharpest-drop search");
  c_series->add_option("--hi", se.hi, "Upper end of the sharpest-drop search");

  ExportArgs ex;
  auto* c_export = app.add_subcommand("export", "DOT or FreeMind export of the tree");
  c_export->add_option("--model", ex.model)->required();
  c_export->add_option("--format", ex.format)->check(CLI::IsMember({"dot", "freemind"}));
  c_export->add_option("--max-depth", ex.max_depth);
  c_export->add_option("--top", ex.top);
  c_export->add_option("--out", ex.out);

  EvalArgs ep;
  auto* c_ep = app.add_subcommand("eval-perplexity", "Held-out perplexity");
  c_ep->add_option("--model", ep.model, "Dendrogram or topic model JSON");
  c_ep->add_option("--baseline", ep.baseline)->check(CLI::IsMember({"unigram", "perfect"}));
  c_ep->add_option("--truth", ep.truth, "True model (perfect baseline)");
  c_ep->add_option("--train", ep.train, "Training corpus (TG frequencies, alpha search)");
  c_ep->add_option("--test", ep.test)->required();
  c_ep->add_option("--n", ep.n_list, "Topic counts for a dendrogram, e.g. 1,2,4-8");
  c_ep->add_option("--particles", ep.particles)->check(CLI::PositiveNumber);
  c_ep->add_option("--seed", ep.seed);
  c_ep->add_option("--alpha", ep.alpha, "Fixed alpha instead of the search");
  c_ep->add_option("--out", ep.out, "JSON report");
  c_ep->add_option("--csv", ep.csv, "CSV n_topics,perplexity");

  EvalArgs ee;
  auto* c_ee = app.add_subcommand("eval-error", "Error rate against a synthetic true model");
  c_ee->add_option("--model", ee.model, "Dendrogram or topic model JSON");
  c_ee->add_option("--baseline", ee.baseline)->check(CLI::IsMember({"unigram", "perfect"}));
  c_ee->add_option("--truth", ee.truth)->required();
  c_ee->add_option("--train", ee.train, "Training corpus");
  c_ee->add_option("--n", ee.n_list, "Topic counts (default: the truth's)");
  c_ee->add_option("--out", ee.out, "JSON report");
  c_ee->add_option("--csv", ee.csv, "CSV n_topics,error_rate");

  ClassifyArgs cl;
  auto* c_cl = app.add_subcommand("classify", "Naive Bayes accuracy over reduced features");
  c_cl->add_option("--reducer", cl.reducer)->check(CLI::IsMember({"tg", "lda", "ig", "df"}));
  c_cl->add_option("--train", cl.train)->required();
  c_cl->add_option("--test", cl.test)->required();
  c_cl->add_option("--labels", cl.labels, "CSV doc_id,label")->required();
  c_cl->add_option("--model", cl.model, "Dendrogram (tg) or LDA model (lda); trained if absent");
  c_cl->add_option("--n-or-k,--sizes", cl.sizes, "Topic counts or word counts, e.g. 10,20,50")->required();
  c_cl->add_option("--seed", cl.seed, "Gibbs seed");
  c_cl->add_option("--iterations", cl.iterations);
  c_cl->add_option("--burn-in", cl.burn_in);
  c_cl->add_option("--fold-chains", cl.fold.chains);
  c_cl->add_option("--fold-sweeps", cl.fold.sweeps);
  c_cl->add_option("--fold-burn-in", cl.fold.burn_in);
  c_cl->add_option("--fold-seed", cl.fold.seed);
  c_cl->add_option("--out", cl.out);

  LdaArgs ld;
  auto* c_lda = app.add_subcommand("lda", "LDA baseline by collapsed Gibbs sampling");
  c_lda->add_option("--in", ld.in)->required();
  c_lda->add_option("--out", ld.out)->required();
  c_lda->add_option("--n", ld.n)->check(CLI::PositiveNumber);
  c_lda->add_option("--alpha-m", ld.alpha_m, "Comma separated; default 50/n spread evenly");
  c_lda->add_option("--beta", ld.beta);
  c_lda->add_option("--iterations", ld.gibbs.iterations);
  c_lda->add_option("--burn-in", ld.gibbs.burn_in);
  c_lda->add_option("--seed", ld.gibbs.seed);

  ServeArgs sv;
  auto* c_serve = app.add_subcommand("serve", "HTTP JSON API for the explorer");
  c_serve->add_option("--model", sv.model)->required();
  c_serve->add_option("--host", sv.host);
  c_serve->add_option("--port", sv.port)->check(CLI::Range(0, 65535));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("usage", e.what());
    return 2;
  }

  g_meta.command_line = command_line(argc, argv);
  g_meta.params = effective_params(*app.get_subcommands().front());
  set_thread_budget(threads);
  try {
    if (c_ingest->parsed()) cmd_ingest(ingest);
    if (c_synth->parsed()) cmd_synth(synth);
    if (c_split->parsed()) cmd_split(sp);
    if (c_train->parsed()) cmd_train(tr);
    if (c_topics->parsed()) cmd_topics(tp);
    if (c_series->parsed()) cmd_series(se);
    if (c_export->parsed()) cmd_export(ex);
    if (c_ep->parsed()) cmd_eval_perplexity(ep);
    if (c_ee->parsed()) cmd_eval_error(ee);
    if (c_cl->parsed()) cmd_classify(cl);
    if (c_lda->parsed()) cmd_lda(ld);
    if (c_serve->parsed()) cmd_serve(sv);
  } catch (const Error& e) {
    print_error(e.code(), e.what());
    return 1;
  } catch (const std::exception& e) {
    print_error("internal", e.what());
    return 1;
  }
  return 0;
}

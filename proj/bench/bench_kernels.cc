// Apache License, Version 2.0, refer to LICENSE.txt

// Serial reference vs OpenMP for the hot kernels. Arg(0) is serial, Arg(1)
// parallel; compare the pairs.

#include <benchmark/benchmark.h>

#include "fixtures.hh"
#include "tg/eval.hh"
#include "tg/kernels.hh"
#include "tg/synthetic.hh"
#include "tg/train.hh"

using namespace tg;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(0) ? Exec::parallel : Exec::serial; }

const Corpus& scan_corpus() {
  static const Corpus c = testing::heaps_corpus(7, 100, 40, 1.2);
  return c;
}

const std::vector<TopicState>& singletons() {
  static const std::vector<TopicState> topics = [] {
    std::vector<TopicState> out;
    const Corpus& c = scan_corpus();
    for (std::size_t w = 0; w < c.vocab_size(); ++w) out.push_back(singleton_topic(c, static_cast<WordId>(w)));
    return out;
  }();
  return topics;
}

void BM_PairScan(benchmark::State& state) {
  const auto& topics = singletons();
  for (auto _ : state) benchmark::DoNotOptimize(kernels::pair_scan(topics, exec_of(state)));
  state.counters["topics"] = static_cast<double>(topics.size());
}

void BM_DeltaHRow(benchmark::State& state) {
  const auto& topics = singletons();
  std::vector<const TopicState*> others;
  for (std::size_t k = 1; k < topics.size(); ++k) others.push_back(&topics[k]);
  std::vector<double> out(others.size());
  for (auto _ : state) {
    kernels::delta_h_row(topics[0], others, out, exec_of(state));
    benchmark::ClobberMemory();
  }
}

void BM_BestPartners(benchmark::State& state) {
  const auto& topics = singletons();
  for (auto _ : state) benchmark::DoNotOptimize(kernels::best_partners(topics, exec_of(state)));
}

void BM_TrainMehac(benchmark::State& state) {
  TrainOptions opts;
  opts.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(train_mehac(scan_corpus(), opts));
}

void BM_Perplexity(benchmark::State& state) {
  static const SyntheticData data = [] {
    SyntheticSpec spec;
    spec.n_docs = 1000;
    return generate_synthetic(spec);
  }();
  static const TopicModel model = [] {
    TopicModel m = tg_to_model(train_mehac(data.corpus), data.corpus, 4);
    m.set_alpha(1.0);
    return m;
  }();
  EstimatorConfig cfg;
  cfg.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(perplexity(model, data.corpus, cfg).perplexity);
}

}  // namespace

BENCHMARK(BM_PairScan)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DeltaHRow)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_BestPartners)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrainMehac)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Perplexity)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

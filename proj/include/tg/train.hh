// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

#include "tg/corpus.hh"
#include "tg/dendrogram.hh"
#include "tg/exec.hh"

namespace tg {

struct TrainOptions {
  Exec exec = Exec::parallel;
  // EHAC refuses to start when its estimated queue memory exceeds this.
  std::size_t memory_budget_bytes = std::size_t{4} << 30;
  // Called after every join, e.g. for progress output.
  std::function<void(const Merge&)> on_merge;
};

struct TrainStats {
  std::size_t peak_queue_entries = 0;
  // MEHAC only: invalid (deferred) queue heads that triggered a recomputation.
  std::size_t deferred_recomputations = 0;
  std::uint64_t delta_h_evaluations = 0;
};

// Bytes EHAC expects to need for its per-topic priority queues.
std::size_t ehac_memory_estimate(std::size_t vocab_size);

// Agglomeration with one priority queue of join partners per topic: O(|V|^2)
// memory. At every step the pair maximizing delta_h is joined; ties go to the
// lexicographically smallest (min key, max key) pair, key = smallest word id.
Dendrogram train_ehac(const Corpus& corpus, const TrainOptions& opts = {},
                      TrainStats* stats = nullptr);

// Agglomeration keeping only each topic's best join partner in a single
// queue: O(|V|) queue entries. Same merge semantics as train_ehac.
Dendrogram train_mehac(const Corpus& corpus, const TrainOptions& opts = {},
                       TrainStats* stats = nullptr);

}  // namespace tg

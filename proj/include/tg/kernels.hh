// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <limits>
#include <span>
#include <vector>

#include "tg/exec.hh"
#include "tg/topic.hh"

namespace tg::kernels {

// out[k] = delta_h(u, *others[k]).
void delta_h_row(const TopicState& u, std::span<const TopicState* const> others,
                 std::span<double> out, Exec exec);

// Packed upper triangle of delta_h over all pairs of `topics`: row s holds
// the pairs (s, t) for t = s+1 .. n-1, rows stored consecutively.
std::vector<double> pair_scan(std::span<const TopicState> topics, Exec exec);

inline std::size_t triangle_offset(std::size_t s, std::size_t n) {
  return s * (2 * n - s - 1) / 2;
}

struct BestPartner {
  Candidate best{-std::numeric_limits<double>::infinity(), 0, 0};
  std::int32_t partner = -1;  // index into the topic span
};

// For every topic, its best join partner under the Candidate order. Each pair
// is evaluated once; with Exec::parallel, per-thread partial results are
// reduced afterwards, which is order independent.
std::vector<BestPartner> best_partners(std::span<const TopicState> topics, Exec exec);

}  // namespace tg::kernels

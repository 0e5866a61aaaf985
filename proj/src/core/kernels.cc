// Apache License, Version 2.0, refer to LICENSE.txt

#include "tg/kernels.hh"

#include <omp.h>

namespace tg::kernels {

namespace {

void delta_h_row_serial(const TopicState& u, std::span<const TopicState* const> others,
                        std::span<double> out) {
  for (std::size_t k = 0; k < others.size(); ++k) out[k] = delta_h(u, *others[k]);
}

void delta_h_row_omp(const TopicState& u, std::span<const TopicState* const> others,
                     std::span<double> out) {
  const auto n = static_cast<std::int64_t>(others.size());
#pragma omp parallel for schedule(dynamic, 32)
  for (std::int64_t k = 0; k < n; ++k) out[static_cast<std::size_t>(k)] = delta_h(u, *others[static_cast<std::size_t>(k)]);
}

void pair_scan_serial(std::span<const TopicState> topics, std::vector<double>& tri) {
  const std::size_t n = topics.size();
  for (std::size_t s = 0; s < n; ++s) {
    double* row = tri.data() + triangle_offset(s, n);
    for (std::size_t t = s + 1; t < n; ++t) row[t - s - 1] = delta_h(topics[s], topics[t]);
  }
}

void pair_scan_omp(std::span<const TopicState> topics, std::vector<double>& tri) {
  const auto n = static_cast<std::int64_t>(topics.size());
  // Rows shrink with s; dynamic scheduling balances them.
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t s = 0; s < n; ++s) {
    const auto su = static_cast<std::size_t>(s);
    double* row = tri.data() + triangle_offset(su, topics.size());
    for (std::size_t t = su + 1; t < topics.size(); ++t) row[t - su - 1] = delta_h(topics[su], topics[t]);
  }
}

void offer(BestPartner& slot, const Candidate& c, std::int32_t partner) {
  if (slot.partner < 0 || better(c, slot.best)) {
    slot.best = c;
    slot.partner = partner;
  }
}

}  // namespace

void delta_h_row(const TopicState& u, std::span<const TopicState* const> others,
                 std::span<double> out, Exec exec) {
  if (exec == Exec::parallel) {
    delta_h_row_omp(u, others, out);
  } else {
    delta_h_row_serial(u, others, out);
  }
}

std::vector<double> pair_scan(std::span<const TopicState> topics, Exec exec) {
  const std::size_t n = topics.size();
  std::vector<double> tri(n * (n - (n > 0 ? 1 : 0)) / 2);
  if (exec == Exec::parallel) {
    pair_scan_omp(topics, tri);
  } else {
    pair_scan_serial(topics, tri);
  }
  return tri;
}

std::vector<BestPartner> best_partners(std::span<const TopicState> topics, Exec exec) {
  const std::size_t n = topics.size();
  std::vector<BestPartner> best(n);
  auto scan_row = [&](std::size_t s, std::vector<BestPartner>& into) {
    for (std::size_t t = s + 1; t < n; ++t) {
      const auto c = Candidate::of(delta_h(topics[s], topics[t]), topics[s].key, topics[t].key);
      offer(into[s], c, static_cast<std::int32_t>(t));
      offer(into[t], c, static_cast<std::int32_t>(s));
    }
  };
  if (exec == Exec::serial) {
    for (std::size_t s = 0; s < n; ++s) scan_row(s, best);
    return best;
  }
  std::vector<std::vector<BestPartner>> partial;
#pragma omp parallel
  {
#pragma omp single
    partial.resize(static_cast<std::size_t>(omp_get_num_threads()), std::vector<BestPartner>(n));
    auto& mine = partial[static_cast<std::size_t>(omp_get_thread_num())];
#pragma omp for schedule(dynamic, 1)
    for (std::int64_t s = 0; s < static_cast<std::int64_t>(n); ++s) scan_row(static_cast<std::size_t>(s), mine);
  }
  for (const auto& part : partial) {
    for (std::size_t s = 0; s < n; ++s) {
      if (part[s].partner >= 0) offer(best[s], part[s].best, part[s].partner);
    }
  }
  return best;
}

}  // namespace tg::kernels

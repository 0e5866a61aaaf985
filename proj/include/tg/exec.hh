// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstdint>
#include <exception>

namespace tg {

// Selects between the serial reference kernels and their OpenMP versions.
// Both produce identical results; the serial path is kept for testing and
// benchmarking.
enum class Exec { serial, parallel };

// Upper bound on OpenMP threads used by the parallel kernels. 0 means the
// OpenMP default.
void set_thread_budget(int threads);
int thread_budget();

// Runs fn(i) for i in [0, n), dynamically scheduled under Exec::parallel. The
// first exception thrown by any iteration is rethrown after the loop.
template <typename Fn>
void parallel_for(std::int64_t n, Exec exec, Fn&& fn) {
  if (exec == Exec::serial) {
    for (std::int64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      fn(i);
    } catch (...) {
#pragma omp critical(tg_parallel_for_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace tg

// Apache License, Version 2.0, refer to LICENSE.txt

#include "tg/exec.hh"

#include <omp.h>

namespace tg {

namespace {
int g_thread_budget = 0;
}

void set_thread_budget(int threads) {
  g_thread_budget = threads < 0 ? 0 : threads;
  if (g_thread_budget > 0) omp_set_num_threads(g_thread_budget);
}

int thread_budget() { return g_thread_budget > 0 ? g_thread_budget : omp_get_max_threads(); }

}  // namespace tg

#include "courantkit/sweep.hpp"

#include <omp.h>

#include <cstdlib>
#include <limits>

namespace ck {

namespace {
int g_thread_cap = 0;  // 0 = library default
}

void set_thread_cap(int threads) {
  g_thread_cap = threads;
  if (threads > 0) omp_set_num_threads(threads);
}

void configure_threads_from_env() {
  if (const char* env = std::getenv("COURANTKIT_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) set_thread_cap(n);
  }
}

ExecMode default_mode() { return g_thread_cap == 1 ? ExecMode::Serial : ExecMode::Parallel; }

namespace {

void run_one(const Check& c, CheckResult& out) {
  out.tag = c.tag;
  out.location = c.location;
  out.tol = c.tol;
  try {
    out.residual = c.fn(out.witness);
  } catch (const std::exception& e) {
    out.residual = std::numeric_limits<double>::infinity();
    out.witness = e.what();
  }
  out.pass = out.residual <= c.tol;
}

}  // namespace

std::vector<CheckResult> run_checks(const std::vector<Check>& checks, ExecMode mode) {
  std::vector<CheckResult> results(checks.size());
  const int n = static_cast<int>(checks.size());
  if (mode == ExecMode::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) run_one(checks[static_cast<size_t>(i)], results[static_cast<size_t>(i)]);
  } else {
    for (int i = 0; i < n; ++i) run_one(checks[static_cast<size_t>(i)], results[static_cast<size_t>(i)]);
  }
  return results;
}

double worst_residual(const std::vector<CheckResult>& results) {
  double w = 0.0;
  for (const auto& r : results) w = std::max(w, r.residual);
  return w;
}

bool all_pass(const std::vector<CheckResult>& results) {
  for (const auto& r : results)
    if (!r.pass) return false;
  return true;
}

}  // namespace ck

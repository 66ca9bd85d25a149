#pragma once

#include <functional>
#include <string>
#include <vector>

namespace ck {

// Execution mode for check sweeps. Parallel runs the same work items under
// OpenMP; results are written by item index, so both modes produce identical
// output and the serial path stays the reference for testing.
enum class ExecMode { Serial, Parallel };

struct CheckResult {
  std::string tag;       // which identity / certificate
  std::string location;  // chart or overlap
  double residual = 0.0;
  double tol = 0.0;
  bool pass = false;
  std::string witness;  // worst point or error text
};

struct Check {
  std::string tag;
  std::string location;
  double tol;
  // Returns the residual; fills witness description.
  std::function<double(std::string& witness)> fn;
};

std::vector<CheckResult> run_checks(const std::vector<Check>& checks, ExecMode mode);

// Global execution configuration. COURANTKIT_THREADS caps OpenMP parallelism;
// a value of 1 selects the serial path.
ExecMode default_mode();
void configure_threads_from_env();
void set_thread_cap(int threads);

double worst_residual(const std::vector<CheckResult>& results);
bool all_pass(const std::vector<CheckResult>& results);

}  // namespace ck

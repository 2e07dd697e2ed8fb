#pragma once

#include <cstdint>
#include <string>

#include "mvie/config.hpp"

namespace mvie {

struct RunResult {
  int exit_code = 0;  // 0 ok, 2 bad setup, 3 regime violation, 4 no convergence
  std::string summary;
};

// Executes the configured experiment and writes its artifacts under out_dir:
// manifest.json (resolved config, versions, results, error if any),
// experiment CSV files and summary.txt. Never throws; failures land in the
// exit code and manifest. Execution is single-threaded regardless of
// `threads` (recorded for provenance only).
RunResult run_experiment(const RunConfig& cfg, const std::string& out_dir,
                         std::uint64_t seed = 7, int threads = 1);

// Snapshot of a finished run: config hash, per-file content hashes and the
// numeric result fields, for regression comparison.
void emit_baseline(const std::string& out_dir, const std::string& baseline_path);

// Empty string when the run in out_dir matches the stored baseline (file
// hashes exact, or result fields within 1e-12 relative); otherwise a
// description of the first mismatch.
std::string compare_baseline(const std::string& out_dir,
                             const std::string& baseline_path);

}  // namespace mvie

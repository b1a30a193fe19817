#pragma once
// Batch commands behind the matool program.

#include <cstdint>
#include <string>
#include <vector>

namespace ma::app {

enum ExitCode : int {
  kPass = 0,
  kAssertionFailure = 1,
  kSolverFailure = 2,
  kConfigError = 3,
};

struct RunConfig {
  /// verify-barriers, solve, run-experiment or report
  std::string command;
  /// JSON file, "preset:<name>", or empty for the command default.
  /// For report: the output directory of an earlier run.
  std::string config;
  /// Output directory; derived from MA_OUT_ROOT when empty.
  std::string out_dir;
  int workers = 1;
  std::uint64_t seed = 20240601;
  /// Multiplies the solver tolerance.
  double tol_scale = 1.0;
};

struct RunResult {
  int exit_code = kPass;
  std::string out_dir;
  /// PASS/FAIL lines, warnings and errors in the order they arose.
  std::vector<std::string> lines;
  /// Files written, relative to out_dir.
  std::vector<std::string> artifacts;
};

RunResult verify_barriers(const RunConfig& cfg);
RunResult solve(const RunConfig& cfg);
RunResult run_experiment(const RunConfig& cfg);
RunResult report(const RunConfig& cfg);

/// Dispatch on cfg.command; unknown commands give kConfigError.
RunResult run(const RunConfig& cfg);

std::vector<std::string> preset_names();
/// JSON text of a preset; throws ConfigError for unknown names.
std::string preset(const std::string& name);

/// cfg.out_dir, else $MA_OUT_ROOT/<leaf>, else ma_out/<leaf>.
std::string output_directory(const RunConfig& cfg, const std::string& leaf);

}  // namespace ma::app

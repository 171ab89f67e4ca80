#pragma once

#include "infocast/engine/config.hpp"
#include "infocast/engine/metrics.hpp"
#include "infocast/engine/validation.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace infocast::cli {

inline constexpr const char *tool_version = "infocast 1.0.0";

enum ExitCode : int { exit_ok = 0, exit_validation = 1, exit_usage = 2 };

struct RunArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "out";
};

struct SweepArgs {
  std::string spec;
  unsigned jobs = 1;
};

struct ValidateArgs {
  double tol_scale = 1.0;
};

/// Sweep description read from a key = value file. Paths are relative to
/// the spec file's directory.
struct ExperimentSpec {
  std::string base_config;
  std::string sweep_param;
  std::vector<std::string> values;
  std::size_t replications = 1;
  std::string out_dir = "sweep_out";
  std::uint64_t seed = 1;
};

ExperimentSpec read_experiment_spec(const std::string &path);

/// Scalar summaries of one run: (metric, value). Metrics that are undefined
/// for the run (no decode events, no samples) are left out.
std::vector<std::pair<std::string, double>> summarize(const engine::MetricsRecord &record,
                                                      const engine::SimConfig &config);

void write_manifest(std::ostream &os, const std::string &command, const engine::SimConfig &config);

int cmd_run(const RunArgs &args, std::ostream &out, std::ostream &err);
int cmd_sweep(const SweepArgs &args, std::ostream &out, std::ostream &err);
int cmd_validate(const ValidateArgs &args, std::ostream &out, std::ostream &err,
                 const engine::Formulas &formulas = {});

/// Parses argv (CLI11) and runs the chosen subcommand. Returns the exit code.
int dispatch(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace infocast::cli

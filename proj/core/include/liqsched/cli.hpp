#pragma once

#include <optional>
#include <string>

namespace liqsched {

enum class Subcommand { Schedule, Cost, Envelope, Signal, Oracle, Ow };
enum class OutputFormat { Json, Csv };
enum class OracleMethod { Lattice, Pg };

/// One CLI invocation. resolution is the per-cell sample count m (the
/// LIQSCHED_RESOLUTION environment variable overrides the built-in default);
/// oracle_resolution is the lattice step in shares.
struct RunConfig {
  Subcommand subcommand = Subcommand::Schedule;
  std::string pattern_path;
  std::string output_path;  // empty or "-" means stdout
  int resolution = 1000;
  double report_threshold = 10.0;
  OutputFormat format = OutputFormat::Json;
  int jobs = 1;

  std::optional<double> target;
  std::optional<double> eta0;

  // cost
  std::string schedule_path;
  bool check_foc = false;

  // oracle
  OracleMethod oracle_method = OracleMethod::Lattice;
  std::optional<double> oracle_resolution;

  // ow
  double ow_delta0 = 1.0;
  double ow_r0 = 1.0;
  double ow_horizon = 1.0;
  double ow_target = 1.0;
  double ow_eta0 = 0.0;
};

/// Default sample count, honoring LIQSCHED_RESOLUTION.
int default_resolution();

/// Executes one configured invocation. Returns 0 on success, 1 for domain
/// errors (EmptyMarket, InfiniteImpact, ...), 2 for I/O problems. Output is
/// deterministic: identical config and inputs give identical bytes.
int run(const RunConfig& config);

}  // namespace liqsched

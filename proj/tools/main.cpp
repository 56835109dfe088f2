#include <optional>
#include <string>

#include <CLI11.hpp>

#include "liqsched/cli.hpp"

namespace {

void add_common(CLI::App* cmd, liqsched::RunConfig& config) {
  cmd->add_option("-o,--output", config.output_path, "Output file (default: stdout)");
  cmd->add_option("-m,--resolution", config.resolution, "Samples per piecewise-constant cell")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"liqsched: cost-minimal order execution under time-varying depth and resilience"};
  app.require_subcommand(1);

  liqsched::RunConfig config;
  config.resolution = liqsched::default_resolution();

  std::string format = "json";
  std::string method = "lattice";
  double target = 0.0;
  double eta0 = -1.0;
  double oracle_res = 0.0;

  auto* schedule = app.add_subcommand("schedule", "Compute the optimal order schedule");
  schedule->add_option("pattern", config.pattern_path, "Pattern file (.json or .csv)")->required();
  add_common(schedule, config);
  schedule->add_option("--target", target, "Override the pattern's target volume");
  schedule->add_option("--eta0", eta0, "Override the pattern's initial mark-up");
  schedule->add_option("--report-threshold", config.report_threshold,
                       "Atom/rate classification multiplier");
  schedule->add_option("--format", format, "json (atoms/rates) or csv (time series)")
      ->check(CLI::IsMember({"json", "csv"}));

  auto* cost = app.add_subcommand("cost", "Evaluate the exact cost of a schedule");
  cost->add_option("pattern", config.pattern_path, "Pattern file")->required();
  cost->add_option("-s,--schedule", config.schedule_path, "Schedule file (JSON atoms or CSV path)")
      ->required();
  add_common(cost, config);
  cost->add_option("--eta0", eta0, "Override the pattern's initial mark-up");
  cost->add_flag("--check-foc", config.check_foc, "Report first-order-condition residuals");

  auto* envelope = app.add_subcommand("envelope", "Emit the time-changed curve, hull and density");
  envelope->add_option("pattern", config.pattern_path, "Pattern file")->required();
  add_common(envelope, config);

  auto* signal = app.add_subcommand("signal", "Emit the trading signal L*");
  signal->add_option("pattern", config.pattern_path, "Pattern file")->required();
  add_common(signal, config);

  auto* oracle = app.add_subcommand("oracle", "Independent simplex-QP minimization");
  oracle->add_option("pattern", config.pattern_path, "Atomic pattern file")->required();
  oracle->add_option("-o,--output", config.output_path, "Output file (default: stdout)");
  oracle->add_option("--method", method, "lattice or pg")->check(CLI::IsMember({"lattice", "pg"}));
  oracle->add_option("--resolution", oracle_res, "Lattice step in shares (default target/1000)");
  oracle->add_option("--jobs", config.jobs, "Worker threads for the lattice partitions")
      ->check(CLI::PositiveNumber);

  auto* ow = app.add_subcommand("ow", "Closed-form schedule for constant depth and resilience");
  ow->add_option("-o,--output", config.output_path, "Output file (default: stdout)");
  ow->add_option("--delta0", config.ow_delta0, "Constant market depth")->required();
  ow->add_option("--r0", config.ow_r0, "Constant resilience rate")->required();
  ow->add_option("--horizon", config.ow_horizon, "Trading horizon T")->required();
  ow->add_option("--target", config.ow_target, "Total volume to buy")->required();
  ow->add_option("--eta0", config.ow_eta0, "Initial mark-up");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  if (schedule->parsed()) config.subcommand = liqsched::Subcommand::Schedule;
  if (cost->parsed()) config.subcommand = liqsched::Subcommand::Cost;
  if (envelope->parsed()) config.subcommand = liqsched::Subcommand::Envelope;
  if (signal->parsed()) config.subcommand = liqsched::Subcommand::Signal;
  if (oracle->parsed()) config.subcommand = liqsched::Subcommand::Oracle;
  if (ow->parsed()) config.subcommand = liqsched::Subcommand::Ow;

  if (schedule->count("--target") > 0) config.target = target;
  if (schedule->count("--eta0") > 0 || cost->count("--eta0") > 0) config.eta0 = eta0;
  config.format = format == "csv" ? liqsched::OutputFormat::Csv : liqsched::OutputFormat::Json;
  config.oracle_method =
      method == "pg" ? liqsched::OracleMethod::Pg : liqsched::OracleMethod::Lattice;
  if (oracle->count("--resolution") > 0) config.oracle_resolution = oracle_res;

  return liqsched::run(config);
}

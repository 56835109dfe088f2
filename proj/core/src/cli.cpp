#include "liqsched/cli.hpp"

#include <cstdlib>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "liqsched/cost.hpp"
#include "liqsched/envelope.hpp"
#include "liqsched/errors.hpp"
#include "liqsched/io.hpp"
#include "liqsched/oracle.hpp"
#include "liqsched/pattern.hpp"
#include "liqsched/scheduler.hpp"

namespace liqsched {

namespace {

using json = nlohmann::ordered_json;

LiquidityPattern load_validated(const RunConfig& config) {
  const RawPattern raw = load_pattern(config.pattern_path);
  LiquidityPattern pattern = LiquidityPattern::validate(raw);
  return pattern.with_overrides(config.target, config.eta0);
}

int run_schedule(const RunConfig& config) {
  const LiquidityPattern pattern = load_validated(config);
  const LiquidityPattern collapsed = collapse_zero_resilience(pattern);
  const SampledPattern sampled = sample_pattern(collapsed, config.resolution);

  Schedule schedule;
  EnvelopeResult envelope;
  if (collapsed.zero_resilience()) {
    schedule = zero_resilience_schedule(collapsed, collapsed.target(), collapsed.eta0());
    envelope = build_envelope(sampled);  // series output only
  } else {
    envelope = build_envelope(sampled);
    const double y = solve_multiplier(sampled, envelope, collapsed.target(), collapsed.eta0());
    schedule = schedule_for_multiplier(sampled, envelope, y, config.report_threshold);
  }
  const CostReport report = execution_cost(collapsed, schedule, collapsed.eta0());

  if (config.format == OutputFormat::Json) {
    write_output(config.output_path, schedule_to_json(schedule, report));
  } else {
    // Align the reported path with the sample grid for the series.
    Schedule on_grid = schedule;
    if (schedule.times != sampled.times) {
      on_grid.times = sampled.times;
      on_grid.path.assign(sampled.size(), 0.0);
      std::size_t j = 0;
      double x = 0.0;
      for (std::size_t i = 0; i < sampled.size(); ++i) {
        while (j < schedule.times.size() && schedule.times[j] <= sampled.times[i]) {
          x = schedule.path[j];
          ++j;
        }
        on_grid.path[i] = x;
      }
    }
    const std::vector<double> markup = markup_path(collapsed, on_grid, collapsed.eta0());
    write_output(config.output_path,
                 schedule_series_csv(collapsed, sampled, envelope, on_grid, markup));
  }
  return 0;
}

int run_cost(const RunConfig& config) {
  const LiquidityPattern pattern = load_validated(config);
  const Schedule schedule = load_schedule(config.schedule_path);
  CostReport report = execution_cost(pattern, schedule, pattern.eta0());

  std::vector<double> foc_times;
  std::vector<double> residuals;
  if (config.check_foc) {
    const LiquidityPattern collapsed = collapse_zero_resilience(pattern);
    const SampledPattern sampled = sample_pattern(collapsed, config.resolution);
    const EnvelopeResult envelope = build_envelope(sampled);
    // The schedule's own Y path, stepped onto the sample grid.
    const std::vector<double> y_at_events = x_to_y(pattern, schedule, pattern.eta0());
    std::vector<double> frontier_values(sampled.size(), pattern.eta0());
    std::size_t j = 0;
    double level = pattern.eta0();
    for (std::size_t i = 0; i < sampled.size(); ++i) {
      while (j < schedule.times.size() && schedule.times[j] <= sampled.times[i]) {
        level = y_at_events[j];
        ++j;
      }
      frontier_values[i] = level;
    }
    // Fit the multiplier at the first increase point.
    double y_fit = 0.0;
    double previous = pattern.eta0();
    std::ptrdiff_t first_increase = -1;
    for (std::size_t i = 0; i < frontier_values.size(); ++i) {
      if (frontier_values[i] > previous) {
        first_increase = static_cast<std::ptrdiff_t>(i);
        break;
      }
      previous = frontier_values[i];
    }
    if (first_increase >= 0) {
      const std::vector<double> unit =
          foc_residuals(frontier_values, envelope.kappa_tilde, envelope.lambda_tilde, 0.0);
      const double lt = envelope.lambda_tilde[static_cast<std::size_t>(first_increase)];
      if (lt > 0.0) y_fit = unit[static_cast<std::size_t>(first_increase)] / lt;
    }
    residuals = foc_residuals(frontier_values, envelope.kappa_tilde, envelope.lambda_tilde, y_fit);
    foc_times = sampled.times;
    report.y_used = y_fit;
  }
  write_output(config.output_path,
               cost_report_to_json(report, foc_times, residuals, config.check_foc));
  return 0;
}

int run_envelope(const RunConfig& config) {
  const LiquidityPattern pattern = load_validated(config);
  const LiquidityPattern collapsed = collapse_zero_resilience(pattern);
  const SampledPattern sampled = sample_pattern(collapsed, config.resolution);
  const EnvelopeResult envelope = build_envelope(sampled);
  write_output(config.output_path, envelope_series_csv(envelope));
  return 0;
}

int run_signal(const RunConfig& config) {
  const LiquidityPattern pattern = load_validated(config);
  const LiquidityPattern collapsed = collapse_zero_resilience(pattern);
  const SampledPattern sampled = sample_pattern(collapsed, config.resolution);
  const std::vector<double> lstar = signal(sampled);
  write_output(config.output_path, signal_series_csv(sampled.times, lstar));
  return 0;
}

int run_oracle(const RunConfig& config) {
  const LiquidityPattern pattern = load_validated(config);
  const DiscreteCostForm form = cost_matrix(pattern);
  const double x = pattern.target();
  json doc;
  if (config.oracle_method == OracleMethod::Lattice) {
    const double h = config.oracle_resolution.value_or(x / 1000.0);
    const LatticeResult result = brute_force(form, x, h, config.jobs);
    doc["method"] = "lattice";
    doc["allocation"] = result.allocation;
    doc["cost"] = result.cost;
    doc["error_bound"] = result.error_bound;
  } else {
    const ProjectedGradientResult result = projected_gradient(form, x);
    doc["method"] = "pg";
    doc["allocation"] = result.allocation;
    doc["cost"] = result.cost;
    doc["iterations"] = result.iterations;
  }
  write_output(config.output_path, doc.dump(2) + "\n");
  return 0;
}

int run_ow(const RunConfig& config) {
  const Schedule schedule =
      ow_closed_form(config.ow_delta0, config.ow_r0, config.ow_horizon, config.ow_target,
                     config.ow_eta0);
  // Exact cost of the closed form via the equivalent constant pattern.
  RawPattern raw;
  raw.kind = PatternKind::PiecewiseConstant;
  raw.times = {0.0};
  raw.depth = {config.ow_delta0};
  raw.resilience = {config.ow_r0};
  raw.horizon = config.ow_horizon;
  raw.eta0 = config.ow_eta0;
  raw.target = config.ow_target;
  const LiquidityPattern pattern = LiquidityPattern::validate(raw);
  const CostReport report = execution_cost(pattern, schedule, config.ow_eta0);
  write_output(config.output_path, schedule_to_json(schedule, report));
  return 0;
}

}  // namespace

int default_resolution() {
  if (const char* env = std::getenv("LIQSCHED_RESOLUTION")) {
    const int value = std::atoi(env);
    if (value >= 1) return value;
  }
  return 1000;
}

int run(const RunConfig& config) {
  try {
    if (config.resolution < 1) raise(ErrorCode::InvalidParams, "resolution must be >= 1");
    switch (config.subcommand) {
      case Subcommand::Schedule: return run_schedule(config);
      case Subcommand::Cost: return run_cost(config);
      case Subcommand::Envelope: return run_envelope(config);
      case Subcommand::Signal: return run_signal(config);
      case Subcommand::Oracle: return run_oracle(config);
      case Subcommand::Ow: return run_ow(config);
    }
    return 1;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace liqsched

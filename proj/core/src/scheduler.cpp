#include "liqsched/scheduler.hpp"

#include <algorithm>
#include <cmath>

#include "liqsched/errors.hpp"

namespace liqsched {

MonotoneStepCurve frontier(const MonotoneStepCurve& density, std::span<const double> times,
                           std::span<const double> kappa_tilde, double y, double eta0) {
  if (times.size() != kappa_tilde.size()) {
    raise(ErrorCode::InvalidParams, "times and kappa_tilde must be aligned");
  }
  if (!(y > 0.0)) raise(ErrorCode::InvalidParams, "multiplier must be positive");
  std::vector<double> values(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double d = density.empty() ? 0.0 : density(kappa_tilde[i]);
    values[i] = std::max(y * d, eta0);
  }
  return MonotoneStepCurve(std::vector<double>(times.begin(), times.end()), std::move(values),
                           Continuity::RightContinuous, Direction::Increasing);
}

double total_for_multiplier(const SampledPattern& sampled, const EnvelopeResult& envelope,
                            double y) {
  double previous = sampled.eta0;
  double total = 0.0;
  for (std::size_t i = 0; i < sampled.size(); ++i) {
    const double d = envelope.density.empty() ? 0.0 : envelope.density(envelope.kappa_tilde[i]);
    const double level = std::max(y * d, sampled.eta0);
    total += sampled.lambda[i] * (level - previous);
    previous = level;
  }
  return total;
}

Schedule schedule_for_multiplier(const SampledPattern& sampled, const EnvelopeResult& envelope,
                                 double y, double report_threshold) {
  if (!(y > 0.0)) raise(ErrorCode::InvalidParams, "multiplier must be positive");
  const std::size_t n = sampled.size();
  Schedule sched;
  sched.multiplier = y;
  sched.times = sampled.times;
  sched.path.assign(n, 0.0);

  std::vector<double> frontier_values(n);
  double previous = sampled.eta0;
  double cumulative = 0.0;
  std::vector<double> increments(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = envelope.density.empty() ? 0.0 : envelope.density(envelope.kappa_tilde[i]);
    const double level = std::max(y * d, sampled.eta0);
    increments[i] = sampled.lambda[i] * (level - previous);
    cumulative += increments[i];
    sched.path[i] = cumulative;
    frontier_values[i] = level;
    previous = level;
  }
  sched.total = cumulative;
  sched.frontier = MonotoneStepCurve(sampled.times, std::move(frontier_values),
                                     Continuity::RightContinuous, Direction::Increasing);

  // Classify increments: grid nodes and collapsed points are atoms; a
  // refinement-step increment is an atom only when it exceeds the reporting
  // threshold relative to uniform trading of the target over the horizon.
  const double x = sampled.target;
  RateSegment open{};
  bool open_active = false;
  auto flush = [&] {
    if (open_active && open.volume > 0.0) sched.rates.push_back(open);
    open_active = false;
  };
  for (std::size_t i = 0; i < n; ++i) {
    if (increments[i] <= 0.0) {
      flush();
      continue;
    }
    const bool atom = sampled.atom_site[i] || i == 0 || sampled.step[i] <= 0.0 ||
                      sampled.horizon <= 0.0 ||
                      increments[i] > report_threshold * x * sampled.step[i] / sampled.horizon;
    if (atom) {
      flush();
      sched.atoms.push_back({sampled.times[i], increments[i]});
    } else if (open_active) {
      open.t_end = sampled.times[i];
      open.volume += increments[i];
    } else {
      open = {sampled.times[i - 1], sampled.times[i], increments[i]};
      open_active = true;
    }
  }
  flush();
  return sched;
}

Schedule schedule_for_multiplier(const LiquidityPattern& pattern, double y,
                                 const SchedulerOptions& options) {
  const LiquidityPattern effective = pattern.with_overrides(options.target, options.eta0);
  const SampledPattern sampled = sample_pattern(effective, options.samples_per_cell);
  const EnvelopeResult envelope = build_envelope(sampled);
  return schedule_for_multiplier(sampled, envelope, y, options.report_threshold);
}

double solve_multiplier(const SampledPattern& sampled, const EnvelopeResult& envelope, double x,
                        double eta0) {
  if (!(x > 0.0)) raise(ErrorCode::InvalidParams, "target must be positive");
  if (!(envelope.l2_sq > 0.0)) raise(ErrorCode::EmptyMarket, "envelope carries no depth");
  if (eta0 == 0.0) {
    return x / envelope.l2_sq;  // total is exactly y * l2_sq when unclamped
  }

  constexpr int kMaxIterations = 200;
  constexpr double kRelTol = 1e-10;
  double hi = x / envelope.l2_sq;
  int doublings = 0;
  while (total_for_multiplier(sampled, envelope, hi) < x) {
    hi *= 2.0;
    if (++doublings > kMaxIterations) {
      raise(ErrorCode::NoConvergence, "could not bracket the multiplier");
    }
  }
  double lo = 0.0;
  for (int it = 0; it < kMaxIterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double total = total_for_multiplier(sampled, envelope, mid);
    if (std::abs(total - x) <= kRelTol * x) return mid;
    (total < x ? lo : hi) = mid;
  }
  const double total = total_for_multiplier(sampled, envelope, hi);
  if (std::abs(total - x) <= kRelTol * x) return hi;
  raise(ErrorCode::NoConvergence, "multiplier bisection exhausted its iteration budget");
}

double solve_multiplier(const LiquidityPattern& pattern, double x, double eta0,
                        int samples_per_cell) {
  const SampledPattern sampled = sample_pattern(pattern, samples_per_cell);
  const EnvelopeResult envelope = build_envelope(sampled);
  return solve_multiplier(sampled, envelope, x, eta0);
}

Schedule zero_resilience_schedule(const LiquidityPattern& pattern, double x, double eta0) {
  if (!(x > 0.0)) raise(ErrorCode::InvalidParams, "target must be positive");
  const double dmax = pattern.depth_max();
  if (dmax <= 0.0) raise(ErrorCode::EmptyMarket, "depth is identically zero");
  const double when = pattern.earliest_depth_argmax();

  Schedule sched;
  sched.atoms.push_back({when, x});
  sched.total = x;
  sched.multiplier = 0.0;

  // Report the path over the grid so the series output stays plottable.
  std::vector<double> times = pattern.times();
  if (std::ranges::find(times, when) == times.end()) {
    times.insert(std::upper_bound(times.begin(), times.end(), when), when);
  }
  if (times.back() < pattern.horizon()) times.push_back(pattern.horizon());
  std::vector<double> path(times.size(), 0.0);
  std::vector<double> y_values(times.size(), eta0);
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] >= when) {
      path[i] = x;
      y_values[i] = eta0 + x / dmax;  // rho is 1, so Y coincides with the mark-up
    }
  }
  sched.times = times;
  sched.path = std::move(path);
  sched.frontier = MonotoneStepCurve(std::move(times), std::move(y_values),
                                     Continuity::RightContinuous, Direction::Increasing);
  return sched;
}

Schedule optimal_schedule(const LiquidityPattern& pattern, const SchedulerOptions& options) {
  const LiquidityPattern effective = pattern.with_overrides(options.target, options.eta0);
  const LiquidityPattern collapsed = collapse_zero_resilience(effective);
  if (collapsed.zero_resilience()) {
    return zero_resilience_schedule(collapsed, collapsed.target(), collapsed.eta0());
  }
  const SampledPattern sampled = sample_pattern(collapsed, options.samples_per_cell);
  const EnvelopeResult envelope = build_envelope(sampled);
  const double y = solve_multiplier(sampled, envelope, collapsed.target(), collapsed.eta0());
  return schedule_for_multiplier(sampled, envelope, y, options.report_threshold);
}

}  // namespace liqsched

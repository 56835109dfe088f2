#pragma once

#include <optional>
#include <span>
#include <vector>

#include "liqsched/envelope.hpp"
#include "liqsched/pattern.hpp"
#include "liqsched/step_curve.hpp"

namespace liqsched {

struct TradeAtom {
  double t = 0.0;
  double size = 0.0;
};

/// Reporting view of a stretch of near-continuous trading.
struct RateSegment {
  double t_begin = 0.0;
  double t_end = 0.0;
  double volume = 0.0;
  double rate() const { return t_end > t_begin ? volume / (t_end - t_begin) : 0.0; }
};

/// Increasing right-continuous cumulative purchase path. times/path hold the
/// raw per-sample view (path[i] is X at times[i], X_{0-} = 0); atoms and
/// rates are the classified reporting view of the same increments.
struct Schedule {
  std::vector<TradeAtom> atoms;
  std::vector<RateSegment> rates;
  std::vector<double> times;
  std::vector<double> path;
  double total = 0.0;
  double multiplier = 0.0;
  MonotoneStepCurve frontier;  // the mark-up frontier over time

  std::size_t size() const { return times.size(); }
};

struct SchedulerOptions {
  int samples_per_cell = 1000;
  double report_threshold = 10.0;  // atom iff increment > threshold * x * step / horizon
  std::optional<double> target;
  std::optional<double> eta0;
};

/// Mark-up frontier: y times the hull density composed with kappa_tilde,
/// clamped below at eta0. Right-continuous and nondecreasing in time.
MonotoneStepCurve frontier(const MonotoneStepCurve& density, std::span<const double> times,
                           std::span<const double> kappa_tilde, double y, double eta0);

/// Schedule traded against the frontier for a given multiplier: the initial
/// block plus the Stieltjes integral of lambda against the frontier's
/// increases, evaluated exactly over the samples.
Schedule schedule_for_multiplier(const SampledPattern& sampled, const EnvelopeResult& envelope,
                                 double y, double report_threshold = 10.0);
Schedule schedule_for_multiplier(const LiquidityPattern& pattern, double y,
                                 const SchedulerOptions& options = {});

/// Total volume traded for a multiplier (cheap, no schedule assembly).
double total_for_multiplier(const SampledPattern& sampled, const EnvelopeResult& envelope,
                            double y);

/// Calibrates the multiplier so the schedule totals x: direct division by the
/// squared L2 norm when eta0 = 0, otherwise bisection on the monotone total.
double solve_multiplier(const SampledPattern& sampled, const EnvelopeResult& envelope, double x,
                        double eta0);
double solve_multiplier(const LiquidityPattern& pattern, double x, double eta0,
                        int samples_per_cell = 1000);

/// Full pipeline: collapse zero-resilience runs, route the no-resilience case
/// to the argmax-depth schedule, otherwise envelope + multiplier + schedule.
Schedule optimal_schedule(const LiquidityPattern& pattern, const SchedulerOptions& options = {});

/// All volume at the earliest global depth maximizer (valid when resilience
/// vanishes identically; any schedule supported on the argmax is optimal).
Schedule zero_resilience_schedule(const LiquidityPattern& pattern, double x, double eta0);

}  // namespace liqsched

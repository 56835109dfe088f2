#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "liqsched/errors.hpp"

namespace liqsched {

enum class PatternKind { Atomic, PiecewiseConstant };

/// Liquidity inputs exactly as parsed from a pattern file, before validation.
struct RawPattern {
  PatternKind kind = PatternKind::Atomic;
  std::vector<double> times;       // t0 = 0 < t1 < ...
  std::vector<double> depth;       // node depths (Atomic) or cell depths (PiecewiseConstant)
  std::vector<double> resilience;  // r_i on [t_i, t_{i+1}), last value continues to the horizon
  double horizon = 0.0;            // depth vanishes after this time
  double eta0 = 0.0;               // initial mark-up
  double target = 1.0;             // total shares to buy
};

/// Validated, immutable description of market depth and resilience.
///
/// Atomic patterns carry depth as point opportunities at the grid times and
/// are zero off-grid; piecewise-constant patterns carry depth as a flow,
/// delta(t) = depth[i] on [t_i, t_{i+1}), with the last cell closed at the
/// horizon. Two overlays extend the base description:
///   - point_depth: isolated depth spikes produced by collapse_zero_resilience
///     when a zero-resilience run of cells is contracted to a single instant;
///   - depth_growth: per-cell exponential growth rates produced by
///     apply_discount on piecewise-constant patterns, where the transformed
///     depth grows like exp(integral of the discount rate) inside each cell.
class LiquidityPattern {
 public:
  static LiquidityPattern validate(const RawPattern& raw);

  PatternKind kind() const { return kind_; }
  const std::vector<double>& times() const { return times_; }
  const std::vector<double>& depth() const { return depth_; }
  const std::vector<double>& resilience() const { return resilience_; }
  const std::vector<double>& depth_growth() const { return depth_growth_; }
  const std::vector<std::pair<double, double>>& point_depth() const { return point_depth_; }
  double horizon() const { return horizon_; }
  double eta0() const { return eta0_; }
  double target() const { return target_; }
  std::size_t size() const { return times_.size(); }

  /// True when the resilience function vanishes identically.
  bool zero_resilience() const;

  /// Index of the cell [t_i, t_{i+1}) containing t (the last cell extends to
  /// the horizon and beyond for resilience purposes).
  std::size_t cell_index(double t) const;

  /// Integral of the resilience rate over [0, t], computed exactly from the
  /// piecewise-constant representation.
  double log_rho(double t) const;
  double rho(double t) const;

  /// Accumulated depth-growth exponent over [0, t] (zero without a discount).
  double log_growth(double t) const;

  /// Instantaneous effective depth at t: zero beyond the horizon; node depth
  /// at grid times for Atomic patterns; cell depth times the growth factor for
  /// piecewise-constant patterns; point overlays take the max.
  double depth_at(double t) const;

  /// Maximum effective depth and the earliest time attaining it.
  double depth_max() const;
  double earliest_depth_argmax() const;

  LiquidityPattern with_overrides(std::optional<double> target,
                                  std::optional<double> eta0) const;

 private:
  friend LiquidityPattern apply_discount(const LiquidityPattern&, std::span<const double>);
  friend LiquidityPattern collapse_zero_resilience(const LiquidityPattern&);

  LiquidityPattern() = default;
  void rebuild_cumulatives();
  void check_invariants() const;

  PatternKind kind_ = PatternKind::Atomic;
  std::vector<double> times_;
  std::vector<double> depth_;
  std::vector<double> resilience_;
  std::vector<double> depth_growth_;  // empty or one rate per cell
  std::vector<std::pair<double, double>> point_depth_;
  std::vector<double> cum_log_rho_;
  std::vector<double> cum_log_growth_;
  double horizon_ = 0.0;
  double eta0_ = 0.0;
  double target_ = 1.0;
};

/// Spec-level free functions over patterns.
LiquidityPattern validate(const RawPattern& raw);
double rho(const LiquidityPattern& pattern, double t);

/// Discount transform: depth scaled by exp(integral of rbar), resilience
/// shifted by rbar. The discounted cost of any schedule under the original
/// pattern equals its plain cost under the transformed one.
LiquidityPattern apply_discount(const LiquidityPattern& pattern,
                                std::span<const double> discount_rates);

/// Contracts every maximal run of zero-resilience cells to a single point
/// opportunity at the run start carrying the maximal depth over the run.
/// A pattern with no resilience at all becomes fully atomic and is left for
/// the argmax-depth scheduling path. Idempotent.
LiquidityPattern collapse_zero_resilience(const LiquidityPattern& pattern);

/// Discrete view of a pattern: every candidate trading instant with its
/// exact rho, lambda = delta/rho and kappa = delta/rho^2. Atomic patterns
/// sample exactly at their grid nodes; piecewise-constant cells are refined
/// uniformly in time (geometric in the envelope abscissa), with the horizon
/// included as the closing sample.
struct SampledPattern {
  std::vector<double> times;
  std::vector<double> depth;
  std::vector<double> log_rho;
  std::vector<double> rho;
  std::vector<double> lambda;
  std::vector<double> kappa;
  std::vector<double> step;      // spacing to the previous sample; 0 for the first
  std::vector<char> atom_site;   // grid node or collapsed point, as opposed to refinement sample
  double horizon = 0.0;
  double eta0 = 0.0;
  double target = 1.0;
  std::size_t size() const { return times.size(); }
};

SampledPattern sample_pattern(const LiquidityPattern& pattern, int samples_per_cell);

struct SampledCurves {
  std::vector<double> times;
  std::vector<double> lambda;
  std::vector<double> kappa;
};

/// lambda and kappa on the grid (Atomic) or on a refinement (PiecewiseConstant).
SampledCurves lambda_kappa(const LiquidityPattern& pattern, int samples_per_cell = 1);

}  // namespace liqsched

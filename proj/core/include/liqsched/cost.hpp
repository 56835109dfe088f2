#pragma once

#include <limits>
#include <span>
#include <vector>

#include "liqsched/pattern.hpp"
#include "liqsched/scheduler.hpp"

namespace liqsched {

/// Exact cost and mark-up evaluation for one schedule against one pattern.
/// total_cost decomposes into the eta0 carry (eta0 times the rho-discounted
/// volume) and the impact component (the cost with eta0 = 0).
struct CostReport {
  double total_cost = 0.0;
  double eta0_component = 0.0;
  double impact_component = 0.0;
  std::vector<double> times;   // schedule sample times
  std::vector<double> markup;  // mark-up right after each time
  double y_used = std::numeric_limits<double>::quiet_NaN();
};

/// Mark-up path along the schedule: exact exponential decay between trades,
/// a jump of size / depth at each trade. Trading where depth vanishes
/// (including past the horizon) raises InfiniteImpact.
std::vector<double> markup_path(const LiquidityPattern& pattern, const Schedule& schedule,
                                double eta0);

CostReport execution_cost(const LiquidityPattern& pattern, const Schedule& schedule, double eta0);
double execution_cost_value(const LiquidityPattern& pattern, const Schedule& schedule,
                            double eta0);

/// The X <-> Y reformulation: Y accumulates trade sizes over lambda on top of
/// eta0, X integrates lambda against Y's increases. Round trips reproduce the
/// input and costs transport exactly: C(X) = K(Y).
std::vector<double> x_to_y(const LiquidityPattern& pattern, const Schedule& schedule, double eta0);
Schedule y_to_x(const LiquidityPattern& pattern, std::span<const double> times,
                std::span<const double> y_values, double eta0);

/// K(Y) = 1/2 * sum of kappa against the increments of Y^2 (exact for step Y).
double k_functional(std::span<const double> kappa, std::span<const double> y_values,
                    double y_start);
double k_tilde_functional(std::span<const double> kappa_tilde, std::span<const double> y_values,
                          double y_start);

/// First-order-condition residuals at every sample:
///   residual_t = -integral over [t, inf) of Y* d(kappa_tilde) - y * lambda_tilde_t
/// with the terminal drop of kappa_tilde to zero included. Optimality means
/// residual >= 0 everywhere and = 0 at increase points of the frontier.
std::vector<double> foc_residuals(std::span<const double> frontier_values,
                                  std::span<const double> kappa_tilde,
                                  std::span<const double> lambda_tilde, double y);

/// Cost with each trade's contribution discounted by exp(-integral of rbar).
/// Equals the plain execution cost under apply_discount(pattern, rbar).
double discounted_cost(const LiquidityPattern& pattern, const Schedule& schedule, double eta0,
                       std::span<const double> discount_rates);

}  // namespace liqsched

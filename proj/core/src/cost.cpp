#include "liqsched/cost.hpp"

#include <algorithm>
#include <cmath>

#include "liqsched/errors.hpp"

namespace liqsched {

namespace {

struct CostAccumulator {
  double cost = 0.0;
  double eta0_part = 0.0;
};

// Walks the schedule path once; `weight` multiplies each trade's contribution
// (identity for plain costs, the discount factor otherwise).
template <typename WeightFn>
CostAccumulator accumulate_cost(const LiquidityPattern& pattern, const Schedule& schedule,
                                double eta0, WeightFn weight, std::vector<double>* markup_out) {
  CostAccumulator acc;
  if (markup_out) markup_out->assign(schedule.size(), 0.0);
  double eta = eta0;
  double prev_log_rho = 0.0;
  double prev_x = 0.0;
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    const double t = schedule.times[i];
    const double lr = pattern.log_rho(t);
    eta *= std::exp(prev_log_rho - lr);
    prev_log_rho = lr;
    const double dx = schedule.path[i] - prev_x;
    prev_x = schedule.path[i];
    if (dx > 0.0) {
      const double delta = pattern.depth_at(t);
      if (delta <= 0.0) {
        raise(ErrorCode::InfiniteImpact, "trade where depth vanishes (t beyond the horizon?)");
      }
      const double w = weight(t);
      acc.cost += w * dx * (eta + dx / (2.0 * delta));
      acc.eta0_part += w * eta0 * dx * std::exp(-lr);
      eta += dx / delta;
    } else if (dx < 0.0) {
      raise(ErrorCode::InvalidParams, "schedule path must be nondecreasing");
    }
    if (markup_out) (*markup_out)[i] = eta;
  }
  return acc;
}

}  // namespace

std::vector<double> markup_path(const LiquidityPattern& pattern, const Schedule& schedule,
                                double eta0) {
  std::vector<double> markup;
  accumulate_cost(pattern, schedule, eta0, [](double) { return 1.0; }, &markup);
  return markup;
}

CostReport execution_cost(const LiquidityPattern& pattern, const Schedule& schedule, double eta0) {
  CostReport report;
  report.times = schedule.times;
  const CostAccumulator acc =
      accumulate_cost(pattern, schedule, eta0, [](double) { return 1.0; }, &report.markup);
  const CostAccumulator zero =
      accumulate_cost(pattern, schedule, 0.0, [](double) { return 1.0; }, nullptr);
  report.total_cost = acc.cost;
  report.eta0_component = acc.eta0_part;
  report.impact_component = zero.cost;
  report.y_used = schedule.multiplier;
  return report;
}

double execution_cost_value(const LiquidityPattern& pattern, const Schedule& schedule,
                            double eta0) {
  return accumulate_cost(pattern, schedule, eta0, [](double) { return 1.0; }, nullptr).cost;
}

std::vector<double> x_to_y(const LiquidityPattern& pattern, const Schedule& schedule,
                           double eta0) {
  std::vector<double> y(schedule.size(), eta0);
  double level = eta0;
  double prev_x = 0.0;
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    const double dx = schedule.path[i] - prev_x;
    prev_x = schedule.path[i];
    if (dx > 0.0) {
      const double t = schedule.times[i];
      const double lambda = pattern.depth_at(t) / pattern.rho(t);
      if (lambda <= 0.0) {
        raise(ErrorCode::DivisionByZeroDepth, "schedule trades where lambda vanishes");
      }
      level += dx / lambda;
    }
    y[i] = level;
  }
  return y;
}

Schedule y_to_x(const LiquidityPattern& pattern, std::span<const double> times,
                std::span<const double> y_values, double eta0) {
  if (times.size() != y_values.size()) {
    raise(ErrorCode::InvalidParams, "times and Y values must be aligned");
  }
  Schedule sched;
  sched.times.assign(times.begin(), times.end());
  sched.path.assign(times.size(), 0.0);
  double prev_y = eta0;
  double x = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double dy = y_values[i] - prev_y;
    if (dy < 0.0) raise(ErrorCode::InvalidParams, "Y must be nondecreasing");
    if (dy > 0.0) {
      const double lambda = pattern.depth_at(times[i]) / pattern.rho(times[i]);
      const double dx = lambda * dy;
      if (dx > 0.0) sched.atoms.push_back({times[i], dx});
      x += dx;
    }
    sched.path[i] = x;
    prev_y = y_values[i];
  }
  sched.total = x;
  return sched;
}

double k_functional(std::span<const double> kappa, std::span<const double> y_values,
                    double y_start) {
  if (kappa.size() != y_values.size()) {
    raise(ErrorCode::InvalidParams, "kappa and Y values must be aligned");
  }
  double total = 0.0;
  double prev = y_start;
  for (std::size_t i = 0; i < kappa.size(); ++i) {
    total += 0.5 * kappa[i] * (y_values[i] * y_values[i] - prev * prev);
    prev = y_values[i];
  }
  return total;
}

double k_tilde_functional(std::span<const double> kappa_tilde, std::span<const double> y_values,
                          double y_start) {
  return k_functional(kappa_tilde, y_values, y_start);
}

std::vector<double> foc_residuals(std::span<const double> frontier_values,
                                  std::span<const double> kappa_tilde,
                                  std::span<const double> lambda_tilde, double y) {
  const std::size_t n = frontier_values.size();
  if (kappa_tilde.size() != n || lambda_tilde.size() != n) {
    raise(ErrorCode::InvalidParams, "frontier, kappa_tilde and lambda_tilde must be aligned");
  }
  std::vector<double> residuals(n, 0.0);
  // Suffix Stieltjes sum of Y* against d(kappa_tilde), closed on the left:
  // the drop of kappa_tilde between sample j and j+1 carries Y* at j, and the
  // terminal drop to zero sits just after the last sample.
  double suffix = 0.0;
  for (std::size_t j = n; j-- > 0;) {
    const double next_kappa = (j + 1 < n) ? kappa_tilde[j + 1] : 0.0;
    suffix += frontier_values[j] * (next_kappa - kappa_tilde[j]);
    residuals[j] = -suffix - y * lambda_tilde[j];
  }
  return residuals;
}

double discounted_cost(const LiquidityPattern& pattern, const Schedule& schedule, double eta0,
                       std::span<const double> discount_rates) {
  if (discount_rates.size() != pattern.size()) {
    raise(ErrorCode::InvalidParams, "discount rates must live on the pattern grid");
  }
  for (double r : discount_rates) {
    if (!std::isfinite(r) || r < 0.0) {
      raise(ErrorCode::NegativeValue, "discount rate values must be finite and >= 0");
    }
  }
  std::vector<double> cum(pattern.size(), 0.0);
  for (std::size_t i = 1; i < pattern.size(); ++i) {
    cum[i] = cum[i - 1] + discount_rates[i - 1] * (pattern.times()[i] - pattern.times()[i - 1]);
  }
  auto weight = [&](double t) {
    const std::size_t i = pattern.cell_index(t);
    return std::exp(-(cum[i] + discount_rates[i] * (t - pattern.times()[i])));
  };
  return accumulate_cost(pattern, schedule, eta0, weight, nullptr).cost;
}

}  // namespace liqsched

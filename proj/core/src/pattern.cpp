#include "liqsched/pattern.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace liqsched {

namespace {

void require_finite_nonnegative(std::span<const double> xs, const char* what) {
  for (double x : xs) {
    if (!std::isfinite(x) || x < 0.0) {
      raise(ErrorCode::NegativeValue, std::string(what) + " values must be finite and >= 0");
    }
  }
}

}  // namespace

LiquidityPattern LiquidityPattern::validate(const RawPattern& raw) {
  if (raw.times.empty()) raise(ErrorCode::NonMonotoneGrid, "grid must contain at least one time");
  if (raw.times.front() != 0.0) raise(ErrorCode::NonMonotoneGrid, "grid must start at t = 0");
  for (std::size_t i = 0; i + 1 < raw.times.size(); ++i) {
    if (!(raw.times[i] < raw.times[i + 1])) {
      raise(ErrorCode::NonMonotoneGrid, "grid times must be strictly increasing");
    }
  }
  for (double t : raw.times) {
    if (!std::isfinite(t)) raise(ErrorCode::NonMonotoneGrid, "grid times must be finite");
  }
  if (raw.depth.size() != raw.times.size() || raw.resilience.size() != raw.times.size()) {
    raise(ErrorCode::InvalidParams, "times, depth and resilience must have equal length");
  }
  require_finite_nonnegative(raw.depth, "depth");
  require_finite_nonnegative(raw.resilience, "resilience");
  if (!std::isfinite(raw.horizon) || raw.horizon < raw.times.back()) {
    raise(ErrorCode::InvalidParams, "horizon must be finite and not precede the last grid time");
  }
  if (!std::isfinite(raw.eta0) || raw.eta0 < 0.0) {
    raise(ErrorCode::NegativeValue, "eta0 must be finite and >= 0");
  }
  if (!std::isfinite(raw.target) || raw.target <= 0.0) {
    raise(ErrorCode::InvalidParams, "target must be finite and > 0");
  }
  if (std::ranges::all_of(raw.depth, [](double d) { return d == 0.0; })) {
    raise(ErrorCode::EmptyMarket, "depth is identically zero");
  }

  LiquidityPattern p;
  p.kind_ = raw.kind;
  p.times_ = raw.times;
  p.depth_ = raw.depth;
  p.resilience_ = raw.resilience;
  p.horizon_ = raw.horizon;
  p.eta0_ = raw.eta0;
  p.target_ = raw.target;
  p.rebuild_cumulatives();
  return p;
}

void LiquidityPattern::rebuild_cumulatives() {
  const std::size_t n = times_.size();
  cum_log_rho_.assign(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    cum_log_rho_[i] = cum_log_rho_[i - 1] + resilience_[i - 1] * (times_[i] - times_[i - 1]);
  }
  cum_log_growth_.clear();
  if (!depth_growth_.empty()) {
    cum_log_growth_.assign(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) {
      cum_log_growth_[i] = cum_log_growth_[i - 1] + depth_growth_[i - 1] * (times_[i] - times_[i - 1]);
    }
  }
}

void LiquidityPattern::check_invariants() const {
  bool any_depth = std::ranges::any_of(depth_, [](double d) { return d > 0.0; }) ||
                   std::ranges::any_of(point_depth_, [](auto& p) { return p.second > 0.0; });
  if (!any_depth) raise(ErrorCode::EmptyMarket, "depth is identically zero");
}

bool LiquidityPattern::zero_resilience() const {
  return std::ranges::all_of(resilience_, [](double r) { return r == 0.0; });
}

std::size_t LiquidityPattern::cell_index(double t) const {
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  if (it == times_.begin()) return 0;
  return static_cast<std::size_t>(it - times_.begin()) - 1;
}

double LiquidityPattern::log_rho(double t) const {
  if (t <= 0.0) return 0.0;
  const std::size_t i = cell_index(t);
  return cum_log_rho_[i] + resilience_[i] * (t - times_[i]);
}

double LiquidityPattern::rho(double t) const { return std::exp(log_rho(t)); }

double LiquidityPattern::log_growth(double t) const {
  if (depth_growth_.empty() || t <= 0.0) return 0.0;
  const std::size_t i = cell_index(t);
  return cum_log_growth_[i] + depth_growth_[i] * (t - times_[i]);
}

double LiquidityPattern::depth_at(double t) const {
  if (t < 0.0 || t > horizon_) return 0.0;
  double base = 0.0;
  if (kind_ == PatternKind::Atomic) {
    auto it = std::lower_bound(times_.begin(), times_.end(), t);
    if (it != times_.end() && *it == t) {
      base = depth_[static_cast<std::size_t>(it - times_.begin())];
    }
  } else {
    base = depth_[cell_index(t)];
    if (!depth_growth_.empty() && base > 0.0) base *= std::exp(log_growth(t));
  }
  for (const auto& [s, d] : point_depth_) {
    if (s == t) base = std::max(base, d);
  }
  return base;
}

double LiquidityPattern::depth_max() const {
  double best = 0.0;
  for (std::size_t i = 0; i < depth_.size(); ++i) {
    double d = depth_[i];
    if (kind_ == PatternKind::PiecewiseConstant && !depth_growth_.empty() && d > 0.0) {
      // growth is nonnegative, so a growing cell peaks at its right end
      const double right = (i + 1 < times_.size()) ? times_[i + 1] : horizon_;
      d *= std::exp(std::max(log_growth(times_[i]), log_growth(right)));
    }
    best = std::max(best, d);
  }
  for (const auto& [s, d] : point_depth_) best = std::max(best, d);
  return best;
}

double LiquidityPattern::earliest_depth_argmax() const {
  const double target = depth_max();
  double best_time = horizon_;
  bool found = false;
  for (std::size_t i = 0; i < depth_.size(); ++i) {
    if (depth_at(times_[i]) == target) {
      best_time = found ? std::min(best_time, times_[i]) : times_[i];
      found = true;
    }
  }
  for (const auto& [s, d] : point_depth_) {
    if (d == target) {
      best_time = found ? std::min(best_time, s) : s;
      found = true;
    }
  }
  if (!found) raise(ErrorCode::EmptyMarket, "no depth maximizer");
  return best_time;
}

LiquidityPattern LiquidityPattern::with_overrides(std::optional<double> target,
                                                  std::optional<double> eta0) const {
  LiquidityPattern p = *this;
  if (target) {
    if (!std::isfinite(*target) || *target <= 0.0) {
      raise(ErrorCode::InvalidParams, "target must be finite and > 0");
    }
    p.target_ = *target;
  }
  if (eta0) {
    if (!std::isfinite(*eta0) || *eta0 < 0.0) {
      raise(ErrorCode::NegativeValue, "eta0 must be finite and >= 0");
    }
    p.eta0_ = *eta0;
  }
  return p;
}

LiquidityPattern validate(const RawPattern& raw) { return LiquidityPattern::validate(raw); }

double rho(const LiquidityPattern& pattern, double t) { return pattern.rho(t); }

LiquidityPattern apply_discount(const LiquidityPattern& pattern,
                                std::span<const double> discount_rates) {
  if (discount_rates.size() != pattern.size()) {
    raise(ErrorCode::InvalidParams, "discount rates must live on the pattern grid");
  }
  require_finite_nonnegative(discount_rates, "discount rate");

  LiquidityPattern p = pattern;
  // Accumulated discount exponent at the grid nodes.
  std::vector<double> cum(pattern.size(), 0.0);
  for (std::size_t i = 1; i < pattern.size(); ++i) {
    cum[i] = cum[i - 1] + discount_rates[i - 1] * (pattern.times()[i] - pattern.times()[i - 1]);
  }
  for (std::size_t i = 0; i < p.size(); ++i) p.resilience_[i] += discount_rates[i];
  if (pattern.kind() == PatternKind::Atomic) {
    for (std::size_t i = 0; i < p.size(); ++i) p.depth_[i] *= std::exp(cum[i]);
  } else {
    if (p.depth_growth_.empty()) p.depth_growth_.assign(p.size(), 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) p.depth_growth_[i] += discount_rates[i];
  }
  for (auto& [s, d] : p.point_depth_) {
    const std::size_t i = pattern.cell_index(s);
    d *= std::exp(cum[i] + discount_rates[i] * (s - pattern.times()[i]));
  }
  p.rebuild_cumulatives();
  p.check_invariants();
  return p;
}

LiquidityPattern collapse_zero_resilience(const LiquidityPattern& pattern) {
  const auto& r = pattern.resilience();
  const auto& t = pattern.times();
  const std::size_t n = pattern.size();

  if (pattern.zero_resilience()) {
    if (pattern.kind() == PatternKind::Atomic) return pattern;
    // No decay anywhere: depth flows can be read as point opportunities at the
    // cell starts; the scheduler resolves the rest via the argmax-depth path.
    LiquidityPattern p = pattern;
    p.kind_ = PatternKind::Atomic;
    for (const auto& [s, d] : pattern.point_depth()) {
      auto it = std::lower_bound(p.times_.begin(), p.times_.end(), s);
      if (it != p.times_.end() && *it == s) {
        const auto idx = static_cast<std::size_t>(it - p.times_.begin());
        p.depth_[idx] = std::max(p.depth_[idx], d);
      } else {
        const auto idx = static_cast<std::size_t>(it - p.times_.begin());
        p.times_.insert(it, s);
        p.depth_.insert(p.depth_.begin() + static_cast<std::ptrdiff_t>(idx), d);
        p.resilience_.insert(p.resilience_.begin() + static_cast<std::ptrdiff_t>(idx), 0.0);
      }
    }
    p.point_depth_.clear();
    p.depth_growth_.clear();
    p.rebuild_cumulatives();
    p.check_invariants();
    return p;
  }

  bool has_zero_cell = false;
  for (std::size_t i = 0; i < n; ++i) has_zero_cell |= (r[i] == 0.0);
  if (!has_zero_cell) return pattern;

  LiquidityPattern p;
  p.kind_ = pattern.kind();
  p.horizon_ = pattern.horizon();
  p.eta0_ = pattern.eta0();
  p.target_ = pattern.target();
  p.point_depth_ = pattern.point_depth();
  const bool grown = !pattern.depth_growth().empty();

  std::size_t i = 0;
  while (i < n) {
    if (r[i] != 0.0) {
      p.times_.push_back(t[i]);
      p.depth_.push_back(pattern.depth()[i]);
      p.resilience_.push_back(r[i]);
      if (grown) p.depth_growth_.push_back(pattern.depth_growth()[i]);
      ++i;
      continue;
    }
    // Maximal run of zero-resilience cells [t_a, t_b).
    std::size_t a = i;
    while (i < n && r[i] == 0.0) ++i;
    const double run_start = t[a];
    const double run_end = (i < n) ? t[i] : pattern.horizon();
    double peak = 0.0;
    if (pattern.kind() == PatternKind::Atomic) {
      for (std::size_t j = a; j < i; ++j) peak = std::max(peak, pattern.depth()[j]);
    } else {
      // Depth growth vanishes on zero-resilience cells (it only ever comes
      // from a discount rate, which also enters the resilience), so the cell
      // value times the factor accumulated before the run is the supremum.
      const double factor = grown ? std::exp(pattern.log_growth(run_start)) : 1.0;
      for (std::size_t j = a; j < i; ++j) peak = std::max(peak, pattern.depth()[j] * factor);
    }
    // Fold in any earlier point opportunities inside the run.
    std::erase_if(p.point_depth_, [&](const std::pair<double, double>& pd) {
      const bool inside = pd.first >= run_start && pd.first < run_end;
      if (inside) peak = std::max(peak, pd.second);
      return inside;
    });
    if (pattern.kind() == PatternKind::Atomic) {
      p.times_.push_back(run_start);
      p.depth_.push_back(peak);
      p.resilience_.push_back(0.0);
      if (grown) p.depth_growth_.push_back(0.0);
    } else {
      p.times_.push_back(run_start);
      p.depth_.push_back(0.0);
      p.resilience_.push_back(0.0);
      if (grown) p.depth_growth_.push_back(0.0);
      if (peak > 0.0) p.point_depth_.emplace_back(run_start, peak);
    }
  }
  std::ranges::sort(p.point_depth_);
  p.rebuild_cumulatives();
  p.check_invariants();
  return p;
}

SampledPattern sample_pattern(const LiquidityPattern& pattern, int samples_per_cell) {
  if (samples_per_cell < 1) raise(ErrorCode::InvalidParams, "resolution must be >= 1");
  const auto& t = pattern.times();
  const std::size_t n = pattern.size();

  struct Site {
    double t;
    double depth;
    bool atom;
  };
  std::vector<Site> sites;

  if (pattern.kind() == PatternKind::Atomic) {
    sites.reserve(n);
    for (std::size_t i = 0; i < n; ++i) sites.push_back({t[i], pattern.depth()[i], true});
  } else {
    sites.reserve(n * static_cast<std::size_t>(samples_per_cell) + 1);
    for (std::size_t i = 0; i < n; ++i) {
      const double left = t[i];
      const double right = (i + 1 < n) ? t[i + 1] : pattern.horizon();
      const double width = right - left;
      if (width <= 0.0) {
        sites.push_back({left, pattern.depth_at(left), true});
        continue;
      }
      for (int j = 0; j < samples_per_cell; ++j) {
        const double tj = left + width * (static_cast<double>(j) / samples_per_cell);
        sites.push_back({tj, pattern.depth_at(tj), j == 0});
      }
    }
    // Close the last cell at the horizon, where depth is still available.
    if (pattern.horizon() > t.back() || sites.empty() || sites.back().t < pattern.horizon()) {
      sites.push_back({pattern.horizon(), pattern.depth_at(pattern.horizon()), true});
    }
  }

  for (const auto& [s, d] : pattern.point_depth()) {
    auto it = std::lower_bound(sites.begin(), sites.end(), s,
                               [](const Site& a, double b) { return a.t < b; });
    if (it != sites.end() && it->t == s) {
      it->depth = std::max(it->depth, d);
      it->atom = true;
    } else {
      sites.insert(it, {s, std::max(d, pattern.depth_at(s)), true});
    }
  }

  SampledPattern sp;
  sp.horizon = pattern.horizon();
  sp.eta0 = pattern.eta0();
  sp.target = pattern.target();
  const std::size_t m = sites.size();
  sp.times.resize(m);
  sp.depth.resize(m);
  sp.log_rho.resize(m);
  sp.rho.resize(m);
  sp.lambda.resize(m);
  sp.kappa.resize(m);
  sp.step.resize(m);
  sp.atom_site.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    sp.times[i] = sites[i].t;
    sp.depth[i] = sites[i].depth;
    sp.log_rho[i] = pattern.log_rho(sites[i].t);
    sp.rho[i] = std::exp(sp.log_rho[i]);
    sp.lambda[i] = sites[i].depth > 0.0 ? sites[i].depth / sp.rho[i] : 0.0;
    sp.kappa[i] = sp.lambda[i] > 0.0 ? sp.lambda[i] / sp.rho[i] : 0.0;
    sp.step[i] = i == 0 ? 0.0 : sites[i].t - sites[i - 1].t;
    sp.atom_site[i] = sites[i].atom ? 1 : 0;
  }
  return sp;
}

SampledCurves lambda_kappa(const LiquidityPattern& pattern, int samples_per_cell) {
  SampledPattern sp = sample_pattern(pattern, samples_per_cell);
  return SampledCurves{std::move(sp.times), std::move(sp.lambda), std::move(sp.kappa)};
}

}  // namespace liqsched

#include "liqsched/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "liqsched/errors.hpp"

namespace liqsched {

std::vector<double> decreasing_envelope(std::span<const double> lambda) {
  std::vector<double> tilde(lambda.size());
  double running = 0.0;
  for (std::size_t i = lambda.size(); i-- > 0;) {
    running = std::max(running, lambda[i]);
    tilde[i] = running;
  }
  return tilde;
}

std::vector<EnvelopePoint> time_changed_curve(const SampledPattern& sampled,
                                              std::span<const double> lambda_tilde,
                                              std::span<const double> kappa_tilde) {
  const std::size_t n = sampled.size();
  if (lambda_tilde.size() != n) {
    raise(ErrorCode::InvalidParams, "lambda_tilde must be aligned with the samples");
  }
  if (!kappa_tilde.empty() && kappa_tilde.size() != n) {
    raise(ErrorCode::InvalidParams, "kappa_tilde must be aligned with the samples");
  }
  std::vector<EnvelopePoint> pts;
  pts.reserve(n + 1);
  pts.push_back({0.0, 0.0, std::numeric_limits<double>::quiet_NaN()});
  std::vector<char> attained;  // parallel to pts, origin slot unused
  attained.push_back(0);

  // Walking backwards in time gives ascending k while lambda_tilde > 0.
  for (std::size_t i = n; i-- > 0;) {
    if (lambda_tilde[i] <= 0.0) continue;
    const double k = kappa_tilde.empty() ? lambda_tilde[i] / sampled.rho[i] : kappa_tilde[i];
    const bool att = sampled.lambda[i] == lambda_tilde[i];
    if (k <= pts.back().k) {
      // Tie (exact over zero-resilience stretches, or a rounding-level
      // inversion): keep one point, preferring an attaining sample and,
      // among those, the earliest time.
      EnvelopePoint& last = pts.back();
      if (last.k == 0.0) continue;  // degenerate, cannot happen with k > 0 guard above
      const bool replace = att || !attained.back();
      if (replace) {
        last.source_time = sampled.times[i];
        last.value = std::max(last.value, lambda_tilde[i]);
        attained.back() = att || attained.back();
      }
      continue;
    }
    pts.push_back({k, lambda_tilde[i], sampled.times[i]});
    attained.push_back(att ? 1 : 0);
  }
  return pts;
}

std::vector<EnvelopePoint> concave_envelope(std::span<const EnvelopePoint> curve) {
  std::vector<EnvelopePoint> hull;
  hull.reserve(curve.size());
  for (const EnvelopePoint& p : curve) {
    while (hull.size() >= 2) {
      const EnvelopePoint& a = hull[hull.size() - 2];
      const EnvelopePoint& b = hull.back();
      // pop b unless slope(a,b) > slope(b,p); collinear points are dropped
      const double cross = (b.k - a.k) * (p.value - b.value) - (b.value - a.value) * (p.k - b.k);
      if (cross >= 0.0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(p);
  }
  return hull;
}

MonotoneStepCurve density(std::span<const EnvelopePoint> hull) {
  if (hull.size() < 2) return {};
  std::vector<double> breakpoints;
  std::vector<double> slopes;
  breakpoints.reserve(hull.size() - 1);
  slopes.reserve(hull.size() - 1);
  for (std::size_t v = 1; v < hull.size(); ++v) {
    breakpoints.push_back(hull[v].k);
    slopes.push_back((hull[v].value - hull[v - 1].value) / (hull[v].k - hull[v - 1].k));
  }
  return MonotoneStepCurve(std::move(breakpoints), std::move(slopes),
                           Continuity::LeftContinuous, Direction::Decreasing);
}

double l2_norm_sq(const MonotoneStepCurve& density) {
  double total = 0.0;
  double prev_k = 0.0;
  auto bp = density.breakpoints();
  auto vals = density.values();
  for (std::size_t i = 0; i < bp.size(); ++i) {
    total += vals[i] * vals[i] * (bp[i] - prev_k);
    prev_k = bp[i];
  }
  return total;
}

EnvelopeResult build_envelope(const SampledPattern& sampled) {
  EnvelopeResult result;
  result.lambda_tilde = decreasing_envelope(sampled.lambda);
  result.kappa_tilde.resize(sampled.size());
  for (std::size_t i = 0; i < sampled.size(); ++i) {
    result.kappa_tilde[i] =
        result.lambda_tilde[i] > 0.0 ? result.lambda_tilde[i] / sampled.rho[i] : 0.0;
  }
  // kappa_tilde is nonincreasing in exact arithmetic; clamp away
  // rounding-level inversions so step-curve lookups stay consistent.
  for (std::size_t i = 1; i < result.kappa_tilde.size(); ++i) {
    result.kappa_tilde[i] = std::min(result.kappa_tilde[i], result.kappa_tilde[i - 1]);
  }
  result.curve = time_changed_curve(sampled, result.lambda_tilde, result.kappa_tilde);
  result.hull = concave_envelope(result.curve);
  result.density = density(result.hull);
  result.l2_sq = l2_norm_sq(result.density);
  return result;
}

std::vector<double> signal(const SampledPattern& sampled) {
  const std::vector<double> lt = decreasing_envelope(sampled.lambda);
  const std::size_t n = sampled.size();
  std::vector<double> kt(n);
  for (std::size_t i = 0; i < n; ++i) {
    kt[i] = lt[i] > 0.0 ? lt[i] / sampled.rho[i] : 0.0;
    if (i > 0) kt[i] = std::min(kt[i], kt[i - 1]);
  }

  std::vector<double> lstar(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    auto consider = [&](double lu, double ku) {
      const double num = lu - lt[i];
      const double den = ku - kt[i];
      if (num == 0.0 && den == 0.0) {
        best = std::min(best, 0.0);
      } else if (den != 0.0) {
        best = std::min(best, num / den);
      }
    };
    for (std::size_t j = i + 1; j < n; ++j) consider(lt[j], kt[j]);
    consider(0.0, 0.0);  // any time past the last positive-depth sample
    lstar[i] = std::isfinite(best) ? best : 0.0;
  }
  return lstar;
}

double verify_signal_identity(std::span<const double> lstar, const MonotoneStepCurve& density,
                              std::span<const double> kappa_tilde) {
  if (lstar.size() != kappa_tilde.size()) {
    raise(ErrorCode::InvalidParams, "signal and kappa_tilde must be aligned");
  }
  double worst = 0.0;
  double running = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < lstar.size(); ++s) {
    running = std::max(running, lstar[s]);
    const double rhs = density.empty() ? 0.0 : density(kappa_tilde[s]);
    worst = std::max(worst, std::abs(running - rhs));
  }
  return worst;
}

}  // namespace liqsched

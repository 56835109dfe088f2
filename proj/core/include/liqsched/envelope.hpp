#pragma once

#include <span>
#include <vector>

#include "liqsched/pattern.hpp"
#include "liqsched/step_curve.hpp"

namespace liqsched {

/// One sample of the time-changed depth curve: at abscissa k (in units of
/// kappa), the curve value equals k times rho at the level passage time.
/// source_time is the time that produced the point, or NaN for the origin.
struct EnvelopePoint {
  double k = 0.0;
  double value = 0.0;
  double source_time = 0.0;
};

/// Decreasing envelope, time change, concave hull and its density for one
/// sampled pattern. lambda_tilde/kappa_tilde are aligned with the sample
/// times; curve and hull are ordered by ascending k and start at (0, 0).
struct EnvelopeResult {
  std::vector<double> lambda_tilde;
  std::vector<double> kappa_tilde;
  std::vector<EnvelopePoint> curve;
  std::vector<EnvelopePoint> hull;
  MonotoneStepCurve density;  // left-continuous, decreasing, on (0, k_top]
  double l2_sq = 0.0;         // integral of the squared density
};

/// Smallest decreasing majorant of lambda over the sample set, taken from the
/// right (suffix running maximum). Off-sample depth is zero or decays inside
/// a cell, so the supremum is attained on the samples.
std::vector<double> decreasing_envelope(std::span<const double> lambda);

/// The curve k -> Lambda_tilde_k sampled at the kappa_tilde values, ordered by
/// ascending k with the origin prepended. Ties in k (possible across
/// zero-resilience stretches) keep the earliest sample attaining
/// lambda_tilde = lambda. kappa_tilde may be passed to reuse precomputed
/// values; otherwise it is derived as lambda_tilde / rho.
std::vector<EnvelopePoint> time_changed_curve(const SampledPattern& sampled,
                                              std::span<const double> lambda_tilde,
                                              std::span<const double> kappa_tilde = {});

/// Upper concave hull via one monotone-chain pass. Vertices are a subset of
/// the input points; collinear interior points are dropped, so consecutive
/// segment slopes are strictly decreasing.
std::vector<EnvelopePoint> concave_envelope(std::span<const EnvelopePoint> curve);

/// Per-segment slope of the hull as a left-continuous decreasing step
/// function of k; the value at 0 is the limit from the right.
MonotoneStepCurve density(std::span<const EnvelopePoint> hull);

/// Integral of the squared density over (0, k_top], with the first segment
/// starting at k = 0.
double l2_norm_sq(const MonotoneStepCurve& density);

/// Full chain: decreasing envelope, time change, hull, density, L2 norm.
EnvelopeResult build_envelope(const SampledPattern& sampled);

/// Trading signal L* at each sample: the infimum over later samples (and the
/// post-horizon state) of the slope ratio between envelope values, with the
/// 0/0 convention resolving to 0. Direct O(n^2) evaluation.
std::vector<double> signal(const SampledPattern& sampled);

/// Max discrepancy over samples between the running maximum of L* and the
/// density composed with kappa_tilde.
double verify_signal_identity(std::span<const double> lstar, const MonotoneStepCurve& density,
                              std::span<const double> kappa_tilde);

}  // namespace liqsched

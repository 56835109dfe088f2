#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "liqsched/envelope.hpp"
#include "support/instances.hpp"

using namespace liqsched;

namespace {

// Hull property suite: majorization, vertex touching, strictly decreasing
// slopes. Assertable exactly as stated on every run.
void check_hull_properties(const std::vector<EnvelopePoint>& curve,
                           const std::vector<EnvelopePoint>& hull) {
  REQUIRE(!hull.empty());
  // vertices are a subset of the curve
  for (const auto& v : hull) {
    bool found = false;
    for (const auto& p : curve) found |= (p.k == v.k && p.value == v.value);
    CHECK(found);
  }
  // majorization along the curve
  std::size_t seg = 1;
  for (const auto& p : curve) {
    while (seg + 1 < hull.size() && hull[seg].k < p.k) ++seg;
    if (hull.size() < 2) break;
    const auto& a = hull[seg - 1];
    const auto& b = hull[seg];
    const double hat = a.value + (b.value - a.value) * (p.k - a.k) / (b.k - a.k);
    CHECK(hat >= p.value - 1e-12 * (1.0 + std::abs(p.value)));
  }
  // strictly decreasing slopes
  for (std::size_t v = 2; v < hull.size(); ++v) {
    const double s1 = (hull[v - 1].value - hull[v - 2].value) / (hull[v - 1].k - hull[v - 2].k);
    const double s2 = (hull[v].value - hull[v - 1].value) / (hull[v].k - hull[v - 1].k);
    CHECK(s2 < s1);
  }
}

std::vector<EnvelopePoint> as_points(std::vector<std::pair<double, double>> kv) {
  std::vector<EnvelopePoint> pts;
  for (auto& [k, v] : kv) pts.push_back({k, v, 0.0});
  return pts;
}

}  // namespace

TEST_CASE("decreasing envelope is the running max from the right") {
  const std::vector<double> lambda = {1.0, 3.0, 2.0, 2.5, 0.5};
  const std::vector<double> expected = {3.0, 3.0, 2.5, 2.5, 0.5};
  CHECK(decreasing_envelope(lambda) == expected);
}

TEST_CASE("decreasing envelope of a decreasing curve is the identity") {
  const std::vector<double> lambda = {5.0, 4.0, 2.0, 1.0};
  CHECK(decreasing_envelope(lambda) == lambda);
}

TEST_CASE("OW resilience-adjusted depth is its own decreasing envelope") {
  const SampledPattern sp = sample_pattern(testing::ow_pattern(), 500);
  CHECK(decreasing_envelope(sp.lambda) == sp.lambda);
}

TEST_CASE("decreasing envelope is the smallest decreasing majorant on the samples") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> value(0.0, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> lambda(12);
    for (auto& l : lambda) l = value(rng);
    const std::vector<double> tilde = decreasing_envelope(lambda);
    // majorant, computed independently by a double loop
    for (std::size_t i = 0; i < lambda.size(); ++i) {
      double sup = 0.0;
      for (std::size_t j = i; j < lambda.size(); ++j) sup = std::max(sup, lambda[j]);
      CHECK(tilde[i] == sup);
      CHECK(tilde[i] >= lambda[i]);
      if (i + 1 < lambda.size()) CHECK(tilde[i] >= tilde[i + 1]);
    }
    // lambda_tilde = lambda at every point of decrease towards the right
    for (std::size_t i = 0; i + 1 < lambda.size(); ++i) {
      if (tilde[i] > tilde[i + 1]) CHECK(tilde[i] == lambda[i]);
    }
  }
}

TEST_CASE("two-atom time-changed curve has the three hand-computed points") {
  const SampledPattern sp = sample_pattern(testing::two_atom_pattern(), 1);
  const EnvelopeResult env = build_envelope(sp);
  REQUIRE(env.curve.size() == 3);
  CHECK(env.curve[0].k == 0.0);
  CHECK(env.curve[0].value == 0.0);
  CHECK(env.curve[1].k == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(env.curve[1].value == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(env.curve[1].source_time == 1.0);
  CHECK(env.curve[2].k == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(env.curve[2].value == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(env.curve[2].source_time == 0.0);
  // hull keeps all three; the envelope point invariant value = k * rho(tau_k)
  REQUIRE(env.hull.size() == 3);
  for (const auto& p : env.curve) {
    if (!std::isnan(p.source_time)) {
      const LiquidityPattern pat = testing::two_atom_pattern();
      CHECK(p.value == doctest::Approx(p.k * pat.rho(p.source_time)).epsilon(1e-12));
    }
  }
}

TEST_CASE("OW continuum: curve traces sqrt(delta0 k) capped by the terminal chord") {
  const double r0 = 1.0, T = 2.0;
  const SampledPattern sp = sample_pattern(testing::ow_pattern(1.0, r0, T), 1000);
  const EnvelopeResult env = build_envelope(sp);
  const double kappa_T = std::exp(-2.0 * r0 * T);
  for (const auto& p : env.curve) {
    const double expected = std::min(std::sqrt(p.k), std::exp(r0 * T) * p.k);
    CHECK(p.value == doctest::Approx(expected).epsilon(1e-9));
  }
  // left-continuous density: 1/2 k^{-1/2} above kappa_T, exp(r0 T) below
  CHECK(env.density(kappa_T / 2.0) == doctest::Approx(std::exp(r0 * T)).epsilon(1e-6));
  CHECK(env.density(std::exp(-2.0)) == doctest::Approx(0.5 * std::exp(1.0)).epsilon(1e-3));
}

TEST_CASE("constant lambda_tilde traces a flat closed by the terminal chord; hull keeps both") {
  // Atomic nodes with depth growing exactly like rho keep lambda constant.
  RawPattern raw;
  raw.kind = PatternKind::Atomic;
  raw.times = {0.0, 1.0, 2.0};
  raw.resilience = {0.5, 0.5, 0.5};
  raw.depth = {1.0, std::exp(0.5), std::exp(1.0)};
  raw.horizon = 2.0;
  const LiquidityPattern p = LiquidityPattern::validate(raw);
  const SampledPattern sp = sample_pattern(p, 1);
  const EnvelopeResult env = build_envelope(sp);
  REQUIRE(env.curve.size() == 4);
  for (std::size_t i = 1; i < env.curve.size(); ++i) {
    CHECK(env.curve[i].value == doctest::Approx(1.0).epsilon(1e-14));
  }
  // Hull: chord from the origin to the flat's left end, then the flat.
  REQUIRE(env.hull.size() == 3);
  CHECK(env.hull[1].k == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(env.hull[2].k == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(env.density(0.1) == doctest::Approx(std::exp(1.0)).epsilon(1e-12));
  CHECK(env.density(0.9) == doctest::Approx(0.0));
}

TEST_CASE("concave envelope of already concave points keeps them all") {
  const auto pts = as_points({{0, 0}, {1, 2}, {2, 2.5}, {3, 2.6}});
  const auto hull = concave_envelope(pts);
  CHECK(hull.size() == 4);
}

TEST_CASE("concave envelope of the two-atom points keeps all three") {
  const auto pts = as_points({{0, 0}, {0.25, 0.5}, {1, 1}});
  const auto hull = concave_envelope(pts);
  CHECK(hull.size() == 3);
}

TEST_CASE("concave envelope drops dominated and collinear points") {
  const auto pts = as_points({{0, 0}, {1, 1}, {2, 1.2}, {3, 3}});
  const auto hull = concave_envelope(pts);
  REQUIRE(hull.size() == 2);
  CHECK(hull[0].k == 0.0);
  CHECK(hull[1].k == 3.0);
}

TEST_CASE("hull properties hold on random instances") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const LiquidityPattern p = testing::random_atomic(rng);
    const SampledPattern sp = sample_pattern(p, 1);
    const EnvelopeResult env = build_envelope(sp);
    check_hull_properties(env.curve, env.hull);
    // absolute continuity: the density integrates back to the hull top
    double integral = 0.0;
    double prev = 0.0;
    for (std::size_t i = 0; i < env.density.size(); ++i) {
      integral += env.density.values()[i] * (env.density.breakpoints()[i] - prev);
      prev = env.density.breakpoints()[i];
    }
    CHECK(integral == doctest::Approx(env.hull.back().value).epsilon(1e-12));
  }
}

TEST_CASE("two-atom density and L2 norm by hand") {
  const SampledPattern sp = sample_pattern(testing::two_atom_pattern(), 1);
  const EnvelopeResult env = build_envelope(sp);
  CHECK(env.density(0.1) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(env.density(0.25) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(env.density(0.3) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(env.density(1.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(env.l2_sq == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("single hull segment: constant density with l2_sq = V^2/K") {
  const auto hull = as_points({{0, 0}, {2.0, 3.0}});
  const MonotoneStepCurve dens = density(hull);
  CHECK(dens(1.0) == doctest::Approx(1.5));
  CHECK(l2_norm_sq(dens) == doctest::Approx(4.5));
}

TEST_CASE("OW l2_sq approaches delta0 (1 + r0 T / 2)") {
  const SampledPattern sp = sample_pattern(testing::ow_pattern(1.0, 1.0, 2.0), 2000);
  const EnvelopeResult env = build_envelope(sp);
  CHECK(env.l2_sq == doctest::Approx(2.0).epsilon(1e-5));
  CHECK(env.l2_sq <= 2.0);  // sampled hull never exceeds the continuum
}

TEST_CASE("two-atom signal: L* = 2/3 then 2") {
  const SampledPattern sp = sample_pattern(testing::two_atom_pattern(), 1);
  const std::vector<double> lstar = signal(sp);
  REQUIRE(lstar.size() == 2);
  CHECK(lstar[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(lstar[1] == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("signal vanishes past the last positive-depth sample") {
  RawPattern raw;
  raw.kind = PatternKind::Atomic;
  raw.times = {0.0, 1.0, 2.0};
  raw.depth = {1.0, 1.0, 0.0};
  raw.resilience = {0.5, 0.5, 0.5};
  raw.horizon = 2.0;
  const SampledPattern sp = sample_pattern(LiquidityPattern::validate(raw), 1);
  const std::vector<double> lstar = signal(sp);
  CHECK(lstar.back() == 0.0);
}

TEST_CASE("OW signal matches e^{r0 t}/2 up to the sampling step") {
  const int m = 1000;
  const SampledPattern sp = sample_pattern(testing::ow_pattern(), m);
  const std::vector<double> lstar = signal(sp);
  for (std::size_t i = 0; i + 1 < sp.size(); i += 100) {
    CHECK(lstar[i] ==
          doctest::Approx(0.5 * std::exp(sp.times[i])).epsilon(2.0 / m));
  }
}

TEST_CASE("signal identity: running max of L* equals the density along kappa_tilde") {
  SUBCASE("two-atom instance, exact") {
    const SampledPattern sp = sample_pattern(testing::two_atom_pattern(), 1);
    const EnvelopeResult env = build_envelope(sp);
    CHECK(verify_signal_identity(signal(sp), env.density, env.kappa_tilde) <= 1e-12);
  }
  SUBCASE("sampled OW at m = 1000") {
    const SampledPattern sp = sample_pattern(testing::ow_pattern(), 1000);
    const EnvelopeResult env = build_envelope(sp);
    CHECK(verify_signal_identity(signal(sp), env.density, env.kappa_tilde) <= 1e-6);
  }
  SUBCASE("single node") {
    RawPattern raw;
    raw.kind = PatternKind::Atomic;
    raw.times = {0.0};
    raw.depth = {2.0};
    raw.resilience = {1.0};
    raw.horizon = 0.0;
    const SampledPattern sp = sample_pattern(LiquidityPattern::validate(raw), 1);
    const EnvelopeResult env = build_envelope(sp);
    CHECK(verify_signal_identity(signal(sp), env.density, env.kappa_tilde) <= 1e-12);
  }
  SUBCASE("random atomic instances") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 40; ++trial) {
      const SampledPattern sp = sample_pattern(testing::random_atomic(rng), 1);
      const EnvelopeResult env = build_envelope(sp);
      CHECK(verify_signal_identity(signal(sp), env.density, env.kappa_tilde) <= 1e-9);
    }
  }
}

TEST_CASE("doubling the k-resolution moves l2_sq monotonically") {
  double prev = 0.0;
  for (int m : {250, 500, 1000, 2000}) {
    const SampledPattern sp = sample_pattern(testing::ow_pattern(), m);
    const EnvelopeResult env = build_envelope(sp);
    CHECK(env.l2_sq >= prev - 1e-12);
    prev = env.l2_sq;
  }
}

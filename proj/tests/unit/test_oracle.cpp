#include <doctest.h>

#include <cmath>
#include <random>

#include "liqsched/cost.hpp"
#include "liqsched/oracle.hpp"
#include "liqsched/scheduler.hpp"
#include "support/instances.hpp"

using namespace liqsched;

namespace {

Schedule allocation_schedule(const LiquidityPattern& p, std::span<const double> alloc) {
  Schedule sched;
  double x = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    x += alloc[i];
    sched.times.push_back(p.times()[i]);
    sched.path.push_back(x);
    if (alloc[i] > 0.0) sched.atoms.push_back({p.times()[i], alloc[i]});
  }
  sched.total = x;
  return sched;
}

}  // namespace

TEST_CASE("two-atom cost matrix by hand") {
  const DiscreteCostForm form = cost_matrix(testing::two_atom_pattern());
  REQUIRE(form.n == 2);
  CHECK(form.at(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(form.at(0, 1) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(form.at(1, 0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(form.at(1, 1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(form.c[0] == 0.0);
  CHECK(form.c[1] == 0.0);
}

TEST_CASE("single-node cost matrix is 1/depth") {
  RawPattern raw;
  raw.kind = PatternKind::Atomic;
  raw.times = {0.0};
  raw.depth = {2.0};
  raw.resilience = {1.0};
  raw.horizon = 0.0;
  const DiscreteCostForm form = cost_matrix(LiquidityPattern::validate(raw));
  REQUIRE(form.n == 1);
  CHECK(form.at(0, 0) == 0.5);
}

TEST_CASE("linear term is eta0 over rho") {
  const DiscreteCostForm form = cost_matrix(testing::two_atom_pattern(1.0));
  CHECK(form.c[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(form.c[1] == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("a zero-depth node is rejected") {
  RawPattern raw;
  raw.kind = PatternKind::Atomic;
  raw.times = {0.0, 1.0};
  raw.depth = {1.0, 0.0};
  raw.resilience = {1.0, 1.0};
  raw.horizon = 1.0;
  try {
    cost_matrix(LiquidityPattern::validate(raw));
    FAIL("expected ZeroDepthNode");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroDepthNode);
  }
}

TEST_CASE("the quadratic form reproduces the exact execution cost") {
  std::mt19937_64 rng(97);
  for (int trial = 0; trial < 100; ++trial) {
    const double eta0 = (trial % 2 == 0) ? 0.0 : 0.6;
    const LiquidityPattern p = testing::random_atomic(rng, 6, eta0);
    const DiscreteCostForm form = cost_matrix(p);
    const auto alloc = testing::random_allocation(rng, p.size(), 1.0);
    const double via_form = form.cost(alloc);
    const double via_recursion = execution_cost_value(p, allocation_schedule(p, alloc), eta0);
    CHECK(via_form == doctest::Approx(via_recursion).epsilon(1e-12));
  }
}

TEST_CASE("lattice brute force finds the symmetric two-atom optimum") {
  const DiscreteCostForm form = cost_matrix(testing::two_atom_pattern());
  const LatticeResult result = brute_force(form, 1.0, 1e-3);
  CHECK(result.allocation[0] == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(result.allocation[1] == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(result.cost == doctest::Approx(0.375).epsilon(1e-5));
}

TEST_CASE("single node lattice puts everything there") {
  RawPattern raw;
  raw.kind = PatternKind::Atomic;
  raw.times = {0.0};
  raw.depth = {2.0};
  raw.resilience = {1.0};
  raw.horizon = 0.0;
  const LatticeResult result = brute_force(cost_matrix(LiquidityPattern::validate(raw)), 1.0, 0.01);
  CHECK(result.allocation[0] == 1.0);
  CHECK(result.cost == doctest::Approx(0.25));
}

TEST_CASE("zero resilience concentrates the lattice minimum at the argmax of depth") {
  RawPattern raw;
  raw.kind = PatternKind::Atomic;
  raw.times = {0.0, 1.0, 2.0};
  raw.depth = {1.0, 3.0, 2.0};
  raw.resilience = {0.0, 0.0, 0.0};
  raw.horizon = 2.0;
  const LatticeResult result =
      brute_force(cost_matrix(LiquidityPattern::validate(raw)), 1.0, 1e-3);
  CHECK(result.allocation[1] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("lattice partitioning across jobs is deterministic") {
  std::mt19937_64 rng(101);
  const LiquidityPattern p = testing::random_atomic(rng, 4, 0.5);
  const DiscreteCostForm form = cost_matrix(p);
  const LatticeResult a = brute_force(form, 1.0, 1.0 / 120.0, 1);
  const LatticeResult b = brute_force(form, 1.0, 1.0 / 120.0, 4);
  CHECK(a.cost == b.cost);
  CHECK(a.allocation == b.allocation);
}

TEST_CASE("projected gradient matches the brute force on the two-atom form") {
  const DiscreteCostForm form = cost_matrix(testing::two_atom_pattern());
  const ProjectedGradientResult result = projected_gradient(form, 1.0);
  CHECK(result.allocation[0] == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(result.allocation[1] == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("diagonal form splits volume proportionally to depth") {
  DiscreteCostForm form;
  form.n = 3;
  const std::vector<double> depth = {1.0, 2.0, 5.0};
  form.g.assign(9, 0.0);
  for (std::size_t i = 0; i < 3; ++i) form.g[i * 3 + i] = 1.0 / depth[i];
  form.c.assign(3, 0.0);
  form.kappa = depth;
  const ProjectedGradientResult result = projected_gradient(form, 1.0);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(result.allocation[i] == doctest::Approx(depth[i] / 8.0).epsilon(1e-6));
  }
}

TEST_CASE("a warm start at the optimum terminates immediately") {
  const DiscreteCostForm form = cost_matrix(testing::two_atom_pattern());
  const std::vector<double> warm = {0.5, 0.5};
  const ProjectedGradientResult result = projected_gradient(form, 1.0, warm);
  CHECK(result.iterations == 0);
  CHECK(result.allocation == warm);
}

TEST_CASE("OW closed form at the desk parameters") {
  const Schedule sched = ow_closed_form(1.0, 1.0, 2.0, 1.0, 0.0);
  CHECK(sched.multiplier == doctest::Approx(0.5).epsilon(1e-14));
  REQUIRE(sched.atoms.size() == 2);
  CHECK(sched.atoms[0].t == 0.0);
  CHECK(sched.atoms[0].size == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(sched.atoms[1].t == 2.0);
  CHECK(sched.atoms[1].size == doctest::Approx(0.25).epsilon(1e-14));
  REQUIRE(sched.rates.size() == 1);
  CHECK(sched.rates[0].rate() == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(execution_cost_value(testing::ow_pattern(), sched, 0.0) ==
        doctest::Approx(0.25).epsilon(1e-2));
}

TEST_CASE("OW closed form totals the target exactly") {
  std::mt19937_64 rng(103);
  std::uniform_real_distribution<double> pos(0.2, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double x = pos(rng);
    const double eta0 = (trial % 2 == 0) ? 0.0 : 0.4 * pos(rng);
    const Schedule sched = ow_closed_form(pos(rng), pos(rng), pos(rng), x, eta0);
    CHECK(sched.total == doctest::Approx(x).epsilon(1e-9));
  }
}

TEST_CASE("OW closed form delays the start when eta0 dominates") {
  // With y < 2 eta0 the interior trading starts at log(2 eta0 / y) / r0.
  const double eta0 = 1.0;
  const Schedule sched = ow_closed_form(1.0, 1.0, 2.0, 1.0, eta0);
  const double y = sched.multiplier;
  REQUIRE(y < 2.0 * eta0);
  REQUIRE(!sched.rates.empty());
  CHECK(sched.rates[0].t_begin == doctest::Approx(std::log(2.0 * eta0 / y)).epsilon(1e-9));
  // no initial block in this regime
  for (const auto& atom : sched.atoms) CHECK(atom.t > 0.0);
}

TEST_CASE("invalid OW parameters are rejected") {
  CHECK_THROWS_AS(ow_closed_form(0.0, 1.0, 1.0, 1.0, 0.0), Error);
  CHECK_THROWS_AS(ow_closed_form(1.0, 0.0, 1.0, 1.0, 0.0), Error);
  CHECK_THROWS_AS(ow_closed_form(1.0, 1.0, -1.0, 1.0, 0.0), Error);
}

TEST_CASE("convexity: the two-atom form is positive definite") {
  const ConvexityReport report = convexity_check(cost_matrix(testing::two_atom_pattern()));
  CHECK(report.psd == PsdClass::PositiveDefinite);
  CHECK(report.kappa_strictly_decreasing);
  CHECK(report.is_psd());
}

TEST_CASE("convexity: rising kappa makes the form indefinite") {
  // depth rising faster than rho^2 between the nodes
  RawPattern raw;
  raw.kind = PatternKind::Atomic;
  raw.times = {0.0, 1.0};
  raw.depth = {1.0, 8.0};
  raw.resilience = {std::log(2.0), std::log(2.0)};
  raw.horizon = 1.0;
  const ConvexityReport report = convexity_check(cost_matrix(LiquidityPattern::validate(raw)));
  CHECK(report.psd == PsdClass::Indefinite);
  CHECK(!report.kappa_nonincreasing);
}

TEST_CASE("convexity: a single node is always positive definite") {
  RawPattern raw;
  raw.kind = PatternKind::Atomic;
  raw.times = {0.0};
  raw.depth = {2.0};
  raw.resilience = {1.0};
  raw.horizon = 0.0;
  const ConvexityReport report = convexity_check(cost_matrix(LiquidityPattern::validate(raw)));
  CHECK(report.psd == PsdClass::PositiveDefinite);
}

TEST_CASE("convexity equivalence: PSD iff kappa nonincreasing, on random instances") {
  std::mt19937_64 rng(107);
  int checked = 0;
  while (checked < 200) {
    const LiquidityPattern p = testing::random_atomic(rng, 6, 0.0);
    if (p.size() < 2) continue;
    const DiscreteCostForm form = cost_matrix(p);
    bool tie = false;
    for (std::size_t i = 0; i + 1 < form.kappa.size(); ++i) {
      tie |= std::abs(form.kappa[i + 1] - form.kappa[i]) <= 1e-9 * form.kappa[i];
    }
    if (tie) continue;
    const ConvexityReport report = convexity_check(form);
    CHECK(report.is_psd() == report.kappa_nonincreasing);
    CHECK(report.kappa_nonincreasing == report.kappa_strictly_decreasing);  // no ties
    ++checked;
  }
}

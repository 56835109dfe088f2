#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "liqsched/pattern.hpp"
#include "liqsched/scheduler.hpp"

namespace liqsched {

/// Exact quadratic form of the execution cost for block trades at the grid
/// nodes of an atomic pattern: cost(d) = c'd + 1/2 d'Gd with
///   G_ij = rho_min(i,j) / (delta_min(i,j) * rho_max(i,j)),  c_i = eta0 / rho_i,
/// where min/max refer to the node index. G is symmetric with diagonal
/// 1/delta_i, and it is positive semidefinite exactly when kappa is
/// nonincreasing over the nodes.
struct DiscreteCostForm {
  std::size_t n = 0;
  std::vector<double> g;  // row-major n x n
  std::vector<double> c;
  std::vector<double> kappa;  // kappa at the nodes, kept for the convexity check

  double at(std::size_t i, std::size_t j) const { return g[i * n + j]; }
  double cost(std::span<const double> allocation) const;
};

DiscreteCostForm cost_matrix(const LiquidityPattern& pattern);

/// Cost form on arbitrary (lambda, kappa) curves with trades measured in
/// lambda-volume; used to compare the convexified functional against the
/// original one on the same simplex.
DiscreteCostForm form_from_curves(std::span<const double> lambda, std::span<const double> kappa,
                                  double eta0);

struct LatticeResult {
  std::vector<double> allocation;
  double cost = 0.0;
  double error_bound = 0.0;  // certified distance to the true simplex minimum
};

/// Exhaustive minimum over the simplex lattice {d >= 0, sum d = x} with step
/// h per coordinate. The certified bound covers rounding any feasible point
/// to the lattice: (|c| + |G| x) h sqrt(n) + 1/2 |G| n h^2 with the Frobenius
/// norm bounding the spectral one.
LatticeResult brute_force(const DiscreteCostForm& form, double x, double resolution,
                          int jobs = 1);

double lattice_error_bound(const DiscreteCostForm& form, double x, double resolution);

struct ProjectedGradientResult {
  std::vector<double> allocation;
  double cost = 0.0;
  int iterations = 0;
};

/// Minimizes the form over the simplex by projected gradient descent with
/// step 1 / |G| (power-iteration estimate), stopping when the fixed-point
/// residual falls below 1e-8. Converges to the unique minimum when kappa is
/// strictly decreasing (G positive definite).
ProjectedGradientResult projected_gradient(const DiscreteCostForm& form, double x,
                                           std::span<const double> warm_start = {});

/// Projection onto {d >= 0, sum d = x}.
std::vector<double> project_simplex(std::span<const double> point, double x);

/// Closed-form optimal schedule for constant depth and resilience over a
/// finite horizon: blocks at 0 and T with a constant rate in between, the
/// start delayed while the initial mark-up dominates the frontier.
Schedule ow_closed_form(double delta0, double r0, double horizon, double x, double eta0);

enum class PsdClass { PositiveDefinite, PositiveSemidefiniteSingular, Indefinite };

struct ConvexityReport {
  PsdClass psd = PsdClass::Indefinite;
  bool kappa_nonincreasing = false;
  bool kappa_strictly_decreasing = false;
  bool is_psd() const { return psd != PsdClass::Indefinite; }
};

/// Symmetric-factorization check of G against a direct scan of kappa; the two
/// agree apart from strictness at exact kappa ties.
ConvexityReport convexity_check(const DiscreteCostForm& form);

}  // namespace liqsched

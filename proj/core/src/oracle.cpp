#include "liqsched/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include <Eigen/Dense>

#include "liqsched/errors.hpp"

namespace liqsched {

double DiscreteCostForm::cost(std::span<const double> allocation) const {
  if (allocation.size() != n) raise(ErrorCode::InvalidParams, "allocation size mismatch");
  double linear = 0.0;
  double quad = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    linear += c[i] * allocation[i];
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += at(i, j) * allocation[j];
    quad += allocation[i] * row;
  }
  return linear + 0.5 * quad;
}

DiscreteCostForm cost_matrix(const LiquidityPattern& pattern) {
  if (pattern.kind() != PatternKind::Atomic) {
    raise(ErrorCode::InvalidParams, "cost matrix requires an atomic pattern");
  }
  const std::size_t n = pattern.size();
  DiscreteCostForm form;
  form.n = n;
  form.g.assign(n * n, 0.0);
  form.c.assign(n, 0.0);
  form.kappa.assign(n, 0.0);
  std::vector<double> rho(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (pattern.depth()[i] <= 0.0) {
      raise(ErrorCode::ZeroDepthNode, "cost matrix requires positive depth at every node");
    }
    rho[i] = pattern.rho(pattern.times()[i]);
    form.c[i] = pattern.eta0() / rho[i];
    form.kappa[i] = pattern.depth()[i] / (rho[i] * rho[i]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t lo = std::min(i, j);
      const std::size_t hi = std::max(i, j);
      form.g[i * n + j] = rho[lo] / (pattern.depth()[lo] * rho[hi]);
    }
  }
  return form;
}

DiscreteCostForm form_from_curves(std::span<const double> lambda, std::span<const double> kappa,
                                  double eta0) {
  if (lambda.size() != kappa.size()) {
    raise(ErrorCode::InvalidParams, "lambda and kappa must be aligned");
  }
  const std::size_t n = lambda.size();
  DiscreteCostForm form;
  form.n = n;
  form.g.assign(n * n, 0.0);
  form.c.assign(n, 0.0);
  form.kappa.assign(kappa.begin(), kappa.end());
  for (std::size_t i = 0; i < n; ++i) {
    if (lambda[i] <= 0.0) raise(ErrorCode::ZeroDepthNode, "curve form requires positive lambda");
    form.c[i] = eta0 * kappa[i] / lambda[i];
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t hi = std::max(i, j);
      form.g[i * n + j] = kappa[hi] / (lambda[i] * lambda[j]);
    }
  }
  return form;
}

namespace {

double frobenius_norm(const DiscreteCostForm& form) {
  double s = 0.0;
  for (double v : form.g) s += v * v;
  return std::sqrt(s);
}

double euclidean_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Enumerates compositions of `steps` lattice units over coordinates
// [depth, n), carrying the partial linear+quadratic cost; the last coordinate
// absorbs the remainder.
struct LatticeWorker {
  const DiscreteCostForm& form;
  double h;
  std::vector<long long> counts;
  std::vector<double> q;  // q[j] = sum_i G_ij * d_i over fixed coordinates
  double partial = 0.0;
  double best_cost = std::numeric_limits<double>::infinity();
  std::vector<long long> best_counts;

  explicit LatticeWorker(const DiscreteCostForm& f, double step)
      : form(f), h(step), counts(f.n, 0), q(f.n, 0.0), best_counts(f.n, 0) {}

  void assign(std::size_t depth, long long k) {
    const double d = static_cast<double>(k) * h;
    counts[depth] = k;
    partial += form.c[depth] * d + q[depth] * d + 0.5 * form.at(depth, depth) * d * d;
    for (std::size_t j = depth + 1; j < form.n; ++j) q[j] += form.at(depth, j) * d;
  }

  void unassign(std::size_t depth) {
    const double d = static_cast<double>(counts[depth]) * h;
    for (std::size_t j = depth + 1; j < form.n; ++j) q[j] -= form.at(depth, j) * d;
    partial -= form.c[depth] * d + q[depth] * d + 0.5 * form.at(depth, depth) * d * d;
    counts[depth] = 0;
  }

  void recurse(std::size_t depth, long long remaining) {
    if (depth + 1 == form.n) {
      assign(depth, remaining);
      if (partial < best_cost ||
          (partial == best_cost && counts < best_counts)) {
        best_cost = partial;
        best_counts = counts;
      }
      unassign(depth);
      return;
    }
    for (long long k = 0; k <= remaining; ++k) {
      assign(depth, k);
      recurse(depth + 1, remaining - k);
      unassign(depth);
    }
  }
};

double compositions_count(std::size_t n, long long steps) {
  // C(steps + n - 1, n - 1) in floating point, for the size guard only.
  double count = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    count *= static_cast<double>(steps + static_cast<long long>(i)) / static_cast<double>(i);
  }
  return count;
}

}  // namespace

double lattice_error_bound(const DiscreteCostForm& form, double x, double resolution) {
  const double gnorm = frobenius_norm(form);
  const double cnorm = euclidean_norm(form.c);
  const double rn = std::sqrt(static_cast<double>(form.n));
  return (cnorm + gnorm * x) * resolution * rn +
         0.5 * gnorm * static_cast<double>(form.n) * resolution * resolution;
}

LatticeResult brute_force(const DiscreteCostForm& form, double x, double resolution, int jobs) {
  if (form.n == 0) raise(ErrorCode::InvalidParams, "empty form");
  if (form.n > 6) raise(ErrorCode::TooLarge, "lattice search supports at most 6 nodes");
  if (!(x > 0.0) || !(resolution > 0.0)) {
    raise(ErrorCode::InvalidParams, "need positive target and resolution");
  }
  const long long steps = std::llround(x / resolution);
  if (steps < 1) raise(ErrorCode::InvalidParams, "resolution coarser than the target");
  if (compositions_count(form.n, steps) > 5e7) {
    raise(ErrorCode::TooLarge, "lattice too fine; coarsen the resolution");
  }
  const double h = x / static_cast<double>(steps);

  jobs = std::max(1, jobs);
  const int workers = static_cast<int>(std::min<long long>(jobs, steps + 1));

  std::vector<LatticeWorker> results;
  results.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) results.emplace_back(form, h);

  auto run_worker = [&](int w) {
    LatticeWorker& worker = results[static_cast<std::size_t>(w)];
    if (form.n == 1) {
      if (w == 0) worker.recurse(0, steps);
      return;
    }
    for (long long k0 = w; k0 <= steps; k0 += workers) {
      worker.assign(0, k0);
      worker.recurse(1, steps - k0);
      worker.unassign(0);
    }
  };

  if (workers == 1) {
    run_worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(run_worker, w);
    for (auto& th : pool) th.join();
  }

  const LatticeWorker* best = &results.front();
  for (const auto& worker : results) {
    if (worker.best_cost < best->best_cost ||
        (worker.best_cost == best->best_cost && worker.best_counts < best->best_counts)) {
      best = &worker;
    }
  }

  LatticeResult out;
  out.allocation.resize(form.n);
  for (std::size_t i = 0; i < form.n; ++i) {
    out.allocation[i] = static_cast<double>(best->best_counts[i]) * h;
  }
  out.cost = form.cost(out.allocation);
  out.error_bound = lattice_error_bound(form, x, h);
  return out;
}

std::vector<double> project_simplex(std::span<const double> point, double x) {
  // Euclidean projection onto {d >= 0, sum d = x} via the sorted threshold.
  const std::size_t n = point.size();
  std::vector<double> sorted(point.begin(), point.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    cumulative += sorted[i];
    const double candidate = (cumulative - x) / static_cast<double>(i + 1);
    if (candidate < sorted[i]) theta = candidate;
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = std::max(point[i] - theta, 0.0);
  return out;
}

ProjectedGradientResult projected_gradient(const DiscreteCostForm& form, double x,
                                           std::span<const double> warm_start) {
  if (form.n == 0) raise(ErrorCode::InvalidParams, "empty form");
  if (form.n > 500) raise(ErrorCode::TooLarge, "projected gradient supports at most 500 nodes");
  if (!(x > 0.0)) raise(ErrorCode::InvalidParams, "need a positive target");
  const std::size_t n = form.n;

  Eigen::Map<const Eigen::MatrixXd> G(form.g.data(), static_cast<Eigen::Index>(n),
                                      static_cast<Eigen::Index>(n));
  Eigen::Map<const Eigen::VectorXd> c(form.c.data(), static_cast<Eigen::Index>(n));

  // Spectral norm by power iteration on the symmetric G.
  Eigen::VectorXd v = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n)).normalized();
  double norm = 1.0;
  for (int it = 0; it < 100; ++it) {
    Eigen::VectorXd w = G * v;
    const double mag = w.norm();
    if (mag <= 0.0) break;
    norm = mag;
    v = w / mag;
  }
  const double step = 1.0 / std::max(norm, 1e-300);

  Eigen::VectorXd d(static_cast<Eigen::Index>(n));
  if (!warm_start.empty()) {
    if (warm_start.size() != n) raise(ErrorCode::InvalidParams, "warm start size mismatch");
    for (std::size_t i = 0; i < n; ++i) d[static_cast<Eigen::Index>(i)] = warm_start[i];
  } else {
    d.setConstant(x / static_cast<double>(n));
  }

  constexpr double kTolerance = 1e-8;
  constexpr int kMaxIterations = 100000;
  std::vector<double> scratch(n);
  for (int it = 0; it <= kMaxIterations; ++it) {
    Eigen::VectorXd grad = c + G * d;
    for (std::size_t i = 0; i < n; ++i) {
      scratch[i] = d[static_cast<Eigen::Index>(i)] - grad[static_cast<Eigen::Index>(i)];
    }
    const std::vector<double> proposal = project_simplex(scratch, x);
    double residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      residual = std::max(residual, std::abs(d[static_cast<Eigen::Index>(i)] - proposal[i]));
    }
    if (residual <= kTolerance) {
      ProjectedGradientResult out;
      out.allocation.assign(d.data(), d.data() + n);
      out.cost = form.cost(out.allocation);
      out.iterations = it;
      return out;
    }
    for (std::size_t i = 0; i < n; ++i) {
      scratch[i] = d[static_cast<Eigen::Index>(i)] - step * grad[static_cast<Eigen::Index>(i)];
    }
    const std::vector<double> next = project_simplex(scratch, x);
    for (std::size_t i = 0; i < n; ++i) d[static_cast<Eigen::Index>(i)] = next[i];
  }
  raise(ErrorCode::NoConvergence, "projected gradient exhausted its iteration budget");
}

Schedule ow_closed_form(double delta0, double r0, double horizon, double x, double eta0) {
  if (!(delta0 > 0.0) || !(r0 > 0.0) || !(horizon >= 0.0) || !(x > 0.0) || eta0 < 0.0 ||
      !std::isfinite(delta0) || !std::isfinite(r0) || !std::isfinite(horizon) ||
      !std::isfinite(x) || !std::isfinite(eta0)) {
    raise(ErrorCode::InvalidParams, "need delta0 > 0, r0 > 0, finite horizon, x > 0, eta0 >= 0");
  }

  const auto start_delay = [&](double y) {
    // Trading starts once y/2 * exp(r0 t) clears eta0.
    if (y >= 2.0 * eta0) return 0.0;
    return std::min(std::log(2.0 * eta0 / y) / r0, horizon);
  };
  const auto initial_block = [&](double y) { return delta0 * std::max(0.5 * y - eta0, 0.0); };
  const auto interior_volume = [&](double y) {
    return 0.5 * y * delta0 * r0 * std::max(horizon - start_delay(y), 0.0);
  };
  const auto terminal_block = [&](double y) {
    const double frontier_before = std::max(0.5 * y, eta0 * std::exp(-r0 * horizon));
    return delta0 * std::max(y - frontier_before, 0.0);
  };
  const auto total = [&](double y) {
    return initial_block(y) + interior_volume(y) + terminal_block(y);
  };

  double y = 0.0;
  if (eta0 == 0.0) {
    y = x / (delta0 * (1.0 + 0.5 * r0 * horizon));
  } else {
    double hi = x / (delta0 * (1.0 + 0.5 * r0 * horizon)) + 2.0 * eta0;
    int guard = 0;
    while (total(hi) < x) {
      hi *= 2.0;
      if (++guard > 200) raise(ErrorCode::NoConvergence, "could not bracket the multiplier");
    }
    double lo = 0.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double tot = total(mid);
      if (std::abs(tot - x) <= 1e-12 * x) {
        y = mid;
        break;
      }
      (tot < x ? lo : hi) = mid;
      y = mid;
    }
  }

  Schedule sched;
  sched.multiplier = y;
  const double tau = start_delay(y);
  const double first = initial_block(y);
  const double interior = interior_volume(y);
  const double last = terminal_block(y);
  if (first > 0.0) sched.atoms.push_back({0.0, first});
  if (interior > 0.0) sched.rates.push_back({tau, horizon, interior});
  if (last > 0.0) sched.atoms.push_back({horizon, last});
  sched.total = first + interior + last;

  // Reporting path on a modest uniform grid.
  const int grid = horizon > 0.0 ? 512 : 0;
  sched.times.resize(static_cast<std::size_t>(grid) + 1);
  sched.path.resize(sched.times.size());
  std::vector<double> frontier_vals(sched.times.size());
  for (int i = 0; i <= grid; ++i) {
    const double t = grid > 0 ? horizon * static_cast<double>(i) / grid : 0.0;
    double value = first;
    value += 0.5 * y * delta0 * r0 * std::max(std::min(t, horizon) - tau, 0.0);
    if (i == grid) value += last;
    sched.times[static_cast<std::size_t>(i)] = t;
    sched.path[static_cast<std::size_t>(i)] = value;
    const double hat = (i == grid) ? y * std::exp(r0 * horizon) : 0.5 * y * std::exp(r0 * t);
    frontier_vals[static_cast<std::size_t>(i)] = std::max(hat, eta0);
  }
  sched.frontier = MonotoneStepCurve(sched.times, std::move(frontier_vals),
                                     Continuity::RightContinuous, Direction::Increasing);
  return sched;
}

ConvexityReport convexity_check(const DiscreteCostForm& form) {
  ConvexityReport report;
  report.kappa_nonincreasing = true;
  report.kappa_strictly_decreasing = form.n > 0;
  for (std::size_t i = 0; i + 1 < form.kappa.size(); ++i) {
    if (form.kappa[i + 1] > form.kappa[i]) report.kappa_nonincreasing = false;
    if (!(form.kappa[i + 1] < form.kappa[i])) report.kappa_strictly_decreasing = false;
  }

  Eigen::Map<const Eigen::MatrixXd> G(form.g.data(), static_cast<Eigen::Index>(form.n),
                                      static_cast<Eigen::Index>(form.n));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(G);
  const double scale = std::max(1.0, solver.eigenvalues().cwiseAbs().maxCoeff());
  const double tol = 1e-12 * scale;
  const double min_eig = solver.eigenvalues().minCoeff();
  if (min_eig > tol) {
    report.psd = PsdClass::PositiveDefinite;
  } else if (min_eig >= -tol) {
    report.psd = PsdClass::PositiveSemidefiniteSingular;
  } else {
    report.psd = PsdClass::Indefinite;
  }
  return report;
}

}  // namespace liqsched

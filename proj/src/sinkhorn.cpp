#include "rwot/sinkhorn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rwot {

namespace {

// log-sum-exp of v[0..k), stable against the augmented cost's zero rows.
double lse(const std::vector<double>& v) {
  double mx = -std::numeric_limits<double>::infinity();
  for (double x : v) mx = std::max(mx, x);
  if (!std::isfinite(mx)) return mx;
  double s = 0.0;
  for (double x : v) s += std::exp(x - mx);
  return mx + std::log(s);
}

}  // namespace

TransportSolution solve_robust_entropic(const RobustProblem& problem,
                                        const SinkhornConfig& config,
                                        std::vector<double>* dual_trace) {
  if (problem.eps_mu != problem.eps_nu)
    throw InvalidRadius("solve_robust_entropic needs a symmetric radius");
  const double eps = problem.eps_mu;
  if (!(eps >= 0.0 && eps < 1.0)) throw InvalidRadius("radius must lie in [0,1)");
  if (!(config.reg > 0.0) || !(config.tol > 0.0))
    throw BadInput("sinkhorn needs reg > 0 and tol > 0");
  if (std::abs(problem.mu.mass() - problem.nu.mass()) > 1e-9)
    throw MassMismatch("solve_robust_entropic requires equal masses");

  const std::size_t n0 = problem.mu.size(), m0 = problem.nu.size();
  const bool dummy = eps > 0.0;
  const std::size_t n = n0 + (dummy ? 1 : 0), m = m0 + (dummy ? 1 : 0);
  const double lambda = config.reg;

  // Augmented cost: zero dummy row/column, dummy-dummy entry A = 1 + max c.
  std::vector<double> C(n * m, 0.0);
  double max_c = 0.0;
  for (std::size_t i = 0; i < n0; ++i)
    for (std::size_t j = 0; j < m0; ++j) {
      C[i * m + j] = problem.cost(problem.mu.point(i), problem.nu.point(j));
      max_c = std::max(max_c, C[i * m + j]);
    }
  if (dummy) C[n0 * m + m0] = 1.0 + max_c;

  std::vector<double> a(n), b(m);
  for (std::size_t i = 0; i < n0; ++i) a[i] = problem.mu.weight(i);
  for (std::size_t j = 0; j < m0; ++j) b[j] = problem.nu.weight(j);
  if (dummy) a[n0] = b[m0] = eps;

  std::vector<double> f(n, 0.0), g(m, 0.0), scratch(std::max(n, m));
  std::vector<double> plan(n * m);
  double violation = std::numeric_limits<double>::infinity();
  bool converged = false;

  auto dual_value = [&]() {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * f[i];
    for (std::size_t j = 0; j < m; ++j) s += b[j] * g[j];
    double mass = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j)
        mass += std::exp((f[i] + g[j] - C[i * m + j]) / lambda);
    return s - lambda * mass;
  };

  for (int t = 0; t < config.max_iters; ++t) {
    // Row update: makes row marginals exact.
    scratch.resize(m);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) scratch[j] = (g[j] - C[i * m + j]) / lambda;
      f[i] = lambda * (std::log(a[i]) - lse(scratch));
    }
    // Column update.
    scratch.resize(n);
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t i = 0; i < n; ++i) scratch[i] = (f[i] - C[i * m + j]) / lambda;
      g[j] = lambda * (std::log(b[j]) - lse(scratch));
    }
    if (dual_trace) dual_trace->push_back(dual_value());

    // After the column update the columns are exact; measure row violation.
    violation = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < m; ++j) row += std::exp((f[i] + g[j] - C[i * m + j]) / lambda);
      violation += std::abs(row - a[i]);
    }
    if (violation <= config.tol) {
      converged = true;
      break;
    }
  }

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j)
      plan[i * m + j] = std::exp((f[i] + g[j] - C[i * m + j]) / lambda);

  // Rounding: scale rows down to a, columns down to b, then spread the
  // remaining deficit as the rank-one correction err_r * err_c^T / ||err_r||.
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < m; ++j) row += plan[i * m + j];
    const double sc = row > 0.0 ? std::min(1.0, a[i] / row) : 0.0;
    for (std::size_t j = 0; j < m; ++j) plan[i * m + j] *= sc;
  }
  for (std::size_t j = 0; j < m; ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < n; ++i) col += plan[i * m + j];
    const double sc = col > 0.0 ? std::min(1.0, b[j] / col) : 0.0;
    for (std::size_t i = 0; i < n; ++i) plan[i * m + j] *= sc;
  }
  std::vector<double> err_r(n), err_c(m);
  double deficit = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < m; ++j) row += plan[i * m + j];
    err_r[i] = a[i] - row;
    deficit += err_r[i];
  }
  for (std::size_t j = 0; j < m; ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < n; ++i) col += plan[i * m + j];
    err_c[j] = b[j] - col;
  }
  if (deficit > 1e-300) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j)
        plan[i * m + j] += err_r[i] * err_c[j] / deficit;
  }

  TransportSolution sol;
  sol.approximate = true;
  double vp = 0.0;
  for (std::size_t i = 0; i < n0; ++i)
    for (std::size_t j = 0; j < m0; ++j) {
      if (plan[i * m + j] > 0.0) {
        sol.plan.push_back({i, j, plan[i * m + j]});
        vp += plan[i * m + j] * C[i * m + j];
      }
    }
  if (dummy) vp += plan[n0 * m + m0] * C[n0 * m + m0];
  sol.value_p = vp;
  sol.value = problem.cost.p == 1.0 ? vp : std::pow(vp, 1.0 / problem.cost.p);

  if (dummy) {
    std::vector<Point> pts;
    std::vector<double> w;
    for (std::size_t i = 0; i < n0; ++i)
      if (plan[i * m + m0] > 0.0) {
        pts.push_back(problem.mu.point(i));
        w.push_back(plan[i * m + m0]);
      }
    if (!pts.empty()) sol.removed_mu = DiscreteMeasure(std::move(pts), std::move(w));
    pts.clear();
    w.clear();
    for (std::size_t j = 0; j < m0; ++j)
      if (plan[n0 * m + j] > 0.0) {
        pts.push_back(problem.nu.point(j));
        w.push_back(plan[n0 * m + j]);
      }
    if (!pts.empty()) sol.removed_nu = DiscreteMeasure(std::move(pts), std::move(w));
  }

  if (!converged)
    throw NotConverged("sinkhorn hit the iteration limit", sol.value, violation);
  return sol;
}

}  // namespace rwot

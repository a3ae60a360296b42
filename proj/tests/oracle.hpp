// Independent reference solvers used only by the tests: a dense two-phase
// primal simplex (Bland's rule, so it terminates) over explicit LP models of
// the removal formulations, plus a brute-force permutation matcher. These
// share no code with the library's network simplex.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "rwot/measure.hpp"

namespace oracle {

// min c.x  s.t.  A x = b, x >= 0. Throws on infeasibility; assumes bounded.
inline double lp_solve(std::vector<std::vector<double>> A, std::vector<double> b,
                       std::vector<double> c) {
  const std::size_t m = A.size(), n = c.size();
  for (std::size_t i = 0; i < m; ++i)
    if (b[i] < 0.0) {
      for (double& v : A[i]) v = -v;
      b[i] = -b[i];
    }

  // Tableau: n structural + m artificial columns + rhs.
  const std::size_t cols = n + m + 1;
  std::vector<std::vector<double>> T(m, std::vector<double>(cols, 0.0));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) T[i][j] = A[i][j];
    T[i][n + i] = 1.0;
    T[i][cols - 1] = b[i];
    basis[i] = n + i;
  }

  auto run_phase = [&](const std::vector<double>& cost, std::size_t usable) {
    // Reduced-cost row priced out against the current basis.
    std::vector<double> z(cols, 0.0);
    for (std::size_t j = 0; j < cost.size(); ++j) z[j] = cost[j];
    for (std::size_t i = 0; i < m; ++i) {
      const double cb = basis[i] < cost.size() ? cost[basis[i]] : 0.0;
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j < cols; ++j) z[j] -= cb * T[i][j];
    }
    for (int iter = 0; iter < 100000; ++iter) {
      std::size_t enter = usable;
      for (std::size_t j = 0; j < usable; ++j)
        if (z[j] < -1e-9) {
          enter = j;  // Bland: smallest eligible index
          break;
        }
      if (enter == usable) return -z[cols - 1];
      std::size_t leave = m;
      double best = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        if (T[i][enter] <= 1e-11) continue;
        const double ratio = T[i][cols - 1] / T[i][enter];
        if (leave == m || ratio < best - 1e-12 ||
            (ratio < best + 1e-12 && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == m) throw std::runtime_error("oracle LP unbounded");
      const double piv = T[leave][enter];
      for (double& v : T[leave]) v /= piv;
      for (std::size_t i = 0; i < m; ++i)
        if (i != leave && std::abs(T[i][enter]) > 1e-14) {
          const double f = T[i][enter];
          for (std::size_t j = 0; j < cols; ++j) T[i][j] -= f * T[leave][j];
        }
      const double f = z[enter];
      if (std::abs(f) > 1e-14)
        for (std::size_t j = 0; j < cols; ++j) z[j] -= f * T[leave][j];
      basis[leave] = enter;
    }
    throw std::runtime_error("oracle LP iteration limit");
  };

  std::vector<double> phase1(n + m, 0.0);
  for (std::size_t j = n; j < n + m; ++j) phase1[j] = 1.0;
  if (run_phase(phase1, n + m) > 1e-7) throw std::runtime_error("oracle LP infeasible");

  // Drive leftover zero-level artificials out of the basis; otherwise a
  // phase-2 pivot can push one positive and "solve" an infeasible system.
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] < n) continue;
    std::size_t enter = n;
    for (std::size_t j = 0; j < n; ++j)
      if (std::abs(T[i][j]) > 1e-9) {
        enter = j;
        break;
      }
    if (enter == n) continue;  // redundant row: all-zero structural part
    const double piv = T[i][enter];
    for (double& v : T[i]) v /= piv;
    for (std::size_t r = 0; r < m; ++r)
      if (r != i && std::abs(T[r][enter]) > 1e-14) {
        const double f = T[r][enter];
        for (std::size_t j = 0; j < cols; ++j) T[r][j] -= f * T[i][j];
      }
    basis[i] = enter;
  }

  std::vector<double> phase2(c);
  return run_phase(phase2, n);  // artificial columns barred from entering
}

// W_p^{eps}(mu, nu)^p via the explicit removal LP: couple sub-measures of
// mass 1-eps each. Variables: pi (n*m), r (n), s (m).
inline double robust_value_p(const rwot::DiscreteMeasure& mu,
                             const rwot::DiscreteMeasure& nu, const rwot::GroundCost& cost,
                             double eps) {
  const std::size_t n = mu.size(), m = nu.size();
  const std::size_t nv = n * m + n + m;
  std::vector<std::vector<double>> A;
  std::vector<double> b, c(nv, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) c[i * m + j] = cost(mu.point(i), nu.point(j));

  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row(nv, 0.0);
    for (std::size_t j = 0; j < m; ++j) row[i * m + j] = 1.0;
    row[n * m + i] = 1.0;
    A.push_back(row);
    b.push_back(mu.weight(i));
  }
  for (std::size_t j = 0; j < m; ++j) {
    std::vector<double> row(nv, 0.0);
    for (std::size_t i = 0; i < n; ++i) row[i * m + j] = 1.0;
    row[n * m + n + j] = 1.0;
    A.push_back(row);
    b.push_back(nu.weight(j));
  }
  std::vector<double> rrow(nv, 0.0), srow(nv, 0.0);
  for (std::size_t i = 0; i < n; ++i) rrow[n * m + i] = 1.0;
  for (std::size_t j = 0; j < m; ++j) srow[n * m + n + j] = 1.0;
  A.push_back(rrow);
  b.push_back(eps);
  A.push_back(srow);
  b.push_back(eps);
  return lp_solve(std::move(A), std::move(b), std::move(c));
}

// One-sided W_p^eps(mu_tilde || nu)^p: remove eps from mu_tilde only, couple
// the remainder with (1-eps) nu.
inline double one_sided_value_p(const rwot::DiscreteMeasure& mu,
                                const rwot::DiscreteMeasure& nu,
                                const rwot::GroundCost& cost, double eps) {
  const std::size_t n = mu.size(), m = nu.size();
  const std::size_t nv = n * m + n;
  std::vector<std::vector<double>> A;
  std::vector<double> b, c(nv, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) c[i * m + j] = cost(mu.point(i), nu.point(j));
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row(nv, 0.0);
    for (std::size_t j = 0; j < m; ++j) row[i * m + j] = 1.0;
    row[n * m + i] = 1.0;
    A.push_back(row);
    b.push_back(mu.weight(i));
  }
  for (std::size_t j = 0; j < m; ++j) {
    std::vector<double> row(nv, 0.0);
    for (std::size_t i = 0; i < n; ++i) row[i * m + j] = 1.0;
    A.push_back(row);
    b.push_back((1.0 - eps) * nu.weight(j));
  }
  std::vector<double> rrow(nv, 0.0);
  for (std::size_t i = 0; i < n; ++i) rrow[n * m + i] = 1.0;
  A.push_back(rrow);
  b.push_back(eps);
  return lp_solve(std::move(A), std::move(b), std::move(c));
}

// Asymmetric W_p^{e1,e2}(mu,nu)^p: couple (1-e2)*mu' with (1-e1)*nu' where
// mu' <= mu has mass 1-e1 and nu' <= nu has mass 1-e2. Variables: pi (n*m),
// a = mu' (n), u slack for a <= mu (n), bvar = nu' (m), v slack (m).
inline double asymmetric_value_p(const rwot::DiscreteMeasure& mu,
                                 const rwot::DiscreteMeasure& nu,
                                 const rwot::GroundCost& cost, double e1, double e2) {
  const std::size_t n = mu.size(), m = nu.size();
  const std::size_t off_a = n * m, off_u = off_a + n, off_b = off_u + n,
                    off_v = off_b + m, nv = off_v + m;
  std::vector<std::vector<double>> A;
  std::vector<double> b, c(nv, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) c[i * m + j] = cost(mu.point(i), nu.point(j));

  for (std::size_t i = 0; i < n; ++i) {  // sum_j pi_ij = (1-e2) a_i
    std::vector<double> row(nv, 0.0);
    for (std::size_t j = 0; j < m; ++j) row[i * m + j] = 1.0;
    row[off_a + i] = -(1.0 - e2);
    A.push_back(row);
    b.push_back(0.0);
  }
  for (std::size_t j = 0; j < m; ++j) {  // sum_i pi_ij = (1-e1) b_j
    std::vector<double> row(nv, 0.0);
    for (std::size_t i = 0; i < n; ++i) row[i * m + j] = 1.0;
    row[off_b + j] = -(1.0 - e1);
    A.push_back(row);
    b.push_back(0.0);
  }
  for (std::size_t i = 0; i < n; ++i) {  // a_i + u_i = mu_i
    std::vector<double> row(nv, 0.0);
    row[off_a + i] = 1.0;
    row[off_u + i] = 1.0;
    A.push_back(row);
    b.push_back(mu.weight(i));
  }
  for (std::size_t j = 0; j < m; ++j) {  // b_j + v_j = nu_j
    std::vector<double> row(nv, 0.0);
    row[off_b + j] = 1.0;
    row[off_v + j] = 1.0;
    A.push_back(row);
    b.push_back(nu.weight(j));
  }
  {
    std::vector<double> row(nv, 0.0);  // sum a = 1 - e1
    for (std::size_t i = 0; i < n; ++i) row[off_a + i] = 1.0;
    A.push_back(row);
    b.push_back(1.0 - e1);
  }
  {
    std::vector<double> row(nv, 0.0);  // sum b = 1 - e2
    for (std::size_t j = 0; j < m; ++j) row[off_b + j] = 1.0;
    A.push_back(row);
    b.push_back(1.0 - e2);
  }
  return lp_solve(std::move(A), std::move(b), std::move(c));
}

// Exact W_p^p between uniform measures on n distinct points each, by
// enumerating all n! assignments (n <= 9).
inline double permutation_value_p(const std::vector<rwot::Point>& xs,
                                  const std::vector<rwot::Point>& ys,
                                  const rwot::GroundCost& cost) {
  const std::size_t n = xs.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += cost(xs[i], ys[perm[i]]);
    best = std::min(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best / static_cast<double>(n);
}

// Random probability measure on n points in [-1,1]^d with weights bounded
// away from zero.
inline rwot::DiscreteMeasure random_measure(std::mt19937_64& rng, std::size_t n,
                                            std::size_t d) {
  std::uniform_real_distribution<double> coord(-1.0, 1.0), wt(0.1, 1.0);
  std::vector<rwot::Point> pts(n, rwot::Point(d));
  std::vector<double> ws(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < d; ++k) pts[i][k] = coord(rng);
    ws[i] = wt(rng);
    total += ws[i];
  }
  for (double& w : ws) w /= total;
  return rwot::DiscreteMeasure(std::move(pts), std::move(ws));
}

}  // namespace oracle

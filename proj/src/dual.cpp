#include "rwot/dual.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>

namespace rwot {

std::vector<Point> union_support(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  std::vector<Point> support(mu.points());
  std::map<Point, bool> seen;
  for (const auto& x : support) seen[x] = true;
  for (std::size_t j = 0; j < nu.size(); ++j)
    if (!seen.count(nu.point(j))) {
      seen[nu.point(j)] = true;
      support.push_back(nu.point(j));
    }
  return support;
}

std::vector<double> c_transform(const std::vector<double>& phi,
                                const std::vector<Point>& from_support,
                                const std::vector<Point>& to_support,
                                const GroundCost& cost) {
  if (phi.size() != from_support.size())
    throw BadInput("c_transform: phi/support length mismatch");
  std::vector<double> out(to_support.size());
  for (std::size_t j = 0; j < to_support.size(); ++j) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < from_support.size(); ++i)
      best = std::min(best, cost(from_support[i], to_support[j]) - phi[i]);
    out[j] = best;
  }
  return out;
}

namespace {

void check_symmetric(const RobustProblem& problem) {
  if (problem.eps_mu != problem.eps_nu)
    throw InvalidRadius("dual objective needs a symmetric radius");
}

double objective_from_parts(const std::vector<double>& phi,
                            const std::vector<double>& phi_c,
                            const RobustProblem& problem) {
  double s = 0.0;
  for (std::size_t i = 0; i < problem.mu.size(); ++i)
    s += problem.mu.weight(i) * phi[i];
  for (std::size_t j = 0; j < problem.nu.size(); ++j)
    s += problem.nu.weight(j) * phi_c[j];
  const auto [lo, hi] = std::minmax_element(phi.begin(), phi.end());
  return s - problem.eps_mu * (*hi - *lo);
}

}  // namespace

double dual_objective(const std::vector<double>& phi, const RobustProblem& problem) {
  check_symmetric(problem);
  const auto support = union_support(problem.mu, problem.nu);
  if (phi.size() != support.size())
    throw BadInput("dual_objective: phi must live on the union support");
  const auto phi_c = c_transform(phi, support, problem.nu.points(), problem.cost);
  return objective_from_parts(phi, phi_c, problem);
}

double dual_objective(const DualPotential& pot, const RobustProblem& problem) {
  return dual_objective(pot.phi, problem);
}

DualPotential make_potential(std::vector<double> phi, const RobustProblem& problem) {
  check_symmetric(problem);
  DualPotential pot;
  pot.support = union_support(problem.mu, problem.nu);
  if (phi.size() != pot.support.size())
    throw BadInput("make_potential: phi must live on the union support");
  pot.phi = std::move(phi);
  pot.phi_c = c_transform(pot.phi, pot.support, problem.nu.points(), problem.cost);
  pot.eps = problem.eps_mu;
  pot.objective = objective_from_parts(pot.phi, pot.phi_c, problem);
  return pot;
}

DualPotential dual_ascent(const RobustProblem& problem, const DualAscentConfig& config) {
  check_symmetric(problem);
  const double eps = problem.eps_mu;
  if (!(eps >= 0.0 && eps < 1.0)) throw InvalidRadius("radius must lie in [0,1)");
  const auto support = union_support(problem.mu, problem.nu);
  const std::size_t s = support.size();
  const std::size_t n = problem.mu.size(), m = problem.nu.size();

  // Precompute the union-support-to-nu cost table used every iteration.
  std::vector<double> cost_sn(s * m);
  double max_c = 0.0;
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      cost_sn[i * m + j] = problem.cost(support[i], problem.nu.point(j));
      max_c = std::max(max_c, cost_sn[i * m + j]);
    }
  const double step0 = config.step0 > 0.0 ? config.step0 : std::max(max_c, 1.0) / 10.0;

  std::vector<double> mu_w(s, 0.0);
  for (std::size_t i = 0; i < n; ++i) mu_w[i] = problem.mu.weight(i);

  auto evaluate = [&](const std::vector<double>& phi, std::vector<std::size_t>* argmins) {
    double val = 0.0;
    for (std::size_t i = 0; i < n; ++i) val += problem.mu.weight(i) * phi[i];
    for (std::size_t j = 0; j < m; ++j) {
      double best = std::numeric_limits<double>::infinity();
      std::size_t best_i = 0;
      for (std::size_t i = 0; i < s; ++i) {
        const double v = cost_sn[i * m + j] - phi[i];
        if (v < best) {
          best = v;
          best_i = i;
        }
      }
      val += problem.nu.weight(j) * best;
      if (argmins) (*argmins)[j] = best_i;
    }
    const auto [lo, hi] = std::minmax_element(phi.begin(), phi.end());
    return val - eps * (*hi - *lo);
  };

  auto project = [&](const std::vector<double>& phi) {
    // phi <- (phi^c)^c over the union support.
    const auto pc = c_transform(phi, support, support, problem.cost);
    std::vector<double> out(s);
    for (std::size_t i = 0; i < s; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < s; ++j)
        best = std::min(best, problem.cost(support[i], support[j]) - pc[j]);
      out[i] = best;
    }
    return out;
  };

  std::vector<double> phi(s, 0.0);
  std::vector<std::size_t> argmins(m);
  std::vector<double> grad(s);
  std::vector<double> best_phi = phi;
  double best_obj = -std::numeric_limits<double>::infinity();
  std::mt19937_64 prng(config.seed);

  // Supergradient at the current phi, given the column argmins from the last
  // evaluate(): mu weights, minus the column-min indicators, minus the range
  // penalty distributed uniformly over the tied argmax/argmin sets.
  auto fill_gradient = [&]() {
    grad = mu_w;
    for (std::size_t j = 0; j < m; ++j) grad[argmins[j]] -= problem.nu.weight(j);
    if (eps > 0.0) {
      const auto [lo_it, hi_it] = std::minmax_element(phi.begin(), phi.end());
      const double lo = *lo_it, hi = *hi_it;
      if (hi > lo) {
        std::size_t n_hi = 0, n_lo = 0;
        for (double v : phi) {
          if (v == hi) ++n_hi;
          if (v == lo) ++n_lo;
        }
        for (std::size_t i = 0; i < s; ++i) {
          if (phi[i] == hi) grad[i] -= eps / static_cast<double>(n_hi);
          if (phi[i] == lo) grad[i] += eps / static_cast<double>(n_lo);
        }
      }
    }
  };

  // Exact cyclic coordinate maximization. The objective is concave and
  // piecewise linear in each phi[i] alone, so the per-coordinate maximum sits
  // at a breakpoint: either some c_ij - m_j (where the argmin for column j
  // switches away from i) or the max/min of the other coordinates (where the
  // range penalty kicks in). Walk the sorted breakpoints until the cumulative
  // slope turns non-positive. Randomized order avoids repeating the same
  // stalling cycle between calls.
  std::vector<std::size_t> order(s);
  for (std::size_t i = 0; i < s; ++i) order[i] = i;
  std::vector<std::pair<double, double>> bps;  // (breakpoint, slope drop)
  auto polish = [&](int passes) {
    if (s < 2) return;
    double cur = evaluate(phi, nullptr);
    for (int pass = 0; pass < passes; ++pass) {
      std::shuffle(order.begin(), order.end(), prng);
      for (std::size_t i : order) {
        bps.clear();
        for (std::size_t j = 0; j < m; ++j) {
          double other = std::numeric_limits<double>::infinity();
          for (std::size_t i2 = 0; i2 < s; ++i2)
            if (i2 != i) other = std::min(other, cost_sn[i2 * m + j] - phi[i2]);
          // for phi[i] above this, column j pays c_ij - phi[i] (slope -nu_j)
          bps.emplace_back(cost_sn[i * m + j] - other, problem.nu.weight(j));
        }
        double slope = mu_w[i];
        if (eps > 0.0) {
          double hi = -std::numeric_limits<double>::infinity();
          double lo = std::numeric_limits<double>::infinity();
          for (std::size_t i2 = 0; i2 < s; ++i2)
            if (i2 != i) {
              hi = std::max(hi, phi[i2]);
              lo = std::min(lo, phi[i2]);
            }
          // range contribution to the slope: +eps below lo, 0 inside the
          // band, -eps above hi; each crossing costs eps.
          bps.emplace_back(hi, eps);
          bps.emplace_back(lo, eps);
          slope += eps;
        }
        std::sort(bps.begin(), bps.end());
        double x = std::min(phi[i], bps.front().first);
        for (const auto& [bp, drop] : bps) {
          if (slope <= 0.0) break;
          x = bp;
          slope -= drop;
        }
        phi[i] = x;
      }
      const double next = evaluate(phi, nullptr);
      if (next > best_obj) {
        best_obj = next;
        best_phi = phi;
      }
      if (next <= cur + 1e-13) break;
      cur = next;
    }
  };

  // Level-style subgradient step towards a moving target best + delta; the
  // level halves after `patience` iterations without improvement. Much faster
  // on piecewise-linear objectives than a fixed 1/sqrt(t) schedule.
  auto level_phase = [&](int iters, double delta, int patience, bool explore) {
    int since_improve = 0;
    for (int t = 0; t < iters; ++t) {
      double f = evaluate(phi, &argmins);
      if (!std::isfinite(f)) throw NumericalFailure("dual ascent produced a non-finite objective");
      if (f > best_obj + 1e-12) {
        best_obj = f;
        best_phi = phi;
        since_improve = 0;
      } else if (++since_improve > patience) {
        delta *= 0.5;
        since_improve = 0;
        if (!explore) {  // exploring rounds keep walking from the kicked point
          phi = best_phi;
          f = evaluate(phi, &argmins);
        }
      }
      if (!explore && config.project_every > 0 && t > 0 && t % config.project_every == 0) {
        // c-concave projection candidate, kept when it improves the best.
        std::vector<double> cand = project(phi);
        const double pv = evaluate(cand, nullptr);
        if (pv > best_obj) {
          best_obj = pv;
          best_phi = cand;
          phi = std::move(cand);
          f = evaluate(phi, &argmins);
          since_improve = 0;
        }
      }
      if (t % 200 == 199) {
        polish(5);
        f = evaluate(phi, &argmins);
        if (f > best_obj) {
          best_obj = f;
          best_phi = phi;
          since_improve = 0;
        }
      }
      fill_gradient();
      double g2 = 0.0;
      for (double v : grad) g2 += v * v;
      if (g2 < 1e-18 || delta < 1e-12) break;
      const double step = (best_obj + delta - f) / g2;
      for (std::size_t i = 0; i < s; ++i) phi[i] += step * grad[i];
    }
  };

  best_obj = evaluate(phi, nullptr);
  level_phase(config.iters, step0, 30, false);

  phi = best_phi;
  polish(80);

  // Restart rounds: random kick from the incumbent, a short level phase, and
  // another polish. The kicks knock the iterate off the degenerate corners
  // where coordinate ascent stalls.
  for (int r = 0; r < 40; ++r) {
    phi = best_phi;
    std::normal_distribution<double> kick(0.0, max_c * 0.05 / (r % 8 + 1));
    for (double& x : phi) x += kick(prng);
    level_phase(150, std::max(max_c, 1.0) * 0.02 / (r % 8 + 1), 20, true);
    polish(40);
  }

  // Final step: c-concave projection of the best iterate, so the returned
  // potential satisfies phi = (phi^c)^c.
  std::vector<double> projected = project(best_phi);
  RobustProblem sym(problem.mu, problem.nu, problem.cost, eps, eps);
  return make_potential(std::move(projected), sym);
}

double loss_trimming_objective(const std::vector<double>& phi,
                               const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                               const GroundCost& cost, double eps) {
  const std::size_t n = mu.size();
  if (nu.size() != n) throw Unsupported("loss trimming needs n-point uniform measures");
  for (std::size_t i = 0; i < n; ++i)
    if (std::abs(mu.weight(i) - 1.0 / n) > 1e-9 || std::abs(nu.weight(i) - 1.0 / n) > 1e-9)
      throw Unsupported("loss trimming needs uniform weights 1/n");
  const double k_real = eps * static_cast<double>(n);
  const auto k = static_cast<std::size_t>(std::llround(k_real));
  if (std::abs(k_real - static_cast<double>(k)) > 1e-9)
    throw Unsupported("loss trimming needs integral eps*n");

  const auto support = union_support(mu, nu);
  if (phi.size() != support.size())
    throw BadInput("loss_trimming_objective: phi must live on the union support");
  const auto phi_c = c_transform(phi, support, nu.points(), cost);

  // Drop the top k evaluations of phi (mu side) and of phi^c (nu side).
  std::vector<double> a(phi.begin(), phi.begin() + n), b(phi_c);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double total = 0.0;
  for (std::size_t i = 0; i + k < n; ++i) total += a[i] + b[i];
  return total / static_cast<double>(n);
}

double one_sided_dual_objective(const std::vector<double>& phi,
                                const DiscreteMeasure& mu_tilde, const DiscreteMeasure& nu,
                                const GroundCost& cost, double eps) {
  if (!(eps >= 0.0 && eps < 1.0)) throw InvalidRadius("radius must lie in [0,1)");
  const auto support = union_support(mu_tilde, nu);
  if (phi.size() != support.size())
    throw BadInput("one_sided_dual_objective: phi must live on the union support");
  const auto phi_c = c_transform(phi, support, nu.points(), cost);
  double s = 0.0;
  for (std::size_t i = 0; i < mu_tilde.size(); ++i) s += mu_tilde.weight(i) * phi[i];
  for (std::size_t j = 0; j < nu.size(); ++j) s += (1.0 - eps) * nu.weight(j) * phi_c[j];
  return s - eps * *std::max_element(phi.begin(), phi.end());
}

MaximizerReport check_maximizer_structure(const TransportSolution& solution) {
  if (!solution.potentials) throw NoPotentials("solution carries no potentials");
  const DualPotential& pot = *solution.potentials;
  std::map<Point, double> phi_at;
  for (std::size_t i = 0; i < pot.support.size(); ++i) phi_at[pot.support[i]] = pot.phi[i];
  const auto [lo_it, hi_it] = std::minmax_element(pot.phi.begin(), pot.phi.end());
  const double lo = *lo_it, hi = *hi_it;

  MaximizerReport report;
  for (std::size_t i = 0; i < solution.removed_mu.size(); ++i) {
    const auto it = phi_at.find(solution.removed_mu.point(i));
    if (it == phi_at.end()) throw NoPotentials("removed mu atom missing from the support");
    report.mu_gap = std::max(report.mu_gap, hi - it->second);
  }
  for (std::size_t j = 0; j < solution.removed_nu.size(); ++j) {
    const auto it = phi_at.find(solution.removed_nu.point(j));
    if (it == phi_at.end()) throw NoPotentials("removed nu atom missing from the support");
    report.nu_gap = std::max(report.nu_gap, it->second - lo);
  }
  return report;
}

}  // namespace rwot

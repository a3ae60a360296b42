#include "rwot/exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "rwot/dual.hpp"
#include "rwot/flow.hpp"

namespace rwot {

namespace {

// Node weights are scaled to integers at this denominator before the flow
// solve so pivots compare exact integers; values are de-scaled on return.
constexpr double kMassScale = 1e12;

// Ground costs are scaled so the largest magnitude sits near 2^60; the
// quantization error is below double roundoff relative to the cost scale.
constexpr double kCostTarget = 1152921504606846976.0;  // 2^60

long long scale_mass(double w) { return std::llround(w * kMassScale); }

struct RawDuals {
  std::vector<double> phi_bar;  // on supp(left)
  std::vector<double> psi_bar;  // on supp(right)
};

// Balanced augmented transport:
//   left marginal  = left  + extra_left  * delta(dummy_l)
//   right marginal = right + extra_right * delta(dummy_r)
// Real-dummy arcs cost 0; the dummy-dummy arc costs A = 1 + max c.
TransportSolution augmented_solve_impl(const DiscreteMeasure& left,
                                       const DiscreteMeasure& right,
                                       const GroundCost& cost, double extra_left,
                                       double extra_right, RawDuals* raw_out) {
  if (left.size() == 0 || right.size() == 0)
    throw EmptyInput("transport between empty measures");
  const std::size_t n = left.size(), m = right.size();

  // Dense cost matrix in true double units.
  std::vector<double> c(n * m);
  double max_c = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const double v = cost(left.point(i), right.point(j));
      c[i * m + j] = v;
      max_c = std::max(max_c, v);
    }
  const bool dummy_l = extra_left > 0.0;
  const bool dummy_r = extra_right > 0.0;
  const double big_a = 1.0 + max_c;
  const double cost_scale = kCostTarget / std::max(big_a, 1.0);

  // Integer supplies; the largest right atom absorbs the rounding residual
  // so both sides sum to the same integer total.
  std::vector<long long> bl(n), br(m);
  long long total_l = 0, total_r = 0;
  for (std::size_t i = 0; i < n; ++i) total_l += (bl[i] = scale_mass(left.weight(i)));
  for (std::size_t j = 0; j < m; ++j) total_r += (br[j] = scale_mass(right.weight(j)));
  const long long el = scale_mass(extra_left), er = scale_mass(extra_right);
  const long long diff = (total_l + el) - (total_r + er);
  const std::size_t jmax =
      std::max_element(br.begin(), br.end()) - br.begin();
  br[jmax] += diff;
  if (br[jmax] < 0) throw NumericalFailure("mass rounding produced a negative supply");

  const int num_nodes = static_cast<int>(n + m) + (dummy_l ? 1 : 0) + (dummy_r ? 1 : 0);
  const int dl = static_cast<int>(n + m);
  const int dr = dummy_l ? dl + 1 : dl;
  MinCostFlow mcf(num_nodes);
  for (std::size_t i = 0; i < n; ++i) mcf.set_supply(static_cast<int>(i), bl[i]);
  for (std::size_t j = 0; j < m; ++j) mcf.set_supply(static_cast<int>(n + j), -br[j]);
  if (dummy_l) mcf.set_supply(dl, el);
  if (dummy_r) mcf.set_supply(dr, -er);

  std::vector<int> real_arcs(n * m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j)
      real_arcs[i * m + j] = mcf.add_arc(static_cast<int>(i), static_cast<int>(n + j),
                                         std::llround(c[i * m + j] * cost_scale));
  std::vector<int> to_dummy(n, -1), from_dummy(m, -1);
  if (dummy_r)
    for (std::size_t i = 0; i < n; ++i)
      to_dummy[i] = mcf.add_arc(static_cast<int>(i), dr, 0);
  if (dummy_l)
    for (std::size_t j = 0; j < m; ++j)
      from_dummy[j] = mcf.add_arc(dl, static_cast<int>(n + j), 0);
  int dd = -1;
  if (dummy_l && dummy_r) dd = mcf.add_arc(dl, dr, std::llround(big_a * cost_scale));

  mcf.run();

  TransportSolution sol;
  double vp = 0.0, comp = 0.0;  // Kahan-summed cost of the returned plan
  auto accumulate = [&](double term) {
    const double y = term - comp;
    const double t = vp + y;
    comp = (t - vp) - y;
    vp = t;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const long long f = mcf.flow(real_arcs[i * m + j]);
      if (f > 0) {
        const double mass = static_cast<double>(f) / kMassScale;
        sol.plan.push_back({i, j, mass});
        accumulate(mass * c[i * m + j]);
      }
    }
  if (dd >= 0 && mcf.flow(dd) > 0)
    accumulate(static_cast<double>(mcf.flow(dd)) / kMassScale * big_a);
  sol.value_p = vp;
  sol.value = cost.p == 1.0 ? vp : std::pow(vp, 1.0 / cost.p);

  if (dummy_r) {
    std::vector<Point> pts;
    std::vector<double> w;
    for (std::size_t i = 0; i < n; ++i) {
      const long long f = mcf.flow(to_dummy[i]);
      if (f > 0) {
        pts.push_back(left.point(i));
        w.push_back(static_cast<double>(f) / kMassScale);
      }
    }
    if (!pts.empty()) sol.removed_mu = DiscreteMeasure(std::move(pts), std::move(w));
  }
  if (dummy_l) {
    std::vector<Point> pts;
    std::vector<double> w;
    for (std::size_t j = 0; j < m; ++j) {
      const long long f = mcf.flow(from_dummy[j]);
      if (f > 0) {
        pts.push_back(right.point(j));
        w.push_back(static_cast<double>(f) / kMassScale);
      }
    }
    if (!pts.empty()) sol.removed_nu = DiscreteMeasure(std::move(pts), std::move(w));
  }

  if (raw_out) {
    raw_out->phi_bar.resize(n);
    raw_out->psi_bar.resize(m);
    // Gauge: make the dummy potential zero (phi and psi shift oppositely).
    double shift = 0.0;
    if (dummy_l)
      shift = -static_cast<double>(mcf.potential(dl)) / cost_scale;
    else if (dummy_r)
      shift = static_cast<double>(mcf.potential(dr)) / cost_scale;
    for (std::size_t i = 0; i < n; ++i)
      raw_out->phi_bar[i] = static_cast<double>(mcf.potential(static_cast<int>(i))) / cost_scale + shift;
    for (std::size_t j = 0; j < m; ++j)
      raw_out->psi_bar[j] =
          -static_cast<double>(mcf.potential(static_cast<int>(n + j))) / cost_scale - shift;
  }
  return sol;
}

// Extends the LP duals to a potential on the union support: phi_bar on
// supp(left), and psi_bar^c on the right-only points.
std::vector<double> harvest_phi(const DiscreteMeasure& left, const DiscreteMeasure& right,
                                const GroundCost& cost, const RawDuals& raw) {
  const auto support = union_support(left, right);
  std::vector<double> phi(support.size());
  for (std::size_t i = 0; i < left.size(); ++i) phi[i] = raw.phi_bar[i];
  for (std::size_t s = left.size(); s < support.size(); ++s) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < right.size(); ++j)
      best = std::min(best, cost(support[s], right.point(j)) - raw.psi_bar[j]);
    phi[s] = best;
  }
  return phi;
}

void check_radius(double eps) {
  if (!(eps >= 0.0 && eps < 1.0)) throw InvalidRadius("radius must lie in [0,1)");
}

}  // namespace

TransportSolution augmented_solve(const DiscreteMeasure& left, const DiscreteMeasure& right,
                                  const GroundCost& cost, double extra_left,
                                  double extra_right, bool want_potentials) {
  RawDuals raw;
  TransportSolution sol = augmented_solve_impl(left, right, cost, extra_left, extra_right,
                                               want_potentials ? &raw : nullptr);
  if (want_potentials && extra_left == extra_right) {
    RobustProblem prob(left, right, cost, extra_left, extra_right);
    sol.potentials = make_potential(harvest_phi(left, right, cost, raw), prob);
  }
  return sol;
}

TransportSolution solve_standard(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                 const GroundCost& cost) {
  if (std::abs(mu.mass() - nu.mass()) > 1e-9)
    throw MassMismatch("solve_standard requires equal masses");
  return augmented_solve(mu, nu, cost, 0.0, 0.0, true);
}

TransportSolution solve_robust(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                               const GroundCost& cost, double eps) {
  check_radius(eps);
  if (std::abs(mu.mass() - nu.mass()) > 1e-9)
    throw MassMismatch("solve_robust requires equal masses");
  return augmented_solve(mu, nu, cost, eps, eps, true);
}

TransportSolution solve_robust(const RobustProblem& problem) {
  if (problem.eps_mu != problem.eps_nu)
    throw InvalidRadius("solve_robust needs symmetric radii (use solve_asymmetric)");
  return solve_robust(problem.mu, problem.nu, problem.cost, problem.eps_mu);
}

TransportSolution solve_asymmetric(const RobustProblem& problem) {
  const double e1 = problem.eps_mu, e2 = problem.eps_nu;
  check_radius(e1);
  check_radius(e2);
  if (std::abs(problem.mu.mass() - 1.0) > 1e-9 || std::abs(problem.nu.mass() - 1.0) > 1e-9)
    throw MassMismatch("solve_asymmetric expects probability measures");
  TransportSolution sol =
      augmented_solve_impl(problem.mu.scaled(1.0 - e2), problem.nu.scaled(1.0 - e1),
                           problem.cost, (1.0 - e1) * e2, (1.0 - e2) * e1, nullptr);
  // Removed masses are reported in the original (unscaled) units.
  if (sol.removed_mu.size() > 0 && e2 < 1.0)
    sol.removed_mu = sol.removed_mu.scaled(1.0 / (1.0 - e2));
  if (sol.removed_nu.size() > 0 && e1 < 1.0)
    sol.removed_nu = sol.removed_nu.scaled(1.0 / (1.0 - e1));
  return sol;
}

TransportSolution one_sided(const DiscreteMeasure& mu_tilde, const DiscreteMeasure& nu,
                            const GroundCost& cost, double eps) {
  check_radius(eps);
  if (std::abs(mu_tilde.mass() - nu.mass()) > 1e-9)
    throw MassMismatch("one_sided requires equal masses");
  if (eps == 0.0) return solve_standard(mu_tilde, nu, cost);
  RawDuals raw;
  TransportSolution sol =
      augmented_solve_impl(mu_tilde, nu.scaled(1.0 - eps), cost, 0.0, eps, &raw);
  // One-sided potentials: same union-support extension, one-sided objective.
  std::vector<double> phi = harvest_phi(mu_tilde, nu, cost, raw);
  DualPotential pot;
  pot.support = union_support(mu_tilde, nu);
  pot.phi = phi;
  pot.phi_c = c_transform(phi, pot.support, nu.points(), cost);
  pot.eps = eps;
  pot.objective = one_sided_dual_objective(phi, mu_tilde, nu, cost, eps);
  sol.potentials = std::move(pot);
  return sol;
}

std::pair<double, double> verify_mass_addition(const RobustProblem& problem) {
  if (problem.eps_mu != problem.eps_nu)
    throw InvalidRadius("verify_mass_addition needs symmetric radii");
  const double eps = problem.eps_mu;
  check_radius(eps);
  const double removal = solve_robust(problem).value;

  // Addition LP: mu' >= mu, nu' >= nu with masses 1+eps; the added mass
  // lives on the union support. Modeled as a flow with one extra source
  // (the mu-side additions) and one extra sink (the nu-side additions).
  const auto support = union_support(problem.mu, problem.nu);
  const std::size_t s = support.size();
  std::map<Point, std::size_t> index;
  for (std::size_t i = 0; i < s; ++i) index[support[i]] = i;

  std::vector<long long> bmu(s, 0), bnu(s, 0);
  for (std::size_t i = 0; i < problem.mu.size(); ++i)
    bmu[index[problem.mu.point(i)]] = scale_mass(problem.mu.weight(i));
  for (std::size_t j = 0; j < problem.nu.size(); ++j)
    bnu[index[problem.nu.point(j)]] = scale_mass(problem.nu.weight(j));
  long long total_mu = 0, total_nu = 0;
  for (std::size_t i = 0; i < s; ++i) total_mu += bmu[i], total_nu += bnu[i];
  // Balance the rounded totals on the largest nu atom.
  bnu[std::max_element(bnu.begin(), bnu.end()) - bnu.begin()] += total_mu - total_nu;
  const long long extra = scale_mass(eps);

  std::vector<double> c(s * s);
  double max_c = 0.0;
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < s; ++j) {
      c[i * s + j] = problem.cost(support[i], support[j]);
      max_c = std::max(max_c, c[i * s + j]);
    }
  const double cost_scale = kCostTarget / std::max(1.0 + max_c, 1.0);

  const int src_node = static_cast<int>(2 * s);
  const int snk_node = src_node + 1;
  MinCostFlow mcf(static_cast<int>(2 * s) + 2);
  for (std::size_t i = 0; i < s; ++i) {
    mcf.set_supply(static_cast<int>(i), bmu[i]);
    mcf.set_supply(static_cast<int>(s + i), -bnu[i]);
  }
  mcf.set_supply(src_node, extra);
  mcf.set_supply(snk_node, -extra);
  std::vector<int> arcs(s * s);
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < s; ++j)
      arcs[i * s + j] = mcf.add_arc(static_cast<int>(i), static_cast<int>(s + j),
                                    std::llround(c[i * s + j] * cost_scale));
  for (std::size_t i = 0; i < s; ++i) {
    mcf.add_arc(src_node, static_cast<int>(i), 0);      // addition to mu at atom i
    mcf.add_arc(static_cast<int>(s + i), snk_node, 0);  // addition to nu at atom i
  }
  mcf.run();

  double vp = 0.0;
  for (std::size_t k = 0; k < s * s; ++k) {
    const long long f = mcf.flow(arcs[k]);
    if (f > 0) vp += static_cast<double>(f) / kMassScale * c[k];
  }
  const double addition = problem.cost.p == 1.0 ? vp : std::pow(vp, 1.0 / problem.cost.p);
  return {removal, addition};
}

double forced_diagonal_value_p(const RobustProblem& problem) {
  if (problem.eps_mu != problem.eps_nu)
    throw InvalidRadius("forced_diagonal check needs symmetric radii");
  const double eps = problem.eps_mu;
  check_radius(eps);
  const DiscreteMeasure shared = measure_min(problem.mu, problem.nu);
  if (shared.size() == 0)
    return solve_robust(problem).value_p;
  const double tv = problem.mu.mass() - shared.mass();
  if (eps >= tv - 1e-12) return 0.0;  // everything off-diagonal can be removed
  const DiscreteMeasure mu_res = measure_sub(problem.mu, shared);
  const DiscreteMeasure nu_res = measure_sub(problem.nu, shared);
  // Shared mass rides the diagonal at zero cost; the rest is a partial OT
  // between the residuals with the same removal budget.
  return augmented_solve(mu_res, nu_res, problem.cost, eps, eps, false).value_p;
}

}  // namespace rwot

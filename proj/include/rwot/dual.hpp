#pragma once

#include <cstdint>
#include <vector>

#include "rwot/exact.hpp"
#include "rwot/measure.hpp"
#include "rwot/potential.hpp"

namespace rwot {

// supp(mu) in order, followed by the nu-only points (exact-match dedup).
std::vector<Point> union_support(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

// phi^c(y) = min over x in from_support of c(x,y) - phi(x), per y in to_support.
std::vector<double> c_transform(const std::vector<double>& phi,
                                const std::vector<Point>& from_support,
                                const std::vector<Point>& to_support,
                                const GroundCost& cost);

// Range-form penalized dual objective for the symmetric radius:
//   sum phi dmu + sum phi^c dnu - eps * (max phi - min phi),
// with phi over the union support and the c-transform taken over it too.
// Equals the 2*eps*||phi||_inf form after the centering shift.
double dual_objective(const std::vector<double>& phi, const RobustProblem& problem);
double dual_objective(const DualPotential& pot, const RobustProblem& problem);

// Builds a DualPotential (phi_c + objective filled in) from a raw phi vector
// aligned with union_support(problem.mu, problem.nu).
DualPotential make_potential(std::vector<double> phi, const RobustProblem& problem);

struct DualAscentConfig {
  double step0 = -1.0;    // < 0 means (max cost)/10
  int iters = 2000;
  int project_every = 25;  // c-concave projection cadence
  std::uint64_t seed = 0;
};

// Projected subgradient ascent on the range-form dual; returns the best
// iterate by objective. Requires a symmetric radius eps > 0 (use
// solve_standard's potentials for eps = 0).
DualPotential dual_ascent(const RobustProblem& problem, const DualAscentConfig& config);

// Loss-trimming dual (uniform n-point measures, eps*n integral): drops the
// top eps*n evaluations of phi (against mu) and of phi^c (against nu).
double loss_trimming_objective(const std::vector<double>& phi,
                               const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                               const GroundCost& cost, double eps);

// One-sided dual: sum phi dmu + (1-eps) sum phi^c dnu - eps * max phi.
double one_sided_dual_objective(const std::vector<double>& phi,
                                const DiscreteMeasure& mu_tilde, const DiscreteMeasure& nu,
                                const GroundCost& cost, double eps);

// Support gaps for the removed masses against argmax/argmin of phi; both are
// ~0 for an exact primal-dual pair.
struct MaximizerReport {
  double mu_gap = 0.0;  // max over supp(removed_mu) of (max phi - phi(x))
  double nu_gap = 0.0;  // max over supp(removed_nu) of (phi(y) - min phi)
};
MaximizerReport check_maximizer_structure(const TransportSolution& solution);

}  // namespace rwot

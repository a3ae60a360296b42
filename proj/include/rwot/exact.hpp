#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "rwot/measure.hpp"
#include "rwot/potential.hpp"

namespace rwot {

// A (mu, nu, p, eps_mu, eps_nu) instance. Symmetric radii recover the
// ordinary robust distance.
struct RobustProblem {
  DiscreteMeasure mu;
  DiscreteMeasure nu;
  GroundCost cost;
  double eps_mu = 0.0;
  double eps_nu = 0.0;

  RobustProblem(DiscreteMeasure mu_in, DiscreteMeasure nu_in, GroundCost c,
                double e_mu = 0.0, double e_nu = 0.0)
      : mu(std::move(mu_in)), nu(std::move(nu_in)), cost(c), eps_mu(e_mu), eps_nu(e_nu) {}
};

struct PlanEntry {
  std::size_t i;  // index into supp(mu)
  std::size_t j;  // index into supp(nu)
  double mass;
};

struct TransportSolution {
  double value = 0.0;    // distance, i.e. value_p^(1/p)
  double value_p = 0.0;  // optimal cost before the root
  std::vector<PlanEntry> plan;
  DiscreteMeasure removed_mu;  // mu - mu' (zero measure when nothing removed)
  DiscreteMeasure removed_nu;  // nu - nu'
  std::optional<DualPotential> potentials;
  bool approximate = false;
};

// Classic W_p between equal-mass measures (the eps = 0 case).
TransportSolution solve_standard(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                 const GroundCost& cost);

// Robust W_p^eps via the dummy-point augmentation solved by min-cost flow.
// Requires eps_mu == eps_nu.
TransportSolution solve_robust(const RobustProblem& problem);
TransportSolution solve_robust(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                               const GroundCost& cost, double eps);

// Asymmetric W_p^{e1,e2}(mu,nu) = inf W_p((1-e2)mu', (1-e1)nu') over
// sub-measures of mass 1-e1 and 1-e2 respectively.
TransportSolution solve_asymmetric(const RobustProblem& problem);

// One-sided W_p^eps(mu||nu): removes eps mass from the first argument only,
// matched against (1-eps)nu.
TransportSolution one_sided(const DiscreteMeasure& mu_tilde, const DiscreteMeasure& nu,
                            const GroundCost& cost, double eps);

// Solves the removal formulation and the equivalent mass-addition LP
// (additions restricted to the union support); returns both distances.
std::pair<double, double> verify_mass_addition(const RobustProblem& problem);

// Value of the robust problem with the shared mass mu /\ nu pinned on the
// plan diagonal at zero cost (lower-envelope optimality check). Returns the
// optimal value_p of the restricted problem.
double forced_diagonal_value_p(const RobustProblem& problem);

// General partial-OT kernel used by the solvers above: balanced transport
// between (left + extra_left * delta_dummy) and (right + extra_right *
// delta_dummy) with zero-cost dummy arcs and dummy-dummy cost 1 + max c.
// Exposed for the estimation module's residual solves.
TransportSolution augmented_solve(const DiscreteMeasure& left, const DiscreteMeasure& right,
                                  const GroundCost& cost, double extra_left,
                                  double extra_right, bool want_potentials = true);

}  // namespace rwot

#pragma once

#include <vector>

#include "rwot/exact.hpp"

namespace rwot {

struct SinkhornConfig {
  double reg = 0.01;       // entropic regularization lambda, in cost units
  int max_iters = 200000;
  double tol = 1e-9;       // L1 marginal violation
};

// Entropic fast path for W_p^eps: log-domain Sinkhorn on the augmented
// (n+1)x(m+1) kernel with marginals (mu + eps*delta, nu + eps*delta), then
// marginal rescaling + rank-one residual rounding to an exactly feasible
// plan. The result is flagged `approximate`; its cost upper-bounds the exact
// optimum because the rounded plan is feasible.
// If dual_trace is non-null it receives the Sinkhorn dual objective per
// iteration (monotone non-decreasing under exact block updates).
TransportSolution solve_robust_entropic(const RobustProblem& problem,
                                        const SinkhornConfig& config,
                                        std::vector<double>* dual_trace = nullptr);

}  // namespace rwot

#pragma once

#include <vector>

#include "rwot/measure.hpp"

namespace rwot {

// Kantorovich potential for the penalized dual. phi lives on the *union*
// support supp(mu) ∪ supp(nu): the penalty term is a sup/inf over the whole
// space, and restricting phi to supp(mu) breaks weak duality whenever the
// supports differ. The support list starts with supp(mu) in order, followed
// by the nu-only points.
struct DualPotential {
  std::vector<Point> support;
  std::vector<double> phi;    // aligned with support
  std::vector<double> phi_c;  // c-transform of phi, on supp(nu)
  double eps = 0.0;
  double objective = 0.0;
};

}  // namespace rwot

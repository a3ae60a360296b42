#pragma once

#include <cstdint>
#include <vector>

#include "rwot/exact.hpp"
#include "rwot/measure.hpp"

namespace rwot {

// d x k matrix with orthonormal columns (row-major storage).
struct ProjectionFrame {
  std::size_t d = 0, k = 0;
  std::vector<double> u;  // u[r * k + c]

  double at(std::size_t r, std::size_t c) const { return u[r * k + c]; }
};

struct SlicedEstimate {
  double value = 0.0;
  double std_error = 0.0;  // on value, via the delta method (average mode)
  std::size_t num_projections = 0;
  std::uint64_t seed = 0;
  std::vector<ProjectionFrame> frames;  // max mode: the arg-max frame
};

struct SlicedConfig {
  std::size_t num_projections = 100;  // average mode
  int restarts = 20;                  // max mode
  int steps = 100;
  double step0 = 0.1;
  std::uint64_t seed = 0;
  int threads = 1;  // 0 = auto
};

enum class SlicedMode { Average, Max };

// Haar-distributed k-frame: thin QR of a d x k standard Gaussian matrix with
// R's diagonal signs forced positive.
ProjectionFrame sample_frame(std::size_t d, std::size_t k, std::uint64_t seed);

// Pushforward x -> U^T x; weights untouched, duplicates merged.
DiscreteMeasure project(const DiscreteMeasure& measure, const ProjectionFrame& frame);

// Average-sliced (Monte Carlo over Haar frames) or max-sliced (multi-restart
// projected gradient ascent on the Stiefel manifold) robust distance. eps = 0
// gives the classic SW / MW.
SlicedEstimate sliced_distance(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                               double p, std::size_t k, double eps, SlicedMode mode,
                               const SlicedConfig& config);

// Approximate triangle inequality on identical frame sets, so the inequality
// holds per-frame before aggregation. lhs uses radius eps1+eps2.
struct SlicedTriangleReport {
  double avg_lhs = 0.0, avg_rhs = 0.0;  // SW form: lhs <= rhs (+tol)
  double max_lhs = 0.0, max_rhs = 0.0;  // max over the shared frame set
};
SlicedTriangleReport sliced_triangle_check(const DiscreteMeasure& mu,
                                           const DiscreteMeasure& kappa,
                                           const DiscreteMeasure& nu, double p,
                                           std::size_t k, double eps1, double eps2,
                                           const SlicedConfig& config);

}  // namespace rwot

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rwot/measure.hpp"

namespace rwot {

// Outlier source for contamination: either an explicit measure or a
// "far box" generator drawing uniformly from [lo, hi]^d.
struct OutlierSource {
  std::optional<DiscreteMeasure> measure;
  double box_lo = 100.0;
  double box_hi = 101.0;

  static OutlierSource from_measure(DiscreteMeasure m) {
    OutlierSource s;
    s.measure = std::move(m);
    return s;
  }
  static OutlierSource far_box(double lo, double hi) {
    OutlierSource s;
    s.box_lo = lo;
    s.box_hi = hi;
    return s;
  }
};

struct ContaminationSpec {
  enum class Model { Huber, StrongReplacement };
  Model model = Model::Huber;
  double eps = 0.0;
  OutlierSource outlier_source;
  std::uint64_t seed = 0;
};

// Applies the contamination model; output TV distance to the input is <= eps.
// Deterministic given the seed.
DiscreteMeasure contaminate(const DiscreteMeasure& mu_hat, const ContaminationSpec& spec);

// Named sampling families. gaussian and bounded-qth-moment fill only `mu`;
// two-point-fixture fills both members of the pair.
struct FamilySample {
  DiscreteMeasure mu;
  std::optional<DiscreteMeasure> nu;
};

struct FamilyParams {
  double sigma = 1.0;
  double q = 2.0;    // moment order for bounded-qth-moment / fixture
  double eps = 0.1;  // fixture contamination level
  std::size_t d = 1;
};

FamilySample sample_family(const std::string& name, const FamilyParams& params,
                           std::size_t n, std::uint64_t seed);

// Lower-bound fixture: (delta_x, (1-eps) delta_x + eps delta_y) with the
// second atom at distance sigma * eps^{-1/q} from x (along the first axis).
std::pair<DiscreteMeasure, DiscreteMeasure> two_point_fixture(double x, double eps,
                                                              double sigma, double q);

// Raw i.i.d. draws, exposed for tests that need the sample list itself.
std::vector<Point> draw_gaussian(double sigma, std::size_t d, std::size_t n,
                                 std::uint64_t seed);

}  // namespace rwot

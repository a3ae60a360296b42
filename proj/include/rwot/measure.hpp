#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "rwot/errors.hpp"

namespace rwot {

using Point = std::vector<double>;

// Weighted point cloud in R^d. Duplicate points are merged at construction
// (exact coordinate equality) so supports stay minimal and TV computations
// are exact.
class DiscreteMeasure {
public:
  DiscreteMeasure() = default;
  DiscreteMeasure(std::vector<Point> points, std::vector<double> weights);

  const std::vector<Point>& points() const { return points_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t size() const { return points_.size(); }
  std::size_t dim() const { return points_.empty() ? 0 : points_[0].size(); }
  double mass() const { return mass_; }
  bool is_probability() const;

  const Point& point(std::size_t i) const { return points_[i]; }
  double weight(std::size_t i) const { return weights_[i]; }

  // Scaled copy: same support, weights multiplied by a >= 0.
  DiscreteMeasure scaled(double a) const;

private:
  std::vector<Point> points_;
  std::vector<double> weights_;
  double mass_ = 0.0;
};

// Ground cost c(x,y) = d(x,y)^p. The Euclidean metric is the only one
// exposed to users; the product max-metric exists for the independence test
// on product spaces (d((x,y),(x',y')) = max(d(x,x'), d(y,y'))).
struct GroundCost {
  enum class Metric { Euclidean, ProductMax };

  double p = 1.0;
  Metric metric = Metric::Euclidean;
  std::size_t split = 0;  // first-component dimension for ProductMax

  explicit GroundCost(double exponent = 1.0) : p(exponent) {}
  static GroundCost euclidean(double p) { return GroundCost(p); }
  static GroundCost product_max(double p, std::size_t split_dim) {
    GroundCost c(p);
    c.metric = Metric::ProductMax;
    c.split = split_dim;
    return c;
  }

  double distance(const Point& x, const Point& y) const;
  double operator()(const Point& x, const Point& y) const;  // distance^p
};

// Empirical measure (1/n) sum of Diracs; merges duplicates.
DiscreteMeasure empirical(const std::vector<Point>& samples);

// Half total-variation distance between equal-mass measures over the union
// support. Throws MassMismatch beyond 1e-9.
double tv_distance(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

// Pointwise minimum mu /\ nu over the shared support (may be a zero measure).
DiscreteMeasure measure_min(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

// Difference mu - kappa for kappa <= mu pointwise; drops zero atoms.
DiscreteMeasure measure_sub(const DiscreteMeasure& mu, const DiscreteMeasure& kappa);

// Weighted union of two measures (a*mu + b*nu), duplicates merged.
DiscreteMeasure measure_mix(const DiscreteMeasure& mu, double a,
                            const DiscreteMeasure& nu, double b);

// --- File IO -------------------------------------------------------------
// JSON: {"points": [[f64,...],...], "weights": [f64,...]}
// CSV: one row per atom, columns w,x1,...,xd. Both readers reject NaN/Inf.
DiscreteMeasure read_measure_json(const std::string& path);
DiscreteMeasure read_measure_csv(const std::string& path);
DiscreteMeasure read_measure_auto(const std::string& path);  // by extension
void write_measure_json(const DiscreteMeasure& m, const std::string& path);

// 17-significant-digit formatting used everywhere numbers are serialized.
std::string format_double(double v);

}  // namespace rwot

#include "rwot/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace rwot {

std::vector<Point> draw_gaussian(double sigma, std::size_t d, std::size_t n,
                                 std::uint64_t seed) {
  if (sigma <= 0.0) throw BadInput("sigma must be positive");
  if (d == 0 || n == 0) throw EmptyInput("need d >= 1 and n >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, sigma);
  std::vector<Point> out(n, Point(d));
  for (auto& x : out)
    for (auto& v : x) v = gauss(rng);
  return out;
}

namespace {

// Heavy-tailed family with finite q-th moment of scale ~sigma: uniform sphere
// direction scaled by R = sigma * U^{-1/(2q)}, so E R^q = 2 sigma^q.
std::vector<Point> draw_bounded_qth(double sigma, double q, std::size_t d, std::size_t n,
                                    std::uint64_t seed) {
  if (sigma <= 0.0) throw BadInput("sigma must be positive");
  if (q <= 0.0) throw InvalidMomentOrder("q must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<Point> out(n, Point(d));
  for (auto& x : out) {
    double norm2 = 0.0;
    for (auto& v : x) {
      v = gauss(rng);
      norm2 += v * v;
    }
    const double norm = std::sqrt(std::max(norm2, 1e-300));
    double u = unif(rng);
    if (u < 1e-300) u = 1e-300;
    const double r = sigma * std::pow(u, -1.0 / (2.0 * q));
    for (auto& v : x) v *= r / norm;
  }
  return out;
}

Point weighted_mean(const DiscreteMeasure& m) {
  Point mean(m.dim(), 0.0);
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t k = 0; k < m.dim(); ++k)
      mean[k] += m.weight(i) * m.point(i)[k] / m.mass();
  return mean;
}

std::vector<Point> draw_outliers(const OutlierSource& src, std::size_t d, std::size_t n,
                                 std::uint64_t seed) {
  std::vector<Point> out;
  if (src.measure) {
    // Deterministic draws from the given measure by inverse-CDF on atom index.
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const DiscreteMeasure& a = *src.measure;
    for (std::size_t t = 0; t < n; ++t) {
      double u = unif(rng) * a.mass();
      std::size_t i = 0;
      while (i + 1 < a.size() && u > a.weight(i)) u -= a.weight(i), ++i;
      out.push_back(a.point(i));
    }
    return out;
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> box(src.box_lo, src.box_hi);
  for (std::size_t t = 0; t < n; ++t) {
    Point x(d);
    for (auto& v : x) v = box(rng);
    out.push_back(std::move(x));
  }
  return out;
}

}  // namespace

DiscreteMeasure contaminate(const DiscreteMeasure& mu_hat, const ContaminationSpec& spec) {
  if (!mu_hat.is_probability())
    throw BadInput("contaminate expects a probability measure");
  if (spec.eps < 0.0 || spec.eps >= 1.0) throw InvalidRadius("eps must be in [0,1)");
  if (spec.eps == 0.0) return mu_hat;

  if (spec.model == ContaminationSpec::Model::Huber) {
    DiscreteMeasure alpha;
    if (spec.outlier_source.measure) {
      alpha = *spec.outlier_source.measure;
      if (!alpha.is_probability())
        throw BadInput("huber outlier measure must be a probability measure");
    } else {
      // Empirical stand-in for the generator: enough draws to look like alpha.
      const std::size_t k =
          std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(
                                       spec.eps * static_cast<double>(mu_hat.size()))));
      alpha = empirical(draw_outliers(spec.outlier_source, mu_hat.dim(), k, spec.seed));
    }
    return measure_mix(mu_hat, 1.0 - spec.eps, alpha, spec.eps);
  }

  // Strong replacement: the measure must be a uniform empirical measure (all
  // weights integer multiples of mass/n); we replace floor(eps*n) sample
  // units, taking them from the atoms farthest from the weighted mean.
  const double wmin = *std::min_element(mu_hat.weights().begin(), mu_hat.weights().end());
  if (wmin <= 0.0) throw Unsupported("strong replacement needs positive weights");
  const auto n = static_cast<std::size_t>(std::llround(mu_hat.mass() / wmin));
  const double unit = mu_hat.mass() / static_cast<double>(n);
  for (double w : mu_hat.weights()) {
    const double k = w / unit;
    if (std::abs(k - std::round(k)) > 1e-6)
      throw Unsupported("strong replacement needs uniform empirical weights");
  }
  const auto n_replace = static_cast<std::size_t>(std::floor(spec.eps * static_cast<double>(n)));
  if (n_replace == 0) return mu_hat;

  const Point mean = weighted_mean(mu_hat);
  GroundCost d2(1.0);
  std::vector<std::size_t> order(mu_hat.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return d2.distance(mu_hat.point(a), mean) > d2.distance(mu_hat.point(b), mean);
  });

  std::vector<double> w(mu_hat.weights());
  std::size_t left = n_replace;
  for (std::size_t idx : order) {
    if (left == 0) break;
    const auto units = static_cast<std::size_t>(std::llround(w[idx] / unit));
    const std::size_t take = std::min(units, left);
    w[idx] -= unit * static_cast<double>(take);
    left -= take;
  }
  std::vector<Point> pts(mu_hat.points());
  const auto outliers = draw_outliers(spec.outlier_source, mu_hat.dim(), n_replace, spec.seed);
  for (const auto& o : outliers) {
    pts.push_back(o);
    w.push_back(unit);
  }
  // Drop emptied atoms; the DiscreteMeasure constructor merges outlier dups.
  std::vector<Point> pts2;
  std::vector<double> w2;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (w[i] > unit * 1e-12) {
      pts2.push_back(pts[i]);
      w2.push_back(w[i]);
    }
  }
  return DiscreteMeasure(std::move(pts2), std::move(w2));
}

std::pair<DiscreteMeasure, DiscreteMeasure> two_point_fixture(double x, double eps,
                                                              double sigma, double q) {
  if (eps <= 0.0 || eps >= 1.0) throw InvalidRadius("fixture needs eps in (0,1)");
  if (sigma <= 0.0) throw BadInput("sigma must be positive");
  if (q <= 0.0) throw InvalidMomentOrder("q must be positive");
  const double y = x + sigma * std::pow(eps, -1.0 / q);
  DiscreteMeasure mu({{x}}, {1.0});
  DiscreteMeasure nu({{x}, {y}}, {1.0 - eps, eps});
  return {mu, nu};
}

FamilySample sample_family(const std::string& name, const FamilyParams& params,
                           std::size_t n, std::uint64_t seed) {
  FamilySample out;
  if (name == "gaussian") {
    out.mu = empirical(draw_gaussian(params.sigma, params.d, n, seed));
  } else if (name == "bounded-qth-moment") {
    out.mu = empirical(draw_bounded_qth(params.sigma, params.q, params.d, n, seed));
  } else if (name == "two-point-fixture") {
    auto [mu, nu] = two_point_fixture(0.0, params.eps, params.sigma, params.q);
    out.mu = std::move(mu);
    out.nu = std::move(nu);
  } else {
    throw UnknownFamily("no such family: " + name);
  }
  return out;
}

}  // namespace rwot

#include "rwot/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "rwot/parallel.hpp"
#include "rwot/sampling.hpp"

namespace rwot {

CandidateFamily CandidateFamily::from_list(std::vector<DiscreteMeasure> members) {
  CandidateFamily f;
  f.members = std::move(members);
  return f;
}

CandidateFamily CandidateFamily::location_family(const DiscreteMeasure& base,
                                                 const std::vector<Point>& thetas) {
  CandidateFamily f;
  f.members.reserve(thetas.size());
  for (const Point& theta : thetas) {
    if (theta.size() != base.dim())
      throw InvalidDimensions("location_family: shift dimension mismatch");
    std::vector<Point> pts = base.points();
    for (Point& x : pts)
      for (std::size_t k = 0; k < x.size(); ++k) x[k] += theta[k];
    f.members.emplace_back(std::move(pts), base.weights());
  }
  return f;
}

CandidateFamily CandidateFamily::gaussian_grid(const std::vector<double>& sigmas,
                                               const std::vector<Point>& means,
                                               std::size_t n, std::uint64_t seed) {
  CandidateFamily f;
  f.members.reserve(sigmas.size() * means.size());
  std::uint64_t member_id = 0;
  for (double sigma : sigmas)
    for (const Point& mean : means) {
      std::vector<Point> draws =
          draw_gaussian(sigma, mean.size(), n, seed + 0x51ED270B * (++member_id));
      for (Point& x : draws)
        for (std::size_t k = 0; k < x.size(); ++k) x[k] += mean[k];
      f.members.push_back(empirical(draws));
    }
  return f;
}

MdeResult mde(const DiscreteMeasure& mu_tilde, const CandidateFamily& family, double p,
              double eps, const MdeOptions& options) {
  if (family.members.empty()) throw EmptyFamily("mde needs a non-empty family");
  if (!(eps >= 0.0 && eps < 1.0)) throw InvalidRadius("radius must lie in [0,1)");
  if (options.delta < 0.0) throw BadInput("mde needs delta >= 0");

  const GroundCost cost(p);
  std::vector<double> values(family.members.size());
  parallel_for(family.members.size(), options.threads, [&](std::size_t i) {
    values[i] = options.one_sided
                    ? one_sided(mu_tilde, family.members[i], cost, eps).value
                    : solve_robust(mu_tilde, family.members[i], cost, eps).value;
  });

  const double minimum = *std::min_element(values.begin(), values.end());
  std::size_t pick = 0;
  while (values[pick] > minimum + options.delta) ++pick;

  MdeResult res;
  res.index = pick;
  res.member = family.members[pick];
  res.value = values[pick];
  res.minimum = minimum;
  return res;
}

double ResilienceProfile::rho(double eps) const {
  if (eps <= 0.0) return 0.0;
  const double mean_term =
      kMeanResilienceConstant * std::pow(sigma, p) * std::pow(eps, 1.0 - p / q);
  return 2.0 * std::pow(mean_term, 1.0 / p) + 2.0 * std::pow(eps, 1.0 / p) * sigma;
}

double resilience_bound(double sigma, double q, double p, double eps) {
  if (!(q > p) || !(p >= 1.0))
    throw InvalidMomentOrder("resilience_bound needs q > p >= 1");
  if (!(eps >= 0.0 && eps <= 0.99))
    throw InvalidRadius("resilience_bound needs eps in [0, 0.99]");
  ResilienceProfile prof;
  prof.sigma = sigma;
  prof.q = q;
  prof.p = p;
  return prof.rho(eps);
}

DistanceCertificate robust_distance_certificate(const DiscreteMeasure& mu_tilde,
                                                const DiscreteMeasure& nu_tilde, double p,
                                                double eps,
                                                const ResilienceProfile& profile) {
  if (eps >= 1.0 / 3.0)
    throw BeyondBreakdown(
        "no meaningful robust estimation guarantee at contamination >= 1/3");
  if (eps < 0.0) throw InvalidRadius("radius must lie in [0, 1/3)");

  DistanceCertificate cert;
  cert.estimate = solve_robust(mu_tilde, nu_tilde, GroundCost(p), eps).value;
  cert.additive_bound = 2.0 * profile.rho(3.0 * eps);
  cert.multiplicative_bound = 1.0 - std::pow(1.0 - 3.0 * eps, 1.0 / p);
  cert.warnings.push_back(
      "sampling terms W_p(mu, mu_hat_n) and W_p(nu, nu_hat_n) are not computable "
      "from data and are excluded from the bounds");
  return cert;
}

SweepCurve sweep_radius(const DiscreteMeasure& mu_tilde, const DiscreteMeasure& nu_tilde,
                        double p, const std::vector<double>& taus, int threads) {
  if (taus.empty()) throw EmptyInput("sweep_radius needs a non-empty grid");
  for (std::size_t i = 0; i < taus.size(); ++i) {
    if (!(taus[i] >= 0.0 && taus[i] < 1.0))
      throw InvalidRadius("sweep grid must lie in [0,1)");
    if (i > 0 && !(taus[i] > taus[i - 1]))
      throw BadInput("sweep grid must be strictly increasing");
  }

  SweepCurve curve;
  curve.taus = taus;
  curve.values_p.resize(taus.size());
  const GroundCost cost(p);
  parallel_for(taus.size(), threads, [&](std::size_t i) {
    try {
      curve.values_p[i] = solve_robust(mu_tilde, nu_tilde, cost, taus[i]).value_p;
    } catch (const Error& e) {
      throw NumericalFailure("sweep failed at tau=" + format_double(taus[i]) + ": " +
                             e.what());
    }
  });

  curve.slopes.assign(taus.size(), 0.0);
  for (std::size_t i = 0; i + 1 < taus.size(); ++i) {
    if (curve.values_p[i + 1] > curve.values_p[i] + 1e-9)
      throw NumericalFailure("sweep curve not non-increasing at tau=" +
                             format_double(taus[i + 1]));
    curve.slopes[i] = (curve.values_p[i + 1] - curve.values_p[i]) / (taus[i + 1] - taus[i]);
  }
  return curve;
}

ElbowResult detect_elbow(const SweepCurve& curve, std::optional<double> threshold) {
  const std::size_t n = curve.taus.size();
  if (n < 4) throw BadInput("detect_elbow needs at least 4 grid points");

  bool flat = true;
  for (double s : curve.slopes)
    if (std::abs(s) > 1e-12) flat = false;
  if (flat) throw NoElbow("sweep curve is flat");

  ElbowResult res;
  res.second_diffs.assign(n, 0.0);
  std::size_t best = 1;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    res.second_diffs[i] =
        curve.values_p[i + 1] - 2.0 * curve.values_p[i] + curve.values_p[i - 1];
    if (res.second_diffs[i] > res.second_diffs[best]) best = i;
  }
  res.curvature_eps = curve.taus[best];

  if (threshold) {
    for (std::size_t i = 0; i + 1 < n; ++i)
      if (curve.slopes[i] >= *threshold) {
        res.threshold_eps = curve.taus[i];
        break;
      }
    if (!res.threshold_eps) throw NoElbow("no slope clears the supplied threshold");
    res.eps_hat = *res.threshold_eps;
  } else {
    res.eps_hat = res.curvature_eps;
  }
  return res;
}

TestDecision two_sample_test(const DiscreteMeasure& mu_tilde,
                             const DiscreteMeasure& nu_tilde, double p, double eps,
                             double rho) {
  if (rho < 0.0) throw BadInput("two_sample_test needs rho >= 0");
  TestDecision d;
  d.statistic = solve_robust(mu_tilde, nu_tilde, GroundCost(p), eps).value;
  d.threshold = 3.0 * rho;
  d.reject = d.statistic > d.threshold;
  if (eps > 0.25) d.warnings.push_back("guarantee_void");
  return d;
}

TestDecision independence_test(const std::vector<std::pair<Point, Point>>& pairs,
                               double p, double eps, double rho,
                               const IndependenceOptions& options) {
  if (pairs.empty()) throw EmptyInput("independence_test needs at least one pair");
  const std::size_t n = pairs.size();
  const std::size_t dx = pairs[0].first.size(), dy = pairs[0].second.size();
  for (const auto& [x, y] : pairs)
    if (x.size() != dx || y.size() != dy)
      throw InvalidDimensions("independence_test: ragged pair dimensions");

  auto glue = [&](const Point& x, const Point& y) {
    Point z;
    z.reserve(dx + dy);
    z.insert(z.end(), x.begin(), x.end());
    z.insert(z.end(), y.begin(), y.end());
    return z;
  };

  std::vector<Point> joint_pts;
  joint_pts.reserve(n);
  for (const auto& [x, y] : pairs) joint_pts.push_back(glue(x, y));
  const DiscreteMeasure joint = empirical(joint_pts);

  DiscreteMeasure product;
  if (n * n <= options.max_atoms) {
    std::vector<Point> pts;
    pts.reserve(n * n);
    for (const auto& a : pairs)
      for (const auto& b : pairs) pts.push_back(glue(a.first, b.second));
    product = empirical(pts);
  } else if (!options.allow_subsample) {
    throw TooLarge("product of marginals exceeds the atom cap");
  } else {
    std::mt19937_64 rng(options.seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::vector<Point> pts;
    pts.reserve(options.max_atoms);
    for (std::size_t t = 0; t < options.max_atoms; ++t)
      pts.push_back(glue(pairs[pick(rng)].first, pairs[pick(rng)].second));
    product = empirical(pts);
  }

  TestDecision d;
  d.statistic =
      solve_robust(joint, product, GroundCost::product_max(p, dx), eps).value;
  d.threshold = 3.0 * rho;
  d.reject = d.statistic > d.threshold;
  if (eps > 0.25) d.warnings.push_back("guarantee_void");
  if (n * n > options.max_atoms) d.warnings.push_back("product_subsampled");
  return d;
}

namespace fixtures {

namespace {
DiscreteMeasure atoms1d(std::vector<double> xs, std::vector<double> ws) {
  std::vector<Point> pts;
  pts.reserve(xs.size());
  for (double x : xs) pts.push_back({x});
  return DiscreteMeasure(std::move(pts), std::move(ws));
}
}  // namespace

RecoveryFixture exact_recovery_fixture(double eps) {
  if (!(eps >= 0.0 && eps < 1.0)) throw InvalidRadius("radius must lie in [0,1)");
  RecoveryFixture f;
  f.eps = eps;
  f.mu_hat = atoms1d({0.0}, {1.0});
  f.nu_hat = atoms1d({1.0}, {1.0});
  // Outliers at +/-100: all separations (99, 100, 200) exceed diam(S) = 1.
  f.mu_tilde = atoms1d({0.0, 100.0}, {1.0 - eps, eps});
  f.nu_tilde = atoms1d({1.0, -100.0}, {1.0 - eps, eps});
  return f;
}

ElbowFixture elbow_fixture(double eps) {
  if (!(eps > 0.0 && eps < 0.5)) throw InvalidRadius("elbow fixture needs eps in (0, 0.5)");
  ElbowFixture f;
  f.eps = eps;
  f.mu_tilde = atoms1d({0.0, 100.0}, {1.0 - eps, eps});
  f.nu_tilde = atoms1d({1.0, -100.0}, {1.0 - eps, eps});
  f.slope_scale = 99.0;  // min(d(alpha,S), d(beta,S), d(alpha,beta))
  f.diam_s = 1.0;
  return f;
}

BreakdownFixture breakdown_fixture(double eps) {
  if (!(eps > 0.0 && eps < 1.0 / 3.0))
    throw InvalidRadius("breakdown fixture needs eps in (0, 1/3)");
  BreakdownFixture f;
  f.eps = eps;
  const double a = 300.0;
  const double clean = 1.0 - 3.0 * eps;
  f.mu = atoms1d({0.0, a}, {clean, 3.0 * eps});
  f.nu = atoms1d({1.0, -a}, {clean, 3.0 * eps});
  // TV-eps perturbations that shuffle outlier mass across the two far sites;
  // at radius eps the shared far mass cancels and the remainder behaves like
  // the reference pair at radius 3*eps.
  f.mu_tilde = atoms1d({0.0, a, -a}, {clean, 2.0 * eps, eps});
  f.nu_tilde = atoms1d({1.0, a, -a}, {clean, eps, 2.0 * eps});
  return f;
}

}  // namespace fixtures

}  // namespace rwot

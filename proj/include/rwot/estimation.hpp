#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rwot/exact.hpp"
#include "rwot/measure.hpp"

namespace rwot {

// Finite searchable surrogate for a model family: every member is an explicit
// probability measure. Continuous families enter through user-supplied grids.
struct CandidateFamily {
  std::vector<DiscreteMeasure> members;

  static CandidateFamily from_list(std::vector<DiscreteMeasure> members);
  // base shifted by each theta in the grid.
  static CandidateFamily location_family(const DiscreteMeasure& base,
                                         const std::vector<Point>& thetas);
  // Empirical n-sample Gaussians over a sigma x mean grid (fixed seeds, so
  // members are reproducible measures, not distributions).
  static CandidateFamily gaussian_grid(const std::vector<double>& sigmas,
                                       const std::vector<Point>& means, std::size_t n,
                                       std::uint64_t seed);
};

struct MdeOptions {
  double delta = 0.0;    // accept any member within delta of the minimum
  bool one_sided = false;  // use W_p^eps(mu_tilde || member)
  int threads = 1;         // 0 = auto
};

struct MdeResult {
  std::size_t index = 0;  // lowest-index member within delta of the minimum
  DiscreteMeasure member;
  double value = 0.0;  // that member's distance (not the family minimum)
  double minimum = 0.0;
};

// Minimum-distance estimation: exhaustive W_p^eps evaluation over the family.
MdeResult mde(const DiscreteMeasure& mu_tilde, const CandidateFamily& family, double p,
              double eps, const MdeOptions& options = {});

// rho(eps) = 2 (C_q sigma^p eps^{1 - p/q})^{1/p} + 2 eps^{1/p} sigma for the
// class of measures with sigma-bounded q-th moments about the mean. C_q is a
// conservative explicit constant; the sharp one is not available.
inline constexpr double kMeanResilienceConstant = 4.0;

struct ResilienceProfile {
  double sigma = 1.0;
  double q = 2.0;
  double p = 1.0;

  double rho(double eps) const;
};

double resilience_bound(double sigma, double q, double p, double eps);

struct DistanceCertificate {
  double estimate = 0.0;              // W_p^eps(mu_tilde, nu_tilde)
  double additive_bound = 0.0;        // 2 rho(3 eps)
  double multiplicative_bound = 0.0;  // 1 - (1 - 3 eps)^{1/p}
  std::vector<std::string> warnings;  // unobservable sampling terms, etc.
};

// |estimate - W_p(mu, nu)| <= additive + multiplicative * W_p(mu, nu) plus
// sampling terms that cannot be computed from data (reported as warnings).
DistanceCertificate robust_distance_certificate(const DiscreteMeasure& mu_tilde,
                                                const DiscreteMeasure& nu_tilde, double p,
                                                double eps,
                                                const ResilienceProfile& profile);

struct SweepCurve {
  std::vector<double> taus;      // increasing grid in [0, 1)
  std::vector<double> values_p;  // W_p^tau(mu,nu)^p, non-increasing
  std::vector<double> slopes;    // forward differences; last entry 0
};

// One exact solve per grid point; monotonicity is re-checked as a
// postcondition and a violation reports as NumericalFailure.
SweepCurve sweep_radius(const DiscreteMeasure& mu_tilde, const DiscreteMeasure& nu_tilde,
                        double p, const std::vector<double>& taus, int threads = 1);

struct ElbowResult {
  double eps_hat = 0.0;
  double curvature_eps = 0.0;  // grid point maximizing the second difference
  std::optional<double> threshold_eps;  // first tau with slope >= threshold
  std::vector<double> second_diffs;     // aligned with taus (0 at the ends)
};

// Radius selection from the sweep curve's kink. With a threshold (e.g.
// -diam(S)^p when the clean support is known) the first grid point whose
// forward slope clears it wins; otherwise maximum curvature.
ElbowResult detect_elbow(const SweepCurve& curve,
                         std::optional<double> threshold = std::nullopt);

struct TestDecision {
  double statistic = 0.0;
  double threshold = 0.0;
  bool reject = false;
  std::vector<std::string> warnings;
};

// Reject equality iff W_p^eps(mu_tilde, nu_tilde) > 3 rho. The guarantee
// needs eps <= 1/4; above that the decision carries a `guarantee_void` flag.
TestDecision two_sample_test(const DiscreteMeasure& mu_tilde,
                             const DiscreteMeasure& nu_tilde, double p, double eps,
                             double rho);

struct IndependenceOptions {
  std::size_t max_atoms = 40000;  // cap on the product-of-marginals support
  bool allow_subsample = true;    // i.i.d. subsample of the product when over cap
  std::uint64_t seed = 0;
};

// Compares the joint empirical measure of the pairs against the product of
// its marginals under the max-metric on the product space, with the same
// 3-rho threshold rule.
TestDecision independence_test(const std::vector<std::pair<Point, Point>>& pairs,
                               double p, double eps, double rho,
                               const IndependenceOptions& options = {});

// --- Named fixtures used by the self-check suites --------------------------
namespace fixtures {

// Far outliers on both sides; the robust distance at the true radius recovers
// (1-eps)^{1/p} W_p(mu_hat, nu_hat) exactly.
struct RecoveryFixture {
  DiscreteMeasure mu_hat, nu_hat;      // clean parts (delta_0, delta_1)
  DiscreteMeasure mu_tilde, nu_tilde;  // contaminated pair
  double eps = 0.0;
};
RecoveryFixture exact_recovery_fixture(double eps);

// Sweep fixture with a kink at tau = eps. slope_scale is the certified
// magnitude of the left slope: the minimum of the outlier-to-clean and
// outlier-to-outlier separations (per-unit removal can reroute through the
// clean support, so the pairwise maximum is not a valid rate).
struct ElbowFixture {
  DiscreteMeasure mu_tilde, nu_tilde;
  double eps = 0.0;
  double slope_scale = 0.0;  // left slopes are <= -slope_scale^p
  double diam_s = 0.0;       // right slopes are >= -diam_s^p
};
ElbowFixture elbow_fixture(double eps);

// Adversarial pair at radius eps that exactly simulates contamination 3*eps:
// solve_robust(mu_tilde, nu_tilde, eps) == solve_robust(mu, nu, 3*eps).
struct BreakdownFixture {
  DiscreteMeasure mu, nu;              // references, TV-within-eps of the pair
  DiscreteMeasure mu_tilde, nu_tilde;
  double eps = 0.0;
};
BreakdownFixture breakdown_fixture(double eps);

}  // namespace fixtures

}  // namespace rwot

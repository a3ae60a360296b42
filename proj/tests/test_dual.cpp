#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "oracle.hpp"
#include "rwot/dual.hpp"
#include "rwot/exact.hpp"

using namespace rwot;

namespace {
DiscreteMeasure atoms1d(std::vector<double> xs, std::vector<double> ws) {
  std::vector<Point> pts;
  for (double x : xs) pts.push_back({x});
  return DiscreteMeasure(std::move(pts), std::move(ws));
}
}  // namespace

TEST_CASE("c-transform of zero is the column minimum") {
  const auto mu = atoms1d({0.0, 2.0}, {0.5, 0.5});
  const auto nu = atoms1d({1.0}, {1.0});
  const auto supp = union_support(mu, nu);
  const GroundCost cost(1.0);
  const auto phic = c_transform(std::vector<double>(supp.size(), 0.0), supp,
                                nu.points(), cost);
  REQUIRE(phic.size() == 1);
  CHECK(phic[0] == doctest::Approx(0.0));  // nu's own point is in the support
}

TEST_CASE("weak duality over the union support") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const auto mu = oracle::random_measure(rng, 3 + trial % 4, 2);
    const auto nu = oracle::random_measure(rng, 2 + trial % 5, 2);
    const double eps = (trial % 3) * 0.12;
    const RobustProblem prob(mu, nu, GroundCost((trial % 2 == 0) ? 1.0 : 2.0), eps, eps);
    const double primal = solve_robust(prob).value_p;
    const auto supp = union_support(mu, nu);
    std::vector<double> phi(supp.size());
    for (double& v : phi) v = u(rng);
    CHECK(dual_objective(phi, prob) <= primal + 1e-9);
  }
}

TEST_CASE("one-point counterexample for a mu-only potential convention") {
  // phi restricted to supp(mu) alone would report 1 > 0.8 here; the union
  // support version stays a lower bound.
  const auto mu = atoms1d({0.0}, {1.0});
  const auto nu = atoms1d({1.0}, {1.0});
  const RobustProblem prob(mu, nu, GroundCost(1.0), 0.2, 0.2);
  const double primal = solve_robust(prob).value_p;  // 0.8
  CHECK(primal == doctest::Approx(0.8).epsilon(1e-10));
  const auto supp = union_support(mu, nu);
  REQUIRE(supp.size() == 2);
  for (double a : {-1.0, 0.0, 0.5, 1.0})
    for (double b : {-1.0, 0.0, 0.5, 1.0})
      CHECK(dual_objective({a, b}, prob) <= primal + 1e-12);
}

TEST_CASE("harvested potentials close the gap exactly") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const auto mu = oracle::random_measure(rng, 3 + trial % 5, 1 + trial % 3);
    const auto nu = oracle::random_measure(rng, 2 + trial % 6, mu.dim());
    const double eps = (trial % 3) * 0.1 + 0.05;
    const double p = (trial % 3 == 0) ? 1.0 : (trial % 3 == 1) ? 1.5 : 2.0;
    const RobustProblem prob(mu, nu, GroundCost(p), eps, eps);
    const auto sol = solve_robust(prob);
    REQUIRE(sol.potentials.has_value());
    CHECK(sol.potentials->objective == doctest::Approx(sol.value_p).epsilon(1e-9));
    // the stored objective is the real dual objective of the stored phi
    CHECK(dual_objective(*sol.potentials, prob) ==
          doctest::Approx(sol.potentials->objective).epsilon(1e-9));
  }
}

TEST_CASE("dual ascent approaches the primal value") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 8; ++trial) {
    const auto mu = oracle::random_measure(rng, 4 + trial % 3, 2);
    const auto nu = oracle::random_measure(rng, 3 + trial % 4, 2);
    const double eps = 0.1 + (trial % 2) * 0.1;
    const RobustProblem prob(mu, nu, GroundCost(1.0 + trial % 2), eps, eps);
    const double primal = solve_robust(prob).value_p;
    DualAscentConfig cfg;
    cfg.seed = trial;
    const auto pot = dual_ascent(prob, cfg);
    CHECK(pot.objective <= primal + 1e-9);  // still a lower bound
    CHECK(primal - pot.objective <= std::max(1e-3 * (1.0 + primal), 1e-6));
  }
}

TEST_CASE("loss trimming equals the robust value at optimal potentials") {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t n = 5 + trial % 3;                  // uniform weights
    const double eps = (1.0 + trial % 2) / double(n);     // eps*n integral
    std::vector<Point> xs(n, Point(2)), ys(n, Point(2));
    for (auto& x : xs)
      for (double& v : x) v = coord(rng);
    for (auto& y : ys)
      for (double& v : y) v = coord(rng);
    const auto mu = empirical(xs), nu = empirical(ys);
    const GroundCost cost((trial % 2 == 0) ? 1.0 : 2.0);
    const auto sol = solve_robust(mu, nu, cost, eps);
    REQUIRE(sol.potentials.has_value());
    const double trimmed =
        loss_trimming_objective(sol.potentials->phi, mu, nu, cost, eps);
    CHECK(trimmed == doctest::Approx(sol.value_p).epsilon(1e-8));
  }
  // non-integral eps*n is unsupported
  const auto mu = empirical({{0.0}, {1.0}});
  CHECK_THROWS_AS(loss_trimming_objective({0.0, 0.0}, mu, mu, GroundCost(1.0), 0.3),
                  Unsupported);
}

TEST_CASE("maximizer structure of the removed mass") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const auto mu = oracle::random_measure(rng, 4 + trial % 4, 2);
    const auto nu = oracle::random_measure(rng, 4 + trial % 3, 2);
    const double eps = 0.1 + (trial % 3) * 0.05;
    const auto sol = solve_robust(mu, nu, GroundCost((trial % 2 == 0) ? 1.0 : 2.0), eps);
    const auto rep = check_maximizer_structure(sol);
    CHECK(rep.mu_gap <= 1e-6);
    CHECK(rep.nu_gap <= 1e-6);
  }
}

TEST_CASE("one-sided dual objective is a lower bound with equality at harvest") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 15; ++trial) {
    const auto mu = oracle::random_measure(rng, 4, 2);
    const auto nu = oracle::random_measure(rng, 3, 2);
    const double eps = 0.1 + (trial % 3) * 0.1;
    const GroundCost cost((trial % 2 == 0) ? 1.0 : 2.0);
    const auto sol = one_sided(mu, nu, cost, eps);
    REQUIRE(sol.potentials.has_value());
    CHECK(sol.potentials->objective == doctest::Approx(sol.value_p).epsilon(1e-8));
    const double obj =
        one_sided_dual_objective(sol.potentials->phi, mu, nu, cost, eps);
    CHECK(obj == doctest::Approx(sol.value_p).epsilon(1e-8));
  }
}

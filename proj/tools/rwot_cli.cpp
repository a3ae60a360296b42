// rwot: command-line front end for the robust optimal transport library.
//
// Subcommands: dist, robust, sweep, mde, test2s, testindep, sliced, bench.
// Results go to stdout (or --out) as JSON, except sweep which emits CSV.
// Exit codes: 0 ok, 2 usage / malformed input, 1 solver failure.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "rwot/dual.hpp"
#include "rwot/estimation.hpp"
#include "rwot/exact.hpp"
#include "rwot/measure.hpp"
#include "rwot/sinkhorn.hpp"
#include "rwot/sliced.hpp"

using json = nlohmann::ordered_json;

namespace {

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw rwot::BadInput("cannot open output file: " + out_path);
  f << text;
}

void emit_json(const std::string& out_path, const json& j) {
  emit(out_path, j.dump(2) + "\n");
}

json plan_json(const rwot::TransportSolution& sol) {
  json arr = json::array();
  for (const auto& e : sol.plan)
    arr.push_back(json::array({e.i, e.j, e.mass}));
  return arr;
}

std::vector<double> parse_grid(const std::string& spec) {
  double lo = 0.0, hi = 0.0, step = 0.0;
  char c1 = 0, c2 = 0;
  std::istringstream ss(spec);
  if (!(ss >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' || step <= 0.0)
    throw rwot::BadInput("grid must be lo:hi:step with step > 0, got '" + spec + "'");
  std::vector<double> taus;
  for (int i = 0;; ++i) {
    const double t = lo + i * step;
    if (t > hi + 1e-12) break;
    taus.push_back(t);
  }
  if (taus.empty()) throw rwot::BadInput("empty grid: " + spec);
  return taus;
}

json decision_json(const rwot::TestDecision& d, double additive, double multiplicative) {
  json j;
  j["statistic"] = d.statistic;
  j["threshold"] = d.threshold;
  j["decision"] = d.reject ? "reject" : "accept";
  j["bounds"] = {{"additive", additive}, {"multiplicative", multiplicative}};
  j["warnings"] = d.warnings;
  return j;
}

rwot::DiscreteMeasure random_measure(std::mt19937_64& rng, std::size_t n, std::size_t d) {
  std::uniform_real_distribution<double> coord(-1.0, 1.0), wt(0.1, 1.0);
  std::vector<rwot::Point> pts(n, rwot::Point(d));
  std::vector<double> ws(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < d; ++k) pts[i][k] = coord(rng);
    ws[i] = wt(rng);
    total += ws[i];
  }
  for (double& w : ws) w /= total;
  return rwot::DiscreteMeasure(std::move(pts), std::move(ws));
}

// --- bench: named conformance suites ---------------------------------------

struct BenchRow {
  std::string suite;
  bool pass;
  std::string detail;
};

void bench_triangle(std::vector<BenchRow>& rows, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0xA5A5A5A5ULL);
  std::uniform_real_distribution<double> re(0.0, 0.25);
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const auto mu = random_measure(rng, 5 + t % 4, 2);
    const auto ka = random_measure(rng, 4 + t % 3, 2);
    const auto nu = random_measure(rng, 6 + t % 5, 2);
    const double e1 = re(rng), e2 = re(rng);
    const double p = (t % 2 == 0) ? 1.0 : 2.0;
    const rwot::GroundCost cost(p);
    const double lhs = rwot::solve_robust(mu, nu, cost, e1 + e2).value;
    const double rhs = rwot::solve_robust(mu, ka, cost, e1).value +
                       rwot::solve_robust(ka, nu, cost, e2).value;
    worst = std::max(worst, lhs - rhs);
  }
  rows.push_back({"triangle", worst <= 1e-8,
                  "max violation " + rwot::format_double(worst)});
}

void bench_duality_gap(std::vector<BenchRow>& rows, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x5A5A5A5AULL);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const auto mu = random_measure(rng, 4 + t % 5, 2);
    const auto nu = random_measure(rng, 5 + t % 4, 2);
    const double eps = (t % 3) * 0.1;
    const double p = (t % 2 == 0) ? 1.0 : 2.0;
    const auto sol = rwot::solve_robust(mu, nu, rwot::GroundCost(p), eps);
    if (!sol.potentials) {
      rows.push_back({"duality-gap", false, "missing potentials"});
      return;
    }
    worst = std::max(worst, std::abs(sol.value_p - sol.potentials->objective));
  }
  rows.push_back({"duality-gap", worst <= 1e-7, "max gap " + rwot::format_double(worst)});
}

void bench_elbow(std::vector<BenchRow>& rows) {
  const auto fix = rwot::fixtures::elbow_fixture(0.2);
  const auto curve =
      rwot::sweep_radius(fix.mu_tilde, fix.nu_tilde, 1.0, parse_grid("0:0.4:0.02"));
  const auto elbow = rwot::detect_elbow(curve);
  const bool ok = std::abs(elbow.eps_hat - 0.2) <= 0.02 + 1e-12;
  rows.push_back({"elbow", ok, "eps_hat " + rwot::format_double(elbow.eps_hat)});
}

void bench_exact_recovery(std::vector<BenchRow>& rows) {
  double worst = 0.0;
  for (double p : {1.0, 2.0}) {
    const auto fix = rwot::fixtures::exact_recovery_fixture(0.2);
    const rwot::GroundCost cost(p);
    const double got = rwot::solve_robust(fix.mu_tilde, fix.nu_tilde, cost, 0.2).value;
    const double want =
        std::pow(0.8, 1.0 / p) * rwot::solve_standard(fix.mu_hat, fix.nu_hat, cost).value;
    worst = std::max(worst, std::abs(got - want));
  }
  rows.push_back({"exact-recovery", worst <= 1e-8, "max err " + rwot::format_double(worst)});
}

void bench_breakdown(std::vector<BenchRow>& rows) {
  double worst = 0.0;
  for (double p : {1.0, 2.0}) {
    const auto fix = rwot::fixtures::breakdown_fixture(0.1);
    const rwot::GroundCost cost(p);
    const double lhs = rwot::solve_robust(fix.mu_tilde, fix.nu_tilde, cost, 0.1).value;
    const double rhs = rwot::solve_robust(fix.mu, fix.nu, cost, 0.3).value;
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  rows.push_back({"breakdown", worst <= 1e-8, "max err " + rwot::format_double(worst)});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"robust optimal transport distances, estimators, and tests"};
  app.require_subcommand(1);

  std::string out_path;
  std::uint64_t seed = 0;
  int threads = 1;
  double p = 1.0;
  app.add_option("--out", out_path, "output file (default: stdout)")->capture_default_str();
  app.add_option("--seed", seed, "RNG seed")->capture_default_str();
  app.add_option("--threads", threads, "worker threads, 0 = auto")->capture_default_str();
  app.add_option("--p", p, "Wasserstein exponent p >= 1")->capture_default_str();
  app.fallthrough();

  // dist -------------------------------------------------------------------
  auto* dist = app.add_subcommand("dist", "classic W_p between two measures");
  std::string dist_a, dist_b;
  bool dist_plan = false;
  dist->add_option("mu", dist_a, "first measure (json/csv)")->required();
  dist->add_option("nu", dist_b, "second measure (json/csv)")->required();
  dist->add_flag("--plan", dist_plan, "include the optimal plan");
  dist->callback([&]() {
    const auto mu = rwot::read_measure_auto(dist_a);
    const auto nu = rwot::read_measure_auto(dist_b);
    const auto sol = rwot::solve_standard(mu, nu, rwot::GroundCost(p));
    json j;
    j["command"] = "dist";
    j["p"] = p;
    j["value"] = sol.value;
    j["value_p"] = sol.value_p;
    if (dist_plan) j["plan"] = plan_json(sol);
    emit_json(out_path, j);
  });

  // robust -----------------------------------------------------------------
  auto* robust = app.add_subcommand("robust", "robust W_p^eps");
  std::string rob_a, rob_b, method = "exact";
  double eps = 0.1, eps_mu = -1.0, eps_nu = -1.0, reg = 0.01;
  double cert_sigma = 0.0, cert_q = 0.0;
  bool rob_plan = false, certify = false;
  robust->add_option("mu", rob_a)->required();
  robust->add_option("nu", rob_b)->required();
  auto* eps_opt = robust->add_option("--eps", eps, "symmetric radius")->capture_default_str();
  robust->add_option("--eps-mu", eps_mu, "asymmetric radius on mu")->excludes(eps_opt);
  robust->add_option("--eps-nu", eps_nu, "asymmetric radius on nu")->excludes(eps_opt);
  robust->add_option("--method", method, "exact | sinkhorn | dual")
      ->check(CLI::IsMember({"exact", "sinkhorn", "dual"}))
      ->capture_default_str();
  robust->add_option("--reg", reg, "entropic regularization (sinkhorn)")
      ->capture_default_str();
  robust->add_flag("--plan", rob_plan, "include the optimal plan");
  robust->add_flag("--certify", certify, "attach the error certificate");
  robust->add_option("--sigma", cert_sigma, "moment scale for --certify");
  robust->add_option("--q", cert_q, "moment order for --certify");
  robust->callback([&]() {
    const auto mu = rwot::read_measure_auto(rob_a);
    const auto nu = rwot::read_measure_auto(rob_b);
    const bool asym = (eps_mu >= 0.0) || (eps_nu >= 0.0);
    if (asym && (eps_mu < 0.0 || eps_nu < 0.0))
      throw rwot::BadInput("--eps-mu and --eps-nu must be given together");

    json j;
    j["command"] = "robust";
    j["p"] = p;
    if (asym) {
      j["eps_mu"] = eps_mu;
      j["eps_nu"] = eps_nu;
    } else {
      j["eps"] = eps;
    }
    j["method"] = method;

    rwot::TransportSolution sol;
    if (asym) {
      if (method != "exact") throw rwot::BadInput("asymmetric radii need --method exact");
      sol = rwot::solve_asymmetric(rwot::RobustProblem(mu, nu, rwot::GroundCost(p),
                                                       eps_mu, eps_nu));
    } else if (method == "exact") {
      sol = rwot::solve_robust(mu, nu, rwot::GroundCost(p), eps);
    } else if (method == "sinkhorn") {
      rwot::SinkhornConfig cfg;
      cfg.reg = reg;
      sol = rwot::solve_robust_entropic(
          rwot::RobustProblem(mu, nu, rwot::GroundCost(p), eps, eps), cfg);
    } else {  // dual: lower estimate from ascent, no plan
      const rwot::RobustProblem prob(mu, nu, rwot::GroundCost(p), eps, eps);
      rwot::DualAscentConfig cfg;
      cfg.seed = seed;
      const auto pot = rwot::dual_ascent(prob, cfg);
      sol.value_p = pot.objective;
      sol.value = pot.objective <= 0.0 ? 0.0 : std::pow(pot.objective, 1.0 / p);
      sol.approximate = true;
    }

    j["value"] = sol.value;
    j["value_p"] = sol.value_p;
    j["approximate"] = sol.approximate;
    j["removed_mu_mass"] = sol.removed_mu.mass();
    j["removed_nu_mass"] = sol.removed_nu.mass();
    if (rob_plan) j["plan"] = plan_json(sol);
    if (certify) {
      if (asym) throw rwot::BadInput("--certify needs a symmetric radius");
      if (!(cert_sigma > 0.0) || !(cert_q > p))
        throw rwot::BadInput("--certify needs --sigma > 0 and --q > p");
      rwot::ResilienceProfile prof;
      prof.sigma = cert_sigma;
      prof.q = cert_q;
      prof.p = p;
      const auto cert = rwot::robust_distance_certificate(mu, nu, p, eps, prof);
      j["certificate"] = {
          {"estimate", cert.estimate},
          {"bounds",
           {{"additive", cert.additive_bound},
            {"multiplicative", cert.multiplicative_bound}}},
          {"warnings", cert.warnings}};
    }
    emit_json(out_path, j);
  });

  // sweep ------------------------------------------------------------------
  auto* sweep = app.add_subcommand("sweep", "radius sweep, CSV tau,value_p,slope");
  std::string sw_a, sw_b, grid = "0:0.4:0.02";
  sweep->add_option("mu", sw_a)->required();
  sweep->add_option("nu", sw_b)->required();
  sweep->add_option("--grid", grid, "lo:hi:step")->capture_default_str();
  sweep->callback([&]() {
    const auto mu = rwot::read_measure_auto(sw_a);
    const auto nu = rwot::read_measure_auto(sw_b);
    const auto curve = rwot::sweep_radius(mu, nu, p, parse_grid(grid), threads);
    std::string csv = "tau,value_p,slope\n";
    for (std::size_t i = 0; i < curve.taus.size(); ++i)
      csv += rwot::format_double(curve.taus[i]) + "," +
             rwot::format_double(curve.values_p[i]) + "," +
             rwot::format_double(curve.slopes[i]) + "\n";
    emit(out_path, csv);
  });

  // mde --------------------------------------------------------------------
  auto* mde_cmd = app.add_subcommand("mde", "minimum-distance estimation over a family");
  std::string mde_in, mde_base;
  std::vector<std::string> mde_members;
  std::string theta_grid;
  std::size_t theta_axis = 0;
  double mde_eps = 0.1, mde_delta = 0.0;
  bool mde_one_sided = false;
  mde_cmd->add_option("mu", mde_in, "contaminated measure")->required();
  mde_cmd->add_option("--member", mde_members, "family member file (repeatable)");
  mde_cmd->add_option("--base", mde_base, "template measure for a location family");
  mde_cmd->add_option("--theta-grid", theta_grid, "lo:hi:step shifts for --base");
  mde_cmd->add_option("--axis", theta_axis, "shift axis for the location family")
      ->capture_default_str();
  mde_cmd->add_option("--eps", mde_eps, "robustness radius")->capture_default_str();
  mde_cmd->add_option("--delta", mde_delta, "optimization slack")->capture_default_str();
  mde_cmd->add_flag("--one-sided", mde_one_sided, "use W_p^eps(mu || member)");
  mde_cmd->callback([&]() {
    const auto mu = rwot::read_measure_auto(mde_in);
    rwot::CandidateFamily family;
    std::vector<std::string> labels;
    if (!mde_members.empty()) {
      std::vector<rwot::DiscreteMeasure> members;
      for (const auto& path : mde_members) {
        members.push_back(rwot::read_measure_auto(path));
        labels.push_back(path);
      }
      family = rwot::CandidateFamily::from_list(std::move(members));
    } else if (!mde_base.empty() && !theta_grid.empty()) {
      const auto base = rwot::read_measure_auto(mde_base);
      if (theta_axis >= base.dim()) throw rwot::BadInput("--axis out of range");
      std::vector<rwot::Point> thetas;
      for (double t : parse_grid(theta_grid)) {
        rwot::Point shift(base.dim(), 0.0);
        shift[theta_axis] = t;
        thetas.push_back(shift);
        labels.push_back("theta=" + rwot::format_double(t));
      }
      family = rwot::CandidateFamily::location_family(base, thetas);
    } else {
      throw rwot::BadInput("mde needs --member files or --base with --theta-grid");
    }
    rwot::MdeOptions opts;
    opts.delta = mde_delta;
    opts.one_sided = mde_one_sided;
    opts.threads = threads;
    const auto res = rwot::mde(mu, family, p, mde_eps, opts);
    json j;
    j["command"] = "mde";
    j["p"] = p;
    j["eps"] = mde_eps;
    j["index"] = res.index;
    j["member"] = labels[res.index];
    j["value"] = res.value;
    j["minimum"] = res.minimum;
    emit_json(out_path, j);
  });

  // test2s -----------------------------------------------------------------
  auto* t2s = app.add_subcommand("test2s", "robust two-sample test");
  std::string t2s_a, t2s_b;
  double t2s_eps = 0.1, t2s_rho = 1.0;
  t2s->add_option("mu", t2s_a)->required();
  t2s->add_option("nu", t2s_b)->required();
  t2s->add_option("--eps", t2s_eps)->capture_default_str();
  t2s->add_option("--rho", t2s_rho, "resilience level")->capture_default_str();
  t2s->callback([&]() {
    const auto mu = rwot::read_measure_auto(t2s_a);
    const auto nu = rwot::read_measure_auto(t2s_b);
    const auto d = rwot::two_sample_test(mu, nu, p, t2s_eps, t2s_rho);
    emit_json(out_path, decision_json(d, 0.0, 0.0));
  });

  // testindep --------------------------------------------------------------
  auto* tin = app.add_subcommand("testindep", "robust independence test");
  std::string tin_file;
  std::size_t tin_split = 1, tin_cap = 40000;
  double tin_eps = 0.1, tin_rho = 1.0;
  bool tin_nosub = false;
  tin->add_option("pairs", tin_file, "measure whose rows are (x,y) pairs")->required();
  tin->add_option("--split", tin_split, "dimension of the x block")->capture_default_str();
  tin->add_option("--eps", tin_eps)->capture_default_str();
  tin->add_option("--rho", tin_rho)->capture_default_str();
  tin->add_option("--max-atoms", tin_cap, "product support cap")->capture_default_str();
  tin->add_flag("--no-subsample", tin_nosub, "error instead of subsampling over the cap");
  tin->callback([&]() {
    const auto joint = rwot::read_measure_auto(tin_file);
    if (tin_split == 0 || tin_split >= joint.dim())
      throw rwot::BadInput("--split must cut the row into two non-empty blocks");
    std::vector<std::pair<rwot::Point, rwot::Point>> pairs;
    for (std::size_t i = 0; i < joint.size(); ++i) {
      const auto& z = joint.point(i);
      pairs.emplace_back(rwot::Point(z.begin(), z.begin() + tin_split),
                         rwot::Point(z.begin() + tin_split, z.end()));
    }
    rwot::IndependenceOptions opts;
    opts.max_atoms = tin_cap;
    opts.allow_subsample = !tin_nosub;
    opts.seed = seed;
    const auto d = rwot::independence_test(pairs, p, tin_eps, tin_rho, opts);
    emit_json(out_path, decision_json(d, 0.0, 0.0));
  });

  // sliced -----------------------------------------------------------------
  auto* sl = app.add_subcommand("sliced", "sliced / max-sliced robust distance");
  std::string sl_a, sl_b, sl_mode = "avg";
  std::size_t sl_k = 1, sl_proj = 100;
  double sl_eps = 0.0;
  sl->add_option("mu", sl_a)->required();
  sl->add_option("nu", sl_b)->required();
  sl->add_option("--k", sl_k, "projection dimension")->capture_default_str();
  sl->add_option("--eps", sl_eps)->capture_default_str();
  sl->add_option("--mode", sl_mode, "avg | max")
      ->check(CLI::IsMember({"avg", "max"}))
      ->capture_default_str();
  sl->add_option("--projections", sl_proj, "Monte Carlo frames (avg mode)")
      ->capture_default_str();
  sl->callback([&]() {
    const auto mu = rwot::read_measure_auto(sl_a);
    const auto nu = rwot::read_measure_auto(sl_b);
    rwot::SlicedConfig cfg;
    cfg.num_projections = sl_proj;
    cfg.seed = seed;
    cfg.threads = threads;
    const auto mode = sl_mode == "avg" ? rwot::SlicedMode::Average : rwot::SlicedMode::Max;
    const auto est = rwot::sliced_distance(mu, nu, p, sl_k, sl_eps, mode, cfg);
    json j;
    j["command"] = "sliced";
    j["mode"] = sl_mode;
    j["p"] = p;
    j["k"] = sl_k;
    j["eps"] = sl_eps;
    j["value"] = est.value;
    j["std_error"] = est.std_error;
    j["num_projections"] = est.num_projections;
    j["seed"] = est.seed;
    emit_json(out_path, j);
  });

  // bench ------------------------------------------------------------------
  auto* bench = app.add_subcommand("bench", "run the named conformance suites");
  bool bench_failed = false;
  bench->callback([&]() {
    std::vector<BenchRow> rows;
    bench_triangle(rows, seed);
    bench_duality_gap(rows, seed);
    bench_elbow(rows);
    bench_exact_recovery(rows);
    bench_breakdown(rows);
    std::string table = "suite            result  detail\n";
    for (const auto& r : rows) {
      std::string name = r.suite;
      name.resize(16, ' ');
      table += name + " " + (r.pass ? "pass" : "FAIL") + "    " + r.detail + "\n";
      if (!r.pass) bench_failed = true;
    }
    emit(out_path, table);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const rwot::BadInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const rwot::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return bench_failed ? 1 : 0;
}

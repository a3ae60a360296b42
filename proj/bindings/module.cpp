#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rwot/dual.hpp"
#include "rwot/estimation.hpp"
#include "rwot/exact.hpp"
#include "rwot/measure.hpp"
#include "rwot/sinkhorn.hpp"
#include "rwot/sliced.hpp"

namespace py = pybind11;
using namespace rwot;

namespace {

std::vector<std::tuple<std::size_t, std::size_t, double>> plan_tuples(
    const TransportSolution& sol) {
  std::vector<std::tuple<std::size_t, std::size_t, double>> out;
  out.reserve(sol.plan.size());
  for (const auto& e : sol.plan) out.emplace_back(e.i, e.j, e.mass);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "outlier-robust Wasserstein distances";

  py::register_exception<Error>(m, "RwotError");

  py::class_<DiscreteMeasure>(m, "Measure")
      .def(py::init<std::vector<Point>, std::vector<double>>(), py::arg("points"),
           py::arg("weights"))
      .def_property_readonly("points", &DiscreteMeasure::points)
      .def_property_readonly("weights", &DiscreteMeasure::weights)
      .def_property_readonly("mass", &DiscreteMeasure::mass)
      .def("__len__", &DiscreteMeasure::size);

  py::class_<TransportSolution>(m, "Solution")
      .def_readonly("value", &TransportSolution::value)
      .def_readonly("value_p", &TransportSolution::value_p)
      .def_readonly("removed_mu", &TransportSolution::removed_mu)
      .def_readonly("removed_nu", &TransportSolution::removed_nu)
      .def_readonly("approximate", &TransportSolution::approximate)
      .def_property_readonly("plan", &plan_tuples);

  m.def("empirical", &empirical, py::arg("samples"));

  m.def(
      "dist",
      [](const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p) {
        return solve_standard(mu, nu, GroundCost(p));
      },
      py::arg("mu"), py::arg("nu"), py::arg("p") = 1.0);

  m.def(
      "robust",
      [](const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p, double eps) {
        return solve_robust(mu, nu, GroundCost(p), eps);
      },
      py::arg("mu"), py::arg("nu"), py::arg("p") = 1.0, py::arg("eps") = 0.1);

  m.def(
      "robust_asymmetric",
      [](const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p, double eps_mu,
         double eps_nu) {
        return solve_asymmetric(RobustProblem(mu, nu, GroundCost(p), eps_mu, eps_nu));
      },
      py::arg("mu"), py::arg("nu"), py::arg("p"), py::arg("eps_mu"), py::arg("eps_nu"));

  m.def(
      "one_sided",
      [](const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p, double eps) {
        return one_sided(mu, nu, GroundCost(p), eps);
      },
      py::arg("mu"), py::arg("nu"), py::arg("p"), py::arg("eps"));

  m.def(
      "sinkhorn",
      [](const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p, double eps,
         double reg, int max_iters, double tol) {
        SinkhornConfig cfg;
        cfg.reg = reg;
        cfg.max_iters = max_iters;
        cfg.tol = tol;
        return solve_robust_entropic(RobustProblem(mu, nu, GroundCost(p), eps, eps), cfg);
      },
      py::arg("mu"), py::arg("nu"), py::arg("p"), py::arg("eps"), py::arg("reg") = 0.01,
      py::arg("max_iters") = 200000, py::arg("tol") = 1e-9);

  m.def(
      "sliced",
      [](const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p, std::size_t k,
         double eps, const std::string& mode, std::size_t num_projections,
         std::uint64_t seed, int threads) {
        SlicedConfig cfg;
        cfg.num_projections = num_projections;
        cfg.seed = seed;
        cfg.threads = threads;
        const auto est = sliced_distance(
            mu, nu, p, k, eps, mode == "max" ? SlicedMode::Max : SlicedMode::Average, cfg);
        return std::make_pair(est.value, est.std_error);
      },
      py::arg("mu"), py::arg("nu"), py::arg("p"), py::arg("k") = 1, py::arg("eps") = 0.0,
      py::arg("mode") = "avg", py::arg("num_projections") = 100, py::arg("seed") = 0,
      py::arg("threads") = 1);

  m.def(
      "sweep",
      [](const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p,
         const std::vector<double>& taus, int threads) {
        const auto c = sweep_radius(mu, nu, p, taus, threads);
        return std::make_tuple(c.taus, c.values_p, c.slopes);
      },
      py::arg("mu"), py::arg("nu"), py::arg("p"), py::arg("taus"), py::arg("threads") = 1);

  m.def(
      "detect_elbow",
      [](const std::vector<double>& taus, const std::vector<double>& values_p,
         std::optional<double> threshold) {
        SweepCurve c;
        c.taus = taus;
        c.values_p = values_p;
        c.slopes.assign(taus.size(), 0.0);
        for (std::size_t i = 0; i + 1 < taus.size(); ++i)
          c.slopes[i] = (values_p[i + 1] - values_p[i]) / (taus[i + 1] - taus[i]);
        return detect_elbow(c, threshold).eps_hat;
      },
      py::arg("taus"), py::arg("values_p"), py::arg("threshold") = std::nullopt);

  m.def(
      "mde",
      [](const DiscreteMeasure& mu, const std::vector<DiscreteMeasure>& members, double p,
         double eps, double delta, bool one_sided_flag, int threads) {
        MdeOptions opts;
        opts.delta = delta;
        opts.one_sided = one_sided_flag;
        opts.threads = threads;
        const auto res = mde(mu, CandidateFamily::from_list(members), p, eps, opts);
        return std::make_tuple(res.index, res.value, res.minimum);
      },
      py::arg("mu"), py::arg("members"), py::arg("p"), py::arg("eps"),
      py::arg("delta") = 0.0, py::arg("one_sided") = false, py::arg("threads") = 1);

  m.def("resilience_bound", &resilience_bound, py::arg("sigma"), py::arg("q"),
        py::arg("p"), py::arg("eps"));

  m.def(
      "two_sample_test",
      [](const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p, double eps,
         double rho) {
        const auto d = two_sample_test(mu, nu, p, eps, rho);
        return std::make_tuple(d.statistic, d.threshold, d.reject, d.warnings);
      },
      py::arg("mu"), py::arg("nu"), py::arg("p"), py::arg("eps"), py::arg("rho"));

  m.def(
      "independence_test",
      [](const std::vector<std::pair<Point, Point>>& pairs, double p, double eps,
         double rho, std::size_t max_atoms, bool allow_subsample, std::uint64_t seed) {
        IndependenceOptions opts;
        opts.max_atoms = max_atoms;
        opts.allow_subsample = allow_subsample;
        opts.seed = seed;
        const auto d = independence_test(pairs, p, eps, rho, opts);
        return std::make_tuple(d.statistic, d.threshold, d.reject, d.warnings);
      },
      py::arg("pairs"), py::arg("p"), py::arg("eps"), py::arg("rho"),
      py::arg("max_atoms") = 40000, py::arg("allow_subsample") = true, py::arg("seed") = 0);
}

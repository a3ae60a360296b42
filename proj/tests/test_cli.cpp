// End-to-end tests for the rwot CLI. The binary path arrives as argv[1]
// (wired up by the build), and everything runs through std::system with
// output redirected into temp files.
#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "rwot/exact.hpp"
#include "rwot/measure.hpp"

namespace {

std::string g_cli;

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct Run {
  int exit_code;
  std::string out;
};

Run run_cli(const std::string& args) {
  const std::string out_path = "/tmp/rwot_cli_out.txt";
  const std::string cmd = g_cli + " " + args + " > " + out_path + " 2>/dev/null";
  const int raw = std::system(cmd.c_str());
  Run r;
  r.exit_code = (raw == -1) ? -1 : WEXITSTATUS(raw);
  r.out = slurp(out_path);
  return r;
}

struct Fixture {
  std::string a = "/tmp/rwot_cli_a.json";
  std::string b = "/tmp/rwot_cli_b.json";
  Fixture() {
    std::ofstream(a) << R"({"points": [[0.0], [100.0]], "weights": [0.8, 0.2]})";
    std::ofstream(b) << R"({"points": [[1.0], [-100.0]], "weights": [0.8, 0.2]})";
  }
};

}  // namespace

TEST_CASE("robust on the recovery fixture returns 0.8") {
  Fixture f;
  const auto r = run_cli("robust --p 1 --eps 0.2 " + f.a + " " + f.b);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"value\": 0.8,") != std::string::npos);
}

TEST_CASE("dist of a measure with itself is zero") {
  Fixture f;
  const auto r = run_cli("dist " + f.a + " " + f.a);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"value\": 0.0") != std::string::npos);
}

TEST_CASE("dist round-trips to full precision") {
  Fixture f;
  const auto r = run_cli("dist --p 2 " + f.a + " " + f.b);
  CHECK(r.exit_code == 0);
  // re-parse the printed value and compare with the library
  const auto pos = r.out.find("\"value\": ");
  REQUIRE(pos != std::string::npos);
  const double printed = std::stod(r.out.substr(pos + 9));
  const auto mu = rwot::read_measure_json(f.a);
  const auto nu = rwot::read_measure_json(f.b);
  const auto sol = rwot::solve_standard(mu, nu, rwot::GroundCost(2.0));
  CHECK(printed == sol.value);  // bit-exact round trip
}

TEST_CASE("sweep CSV has the exact header and the elbow at 0.2") {
  Fixture f;
  const auto r = run_cli("sweep --p 1 --grid 0:0.4:0.02 " + f.a + " " + f.b);
  CHECK(r.exit_code == 0);
  CHECK(r.out.rfind("tau,value_p,slope\n", 0) == 0);
  // curvature-max row: find the largest second difference of value_p
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);  // header
  std::vector<double> taus, vals;
  while (std::getline(lines, line)) {
    double t, v;
    char c;
    std::istringstream row(line);
    row >> t >> c >> v;
    taus.push_back(t);
    vals.push_back(v);
  }
  REQUIRE(taus.size() >= 4);
  std::size_t best = 1;
  for (std::size_t i = 1; i + 1 < vals.size(); ++i)
    if (vals[i + 1] - 2 * vals[i] + vals[i - 1] > vals[best + 1] - 2 * vals[best] + vals[best - 1])
      best = i;
  CHECK(taus[best] == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("usage and solver error exit codes") {
  Fixture f;
  CHECK(run_cli("frobnicate").exit_code == 2);             // unknown subcommand
  CHECK(run_cli("dist " + f.a).exit_code == 2);            // missing argument
  CHECK(run_cli("dist /nonexistent.json " + f.a).exit_code == 2);
  std::ofstream("/tmp/rwot_cli_bad.csv") << "0.5,zzz\n";
  CHECK(run_cli("dist /tmp/rwot_cli_bad.csv " + f.a).exit_code == 2);
  // solver error: sinkhorn that cannot converge in one iteration
  CHECK(run_cli("robust --eps 1.5 " + f.a + " " + f.b).exit_code == 1);  // bad radius
}

TEST_CASE("mde over dirac members") {
  Fixture f;
  std::ofstream("/tmp/rwot_cli_m0.json") << R"({"points": [[0.0]], "weights": [1.0]})";
  std::ofstream("/tmp/rwot_cli_m2.json") << R"({"points": [[2.0]], "weights": [1.0]})";
  std::ofstream("/tmp/rwot_cli_in.json")
      << R"({"points": [[2.0], [50.0]], "weights": [0.8, 0.2]})";
  const auto r = run_cli(
      "mde --p 1 --eps 0.2 --member /tmp/rwot_cli_m0.json --member /tmp/rwot_cli_m2.json "
      "/tmp/rwot_cli_in.json");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"index\": 1") != std::string::npos);
  CHECK(r.out.find("rwot_cli_m2.json") != std::string::npos);
}

TEST_CASE("test subcommands emit the decision schema") {
  Fixture f;
  const auto r = run_cli("test2s --p 1 --eps 0.1 --rho 0.5 " + f.a + " " + f.a);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"statistic\"") != std::string::npos);
  CHECK(r.out.find("\"threshold\": 1.5") != std::string::npos);
  CHECK(r.out.find("\"decision\": \"accept\"") != std::string::npos);
  CHECK(r.out.find("\"bounds\"") != std::string::npos);
  CHECK(r.out.find("\"warnings\"") != std::string::npos);

  std::ofstream("/tmp/rwot_cli_pairs.json")
      << R"({"points": [[0.0, 0.0], [10.0, 10.0], [20.0, 20.0]],)"
      << R"( "weights": [0.3333333333333333, 0.3333333333333333, 0.3333333333333334]})";
  const auto ind =
      run_cli("testindep --p 1 --eps 0.05 --rho 0.1 --split 1 /tmp/rwot_cli_pairs.json");
  CHECK(ind.exit_code == 0);
  CHECK(ind.out.find("\"decision\": \"reject\"") != std::string::npos);
}

TEST_CASE("sliced subcommand") {
  Fixture f;
  const auto r = run_cli("sliced --p 2 --k 1 --eps 0.1 --projections 10 --seed 3 " +
                         f.a + " " + f.b);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"num_projections\": 10") != std::string::npos);
}

TEST_CASE("identical command and seed give byte-identical output") {
  Fixture f;
  const std::string cmd = "sliced --p 2 --k 1 --eps 0.1 --projections 12 --seed 9 ";
  const auto r1 = run_cli(cmd + "--threads 1 " + f.a + " " + f.b);
  const auto r2 = run_cli(cmd + "--threads 1 " + f.a + " " + f.b);
  const auto r4 = run_cli(cmd + "--threads 4 " + f.a + " " + f.b);
  CHECK(r1.out == r2.out);
  CHECK(r1.out == r4.out);
  REQUIRE(!r1.out.empty());
}

TEST_CASE("bench passes") {
  const auto r = run_cli("bench");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("FAIL") == std::string::npos);
}

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: test_cli <path-to-rwot-binary>\n");
    return 1;
  }
  g_cli = argv[1];
  doctest::Context ctx;
  ctx.applyCommandLine(1, argv);
  return ctx.run();
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <vector>

#include "rwot/flow.hpp"

using rwot::MinCostFlow;

TEST_CASE("single arc ships the supply") {
  MinCostFlow g(2);
  const int a = g.add_arc(0, 1, 7);
  g.set_supply(0, 5);
  g.set_supply(1, -5);
  g.run();
  CHECK(g.flow(a) == 5);
  CHECK(static_cast<long long>(g.total_cost()) == 35);
}

TEST_CASE("chooses the cheaper parallel route") {
  MinCostFlow g(3);
  const int direct = g.add_arc(0, 2, 10);
  const int leg1 = g.add_arc(0, 1, 3);
  const int leg2 = g.add_arc(1, 2, 3);
  g.set_supply(0, 4);
  g.set_supply(2, -4);
  g.run();
  CHECK(g.flow(direct) == 0);
  CHECK(g.flow(leg1) == 4);
  CHECK(g.flow(leg2) == 4);
  CHECK(static_cast<long long>(g.total_cost()) == 24);
}

TEST_CASE("3x3 assignment problem") {
  // cost matrix rows=sources, cols=sinks; optimal assignment 0->1,1->0,2->2 = 5.
  const long long c[3][3] = {{4, 1, 3}, {2, 0, 5}, {3, 2, 2}};
  MinCostFlow g(6);
  std::vector<int> arcs;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) arcs.push_back(g.add_arc(i, 3 + j, c[i][j]));
  for (int i = 0; i < 3; ++i) g.set_supply(i, 1);
  for (int j = 0; j < 3; ++j) g.set_supply(3 + j, -1);
  g.run();
  CHECK(static_cast<long long>(g.total_cost()) == 5);
}

TEST_CASE("unbalanced supplies are rejected") {
  MinCostFlow g(2);
  g.add_arc(0, 1, 1);
  g.set_supply(0, 3);
  g.set_supply(1, -2);
  CHECK_THROWS_AS(g.run(), rwot::NumericalFailure);
}

TEST_CASE("disconnected demand is infeasible") {
  MinCostFlow g(3);
  g.add_arc(0, 1, 1);  // node 2 unreachable
  g.set_supply(0, 1);
  g.set_supply(2, -1);
  CHECK_THROWS_AS(g.run(), rwot::NumericalFailure);
}

TEST_CASE("optimality conditions hold on random transportation instances") {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 6), m = 2 + static_cast<int>(rng() % 6);
    MinCostFlow g(n + m);
    std::vector<long long> cost;
    std::vector<int> arcs;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) {
        cost.push_back(static_cast<long long>(rng() % 1000));
        arcs.push_back(g.add_arc(i, n + j, cost.back()));
      }
    std::vector<long long> supply(n), demand(m);
    long long total = 0;
    for (int i = 0; i < n; ++i) {
      supply[i] = 1 + static_cast<long long>(rng() % 50);
      total += supply[i];
      g.set_supply(i, supply[i]);
    }
    long long left = total;
    for (int j = 0; j < m; ++j) {
      demand[j] = (j == m - 1) ? left : left / (m - j);
      left -= demand[j];
      g.set_supply(n + j, -demand[j]);
    }
    g.run();

    // Feasibility: arc flows reproduce the marginals exactly.
    std::vector<long long> row(n, 0), col(m, 0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) {
        const long long f = g.flow(arcs[i * m + j]);
        CHECK(f >= 0);
        row[i] += f;
        col[j] += f;
      }
    for (int i = 0; i < n; ++i) CHECK(row[i] == supply[i]);
    for (int j = 0; j < m; ++j) CHECK(col[j] == demand[j]);

    // Complementary slackness against the reported potentials.
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) {
        const auto rc = static_cast<MinCostFlow::Cost>(cost[i * m + j]) -
                        g.potential(i) + g.potential(n + j);
        CHECK(rc >= 0);
        if (g.flow(arcs[i * m + j]) > 0) CHECK(rc == 0);
      }
  }
}

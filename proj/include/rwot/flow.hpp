#pragma once

#include <cstdint>
#include <vector>

#include "rwot/errors.hpp"

namespace rwot {

// Exact uncapacitated min-cost flow via network simplex on integer data.
// Supplies are int64 (callers scale real weights by 1e12); costs are int64
// (callers scale real costs so the largest magnitude is ~2^60). All pivots
// compare exact integers, so the strongly-feasible-tree rule guarantees
// finite termination with no cycling even on fully degenerate instances.
class MinCostFlow {
public:
  using Flow = long long;
  using Cost = __int128;

  explicit MinCostFlow(int num_nodes);

  int add_arc(int src, int dst, long long cost);
  void set_supply(int node, Flow supply);  // positive = source

  // Solves to optimality. Throws NumericalFailure if the instance is
  // infeasible (unbalanced supplies) or the pivot cap is hit.
  void run();

  Flow flow(int arc) const { return flow_[arc]; }
  // Node potential pi with the convention cost(a) - pi[src] + pi[dst] >= 0
  // at optimality (equality on basic arcs). Gauge: pi[artificial root] = 0.
  Cost potential(int node) const { return pi_[node]; }
  Cost total_cost() const;

private:
  enum State : signed char { kLower = 0, kTree = 1 };

  int find_entering();
  void pivot(int in_arc);

  int n_;  // real nodes; root is node n_
  std::vector<int> src_, dst_;
  std::vector<Cost> cost_;
  std::vector<Flow> flow_;
  std::vector<Flow> supply_;
  std::vector<signed char> state_;

  // Spanning-tree bookkeeping.
  std::vector<int> parent_, pred_, depth_;
  std::vector<Cost> pi_;
  std::vector<int> bucket_head_, bucket_next_, stack_;  // scratch for subtree walks

  int num_user_arcs_ = 0;
  int block_start_ = 0;
  bool ran_ = false;
};

}  // namespace rwot

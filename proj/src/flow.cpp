#include "rwot/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rwot {

namespace {
constexpr MinCostFlow::Flow kInfFlow = std::numeric_limits<long long>::max();
}

MinCostFlow::MinCostFlow(int num_nodes) : n_(num_nodes), supply_(num_nodes, 0) {}

int MinCostFlow::add_arc(int src, int dst, long long cost) {
  src_.push_back(src);
  dst_.push_back(dst);
  cost_.push_back(cost);
  flow_.push_back(0);
  state_.push_back(kLower);
  return static_cast<int>(src_.size()) - 1;
}

void MinCostFlow::set_supply(int node, Flow supply) { supply_[node] = supply; }

MinCostFlow::Cost MinCostFlow::total_cost() const {
  Cost total = 0;
  for (std::size_t a = 0; a < src_.size(); ++a)
    total += static_cast<Cost>(flow_[a]) * cost_[a];
  return total;
}

void MinCostFlow::run() {
  Flow balance = 0;
  for (Flow b : supply_) balance += b;
  if (balance != 0) throw NumericalFailure("min-cost flow: supplies do not balance");

  num_user_arcs_ = static_cast<int>(src_.size());
  const int root = n_;

  // Artificial arcs get a cost larger than any simple path of real arcs so
  // they never stay attractive once a real alternative exists.
  Cost max_abs = 0;
  for (int a = 0; a < num_user_arcs_; ++a) {
    Cost c = cost_[a] < 0 ? -cost_[a] : cost_[a];
    max_abs = std::max(max_abs, c);
  }
  const Cost big = (max_abs + 1) * static_cast<Cost>(n_ + 2);

  parent_.assign(n_ + 1, -1);
  pred_.assign(n_ + 1, -1);
  depth_.assign(n_ + 1, 0);
  pi_.assign(n_ + 1, 0);

  // Initial strongly feasible tree: every node hangs off the root on an
  // artificial arc carrying |supply|.
  for (int u = 0; u < n_; ++u) {
    int a;
    if (supply_[u] >= 0) {
      a = add_arc(u, root, 0);
      flow_[a] = supply_[u];
      pi_[u] = 0;
    } else {
      a = add_arc(root, u, 0);
      flow_[a] = -supply_[u];
      pi_[u] = 0;
    }
    cost_[a] = big;
    pi_[u] = (supply_[u] >= 0) ? big : -big;
    state_[a] = kTree;
    parent_[u] = root;
    pred_[u] = a;
    depth_[u] = 1;
  }
  pi_[root] = 0;
  depth_[root] = 0;

  bucket_head_.assign(n_ + 2, -1);
  bucket_next_.assign(n_ + 1, -1);
  stack_.clear();
  block_start_ = 0;

  // Generous pivot cap as a safety net; exact integer pivots with the
  // strongly feasible rule terminate long before this.
  const long long max_pivots =
      64LL * (static_cast<long long>(src_.size()) + n_ + 16) * (n_ + 16);
  long long pivots = 0;
  for (;;) {
    const int in_arc = find_entering();
    if (in_arc < 0) break;
    pivot(in_arc);
    if (++pivots > max_pivots)
      throw NumericalFailure("network simplex exceeded the pivot cap");
  }

  // Any residual flow on artificial arcs means the instance was infeasible.
  for (int a = num_user_arcs_; a < static_cast<int>(src_.size()); ++a)
    if (flow_[a] != 0)
      throw NumericalFailure("min-cost flow infeasible: artificial arc kept flow");
  ran_ = true;
}

int MinCostFlow::find_entering() {
  const int m = static_cast<int>(src_.size());
  const int block = std::max(64, static_cast<int>(std::sqrt(static_cast<double>(m))));
  int best = -1;
  Cost best_rc = 0;
  int count = block;
  for (int scanned = 0; scanned < m; ++scanned) {
    const int a = block_start_;
    block_start_ = block_start_ + 1 == m ? 0 : block_start_ + 1;
    if (state_[a] != kLower) {
      if (--count == 0) {
        if (best >= 0) return best;
        count = block;
      }
      continue;
    }
    const Cost rc = cost_[a] - pi_[src_[a]] + pi_[dst_[a]];
    if (rc < best_rc) {
      best_rc = rc;
      best = a;
    }
    if (--count == 0) {
      if (best >= 0) return best;
      count = block;
    }
  }
  return best;
}

void MinCostFlow::pivot(int in_arc) {
  const int first = src_[in_arc];
  const int second = dst_[in_arc];

  // Apex of the cycle closed by the entering arc.
  int ua = first, ub = second;
  while (depth_[ua] > depth_[ub]) ua = parent_[ua];
  while (depth_[ub] > depth_[ua]) ub = parent_[ub];
  while (ua != ub) {
    ua = parent_[ua];
    ub = parent_[ub];
  }
  const int join = ua;

  // Leaving arc: minimum residual around the cycle. Ties are broken
  // asymmetrically (strict < on the source path, <= on the target path),
  // which keeps the tree strongly feasible and rules out cycling.
  Flow delta = kInfFlow;
  int u_out = -1;
  bool out_on_first = true;
  for (int u = first; u != join; u = parent_[u]) {
    const int e = pred_[u];
    if (src_[e] == u) {  // arc u -> parent runs against the push direction
      if (flow_[e] < delta) {
        delta = flow_[e];
        u_out = u;
        out_on_first = true;
      }
    }
  }
  for (int u = second; u != join; u = parent_[u]) {
    const int e = pred_[u];
    if (dst_[e] == u) {  // arc parent -> u runs against the push direction
      if (flow_[e] <= delta) {
        delta = flow_[e];
        u_out = u;
        out_on_first = false;
      }
    }
  }
  if (u_out < 0) throw NumericalFailure("network simplex: unbounded pivot cycle");

  // Push delta around the cycle.
  if (delta > 0) {
    flow_[in_arc] += delta;
    for (int u = first; u != join; u = parent_[u]) {
      const int e = pred_[u];
      flow_[e] += (src_[e] == u) ? -delta : delta;
    }
    for (int u = second; u != join; u = parent_[u]) {
      const int e = pred_[u];
      flow_[e] += (dst_[e] == u) ? -delta : delta;
    }
  }

  // Swap the entering and leaving arcs in the basis.
  const int out_arc = pred_[u_out];
  state_[out_arc] = kLower;
  state_[in_arc] = kTree;

  // The subtree cut off below u_out re-hangs from the entering arc; its
  // endpoint inside the subtree becomes the subtree's new root.
  const int u_in = out_on_first ? first : second;
  const int v_in = out_on_first ? second : first;
  const Cost rc_in = cost_[in_arc] - pi_[src_[in_arc]] + pi_[dst_[in_arc]];
  const Cost pi_shift = (u_in == src_[in_arc]) ? rc_in : -rc_in;

  // Reverse parent pointers along u_in .. u_out.
  {
    int w = u_in;
    int new_parent = v_in;
    int new_pred = in_arc;
    for (;;) {
      const int next_node = parent_[w];
      const int next_pred = pred_[w];
      parent_[w] = new_parent;
      pred_[w] = new_pred;
      new_parent = w;
      new_pred = next_pred;
      if (w == u_out) break;
      w = next_node;
    }
  }

  // Walk the re-hung subtree once: shift potentials, refresh depths.
  // Children buckets are rebuilt from the parent array (O(n), simple and
  // cheap at the sizes this library handles).
  std::fill(bucket_head_.begin(), bucket_head_.end(), -1);
  for (int u = 0; u < n_; ++u) {
    const int p = parent_[u];
    bucket_next_[u] = bucket_head_[p];
    bucket_head_[p] = u;
  }
  stack_.clear();
  stack_.push_back(u_in);
  depth_[u_in] = depth_[v_in] + 1;
  pi_[u_in] += pi_shift;
  while (!stack_.empty()) {
    const int u = stack_.back();
    stack_.pop_back();
    for (int c = bucket_head_[u]; c >= 0; c = bucket_next_[c]) {
      depth_[c] = depth_[u] + 1;
      pi_[c] += pi_shift;
      stack_.push_back(c);
    }
  }
}

}  // namespace rwot

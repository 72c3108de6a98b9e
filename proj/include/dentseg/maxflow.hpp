// s-t max-flow on a small dense-ish graph, Dinic's algorithm.
//
// Built for the binary subproblems of alpha-expansion: variable nodes carry
// accumulated signed terminal capacities (realized as actual source/sink arcs
// when solve() runs), and pairwise terms become directed arcs between
// variables. After solve(), side_of() reports the min-cut partition: false
// means the node sits with the source (binary value 0), true with the sink
// (value 1). BFS visits nodes in index order so tie configurations resolve
// the same way on every run.
#pragma once

#include <vector>

namespace dentseg {

class MaxFlowGraph {
 public:
  explicit MaxFlowGraph(int n_nodes);

  // Accumulates unary costs: cost_zero is paid when the node takes value 0,
  // cost_one when it takes value 1. May be called repeatedly per node.
  void add_unary(int node, double cost_zero, double cost_one);

  // Cost paid exactly when node i takes value 0 and node j takes value 1.
  // cap must be >= 0.
  void add_edge_01(int i, int j, double cap);

  // Returns the max-flow value over the realized network.
  double solve();

  // Valid after solve(). false = source side (value 0), true = sink side.
  bool side_of(int node) const;

 private:
  struct Arc {
    int to;
    int rev;  // index of the reverse arc in adj_[to]
    double cap;
  };

  void add_arc(int from, int to, double cap);
  bool build_levels();
  double push(int node, double limit);

  int n_variables_;
  int source_, sink_;
  std::vector<double> net_unary_;  // cost_one - cost_zero per variable
  std::vector<std::vector<Arc>> adj_;
  std::vector<int> level_, iter_;
  std::vector<bool> source_side_;
  bool solved_ = false;
};

}  // namespace dentseg

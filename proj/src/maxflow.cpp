#include "dentseg/maxflow.hpp"

#include <limits>
#include <queue>
#include <stdexcept>

namespace dentseg {

namespace {
constexpr double kResidualEps = 1e-12;
}

MaxFlowGraph::MaxFlowGraph(int n_nodes)
    : n_variables_(n_nodes),
      source_(n_nodes),
      sink_(n_nodes + 1),
      net_unary_(n_nodes, 0.0),
      adj_(n_nodes + 2) {
  if (n_nodes < 1) throw std::invalid_argument("max-flow graph needs at least one node");
}

void MaxFlowGraph::add_unary(int node, double cost_zero, double cost_one) {
  if (node < 0 || node >= n_variables_) throw std::out_of_range("max-flow node index");
  net_unary_[node] += cost_one - cost_zero;
}

void MaxFlowGraph::add_edge_01(int i, int j, double cap) {
  if (i < 0 || i >= n_variables_ || j < 0 || j >= n_variables_) {
    throw std::out_of_range("max-flow node index");
  }
  if (cap < 0) throw std::invalid_argument("negative pairwise capacity");
  // Cut when i is on the source side and j on the sink side, so the arc runs
  // i -> j.
  add_arc(i, j, cap);
}

void MaxFlowGraph::add_arc(int from, int to, double cap) {
  adj_[from].push_back({to, static_cast<int>(adj_[to].size()), cap});
  adj_[to].push_back({from, static_cast<int>(adj_[from].size()) - 1, 0.0});
}

bool MaxFlowGraph::build_levels() {
  level_.assign(adj_.size(), -1);
  std::queue<int> queue;
  level_[source_] = 0;
  queue.push(source_);
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop();
    for (const Arc& arc : adj_[u]) {
      if (arc.cap > kResidualEps && level_[arc.to] < 0) {
        level_[arc.to] = level_[u] + 1;
        queue.push(arc.to);
      }
    }
  }
  return level_[sink_] >= 0;
}

double MaxFlowGraph::push(int node, double limit) {
  if (node == sink_) return limit;
  for (int& i = iter_[node]; i < static_cast<int>(adj_[node].size()); ++i) {
    Arc& arc = adj_[node][i];
    if (arc.cap <= kResidualEps || level_[arc.to] != level_[node] + 1) continue;
    const double pushed = push(arc.to, std::min(limit, arc.cap));
    if (pushed > 0) {
      arc.cap -= pushed;
      adj_[arc.to][arc.rev].cap += pushed;
      return pushed;
    }
  }
  return 0;
}

double MaxFlowGraph::solve() {
  // Realize accumulated terminal capacities as arcs; a positive net unary
  // means value 1 costs more, so the charge sits on the source->node arc and
  // is paid when the node lands on the sink side.
  for (int v = 0; v < n_variables_; ++v) {
    if (net_unary_[v] > 0) {
      add_arc(source_, v, net_unary_[v]);
    } else if (net_unary_[v] < 0) {
      add_arc(v, sink_, -net_unary_[v]);
    }
    net_unary_[v] = 0;
  }

  double flow = 0;
  while (build_levels()) {
    iter_.assign(adj_.size(), 0);
    while (true) {
      const double pushed = push(source_, std::numeric_limits<double>::infinity());
      if (pushed <= 0) break;
      flow += pushed;
    }
  }

  // Min-cut partition: nodes reachable from the source in the residual graph.
  source_side_.assign(adj_.size(), false);
  std::queue<int> queue;
  source_side_[source_] = true;
  queue.push(source_);
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop();
    for (const Arc& arc : adj_[u]) {
      if (arc.cap > kResidualEps && !source_side_[arc.to]) {
        source_side_[arc.to] = true;
        queue.push(arc.to);
      }
    }
  }
  solved_ = true;
  return flow;
}

bool MaxFlowGraph::side_of(int node) const {
  if (!solved_) throw std::logic_error("side_of() before solve()");
  if (node < 0 || node >= n_variables_) throw std::out_of_range("max-flow node index");
  return !source_side_[node];
}

}  // namespace dentseg

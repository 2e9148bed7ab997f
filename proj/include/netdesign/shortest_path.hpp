#pragma once

// Label-setting shortest paths with a deterministic tie-break: among all
// shortest source-sink paths the lexicographically smallest node sequence is
// returned.

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <utility>
#include <vector>

#include "netdesign/flow.hpp"

namespace netdesign {

/// Distance from every node to `sink` under non-negative arc weights.
/// Nodes are settled by (distance, node id).
inline std::vector<double> distances_to(const IndexedGraph& g, std::size_t sink, const std::vector<double>& w) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(g.node_count(), inf);
  std::vector<bool> settled(g.node_count(), false);
  using Label = std::pair<double, NodeId>;
  std::priority_queue<Label, std::vector<Label>, std::greater<>> heap;
  dist[sink] = 0.0;
  heap.push({0.0, g.node_id(sink)});
  while (!heap.empty()) {
    const auto [d, id] = heap.top();
    heap.pop();
    const std::size_t v = g.node_index(id);
    if (settled[v]) continue;
    settled[v] = true;
    for (std::size_t a : g.in(v)) {
      const std::size_t u = g.arc(a).from;
      const double nd = d + w[a];
      if (nd < dist[u]) {
        dist[u] = nd;
        heap.push({nd, g.node_id(u)});
      }
    }
  }
  return dist;
}

/// Lexicographically smallest shortest path from `source` to `sink` as a list
/// of arc indices; std::nullopt when the sink is unreachable.
inline std::optional<std::vector<std::size_t>> shortest_path_arcs(const IndexedGraph& g, std::size_t source,
                                                                 std::size_t sink, const std::vector<double>& w) {
  const auto dist = distances_to(g, sink, w);
  if (!std::isfinite(dist[source])) return std::nullopt;

  // Any simple walk over tight arcs telescopes to dist[source], so the first
  // path found by an id-ordered DFS over tight arcs is the answer. Zero-cost
  // cycles make backtracking necessary.
  auto tight = [&](std::size_t a) {
    const auto& arc = g.arc(a);
    const double lhs = w[a] + dist[arc.to];
    return std::isfinite(dist[arc.to]) && std::abs(lhs - dist[arc.from]) <= 1e-12 * (1.0 + dist[arc.from]);
  };
  // Nodes that reach the sink over tight arcs at all.
  std::vector<bool> alive(g.node_count(), false);
  std::vector<std::size_t> queue{sink};
  alive[sink] = true;
  while (!queue.empty()) {
    const std::size_t v = queue.back();
    queue.pop_back();
    for (std::size_t a : g.in(v)) {
      const std::size_t u = g.arc(a).from;
      if (!alive[u] && tight(a)) {
        alive[u] = true;
        queue.push_back(u);
      }
    }
  }
  std::vector<bool> on_path(g.node_count(), false);
  std::vector<std::size_t> arcs;
  std::function<bool(std::size_t)> dfs = [&](std::size_t u) -> bool {
    if (u == sink) return true;
    on_path[u] = true;
    for (std::size_t a : g.out(u)) {
      const std::size_t v = g.arc(a).to;
      if (on_path[v] || !alive[v] || !tight(a)) continue;
      arcs.push_back(a);
      if (dfs(v)) return true;
      arcs.pop_back();
    }
    on_path[u] = false;
    return false;
  };
  if (!dfs(source)) return std::nullopt;
  return arcs;
}

inline Path arcs_to_path(const IndexedGraph& g, std::size_t trip, const std::vector<std::size_t>& arcs,
                         std::size_t source) {
  Path p{trip, {g.node_id(source)}};
  for (std::size_t a : arcs) p.nodes.push_back(g.node_id(g.arc(a).to));
  return p;
}

/// Routes each trip's full demand on its shortest path under frozen edge
/// costs. Throws Unreachable for a trip with no source-sink path.
inline FlowAssignment all_or_nothing(const Instance& inst, const std::map<EdgeKey, double>& edge_costs) {
  inst.validate();
  const IndexedGraph g(inst.network);
  std::vector<double> w(g.arc_count(), 0.0);
  for (std::size_t a = 0; a < g.arc_count(); ++a) {
    const EdgeKey k = g.arc(a).edge->key();
    auto it = edge_costs.find(k);
    if (it == edge_costs.end()) throw InvalidNetwork("missing frozen cost for an edge");
    if (!(it->second >= 0.0)) throw InvalidNetwork("frozen edge costs must be non-negative");
    w[a] = it->second;
  }
  std::vector<PathFlow> flows;
  for (std::size_t m = 0; m < inst.trips.size(); ++m) {
    const std::size_t s = g.node_index(inst.trips[m].source);
    const std::size_t t = g.node_index(inst.trips[m].sink);
    auto arcs = shortest_path_arcs(g, s, t, w);
    if (!arcs) throw Unreachable(m);
    flows.push_back({arcs_to_path(g, m, *arcs, s), inst.trips[m].demand});
  }
  return FlowAssignment::from_paths(inst, std::move(flows));
}

}  // namespace netdesign

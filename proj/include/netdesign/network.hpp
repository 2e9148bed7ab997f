#pragma once

// Directed transport networks, trips and simple paths.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "netdesign/cost_model.hpp"
#include "netdesign/errors.hpp"

namespace netdesign {

using NodeId = std::uint32_t;

inline constexpr double kInfiniteCapacity = std::numeric_limits<double>::infinity();

struct EdgeKey {
  NodeId from;
  NodeId to;
  auto operator<=>(const EdgeKey&) const = default;
};

struct Edge {
  NodeId from;
  NodeId to;
  CostModel cost;
  double capacity = kInfiniteCapacity;

  EdgeKey key() const noexcept { return {from, to}; }
  bool operator==(const Edge&) const = default;
};

/// A directed graph with at most one edge per ordered node pair. Edges are
/// kept ordered by (from, to), so successor lists come out sorted by node id.
class Network {
 public:
  Network() = default;

  Network& add_node(NodeId n) {
    nodes_.insert(n);
    return *this;
  }

  /// Adds the edge and its endpoints. A second edge on the same ordered pair
  /// is rejected.
  Network& add_edge(Edge e) {
    if (e.from == e.to) throw InvalidNetwork("self-loop on node " + std::to_string(e.from));
    if (!(e.capacity > 0.0)) throw InvalidNetwork("edge capacity must be positive");
    auto [it, inserted] = edges_.emplace(e.key(), e);
    if (!inserted) {
      throw InvalidNetwork("duplicate edge " + std::to_string(e.from) + "->" + std::to_string(e.to));
    }
    nodes_.insert(e.from);
    nodes_.insert(e.to);
    return *this;
  }

  Network& add_edge(NodeId from, NodeId to, CostModel cost, double capacity = kInfiniteCapacity) {
    return add_edge(Edge{from, to, std::move(cost), capacity});
  }

  /// Adds a->b->c->... along `nodes`, every edge sharing one cost model.
  Network& add_chain(std::initializer_list<NodeId> nodes, const CostModel& cost,
                     double capacity = kInfiniteCapacity) {
    std::vector<NodeId> seq(nodes);
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) add_edge(seq[i], seq[i + 1], cost, capacity);
    return *this;
  }

  const std::set<NodeId>& nodes() const noexcept { return nodes_; }
  const std::map<EdgeKey, Edge>& edges() const noexcept { return edges_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  bool has_node(NodeId n) const { return nodes_.count(n) != 0; }
  bool has_edge(NodeId from, NodeId to) const { return edges_.count({from, to}) != 0; }

  const Edge* find_edge(NodeId from, NodeId to) const {
    auto it = edges_.find({from, to});
    return it == edges_.end() ? nullptr : &it->second;
  }

  const Edge& edge(NodeId from, NodeId to) const {
    const Edge* e = find_edge(from, to);
    if (!e) throw InvalidNetwork("no edge " + std::to_string(from) + "->" + std::to_string(to));
    return *e;
  }

  /// Successors of `n` in increasing node-id order.
  std::vector<NodeId> successors(NodeId n) const {
    std::vector<NodeId> out;
    for (auto it = edges_.lower_bound({n, 0}); it != edges_.end() && it->first.from == n; ++it) {
      out.push_back(it->first.to);
    }
    return out;
  }

  bool operator==(const Network&) const = default;

 private:
  std::set<NodeId> nodes_;
  std::map<EdgeKey, Edge> edges_;
};

/// True iff every node and edge of `sub` appears in `super` with identical
/// cost model and capacity.
inline bool is_subgraph(const Network& sub, const Network& super) {
  for (NodeId n : sub.nodes()) {
    if (!super.has_node(n)) return false;
  }
  for (const auto& [key, e] : sub.edges()) {
    const Edge* other = super.find_edge(key.from, key.to);
    if (!other || !(*other == e)) return false;
  }
  return true;
}

struct Trip {
  NodeId source;
  NodeId sink;
  double demand;
  bool operator==(const Trip&) const = default;
};

using TripSet = std::vector<Trip>;

inline void validate_trip(const Trip& t) {
  if (t.source == t.sink) throw InvalidNetwork("trip source equals sink");
  if (!(t.demand > 0.0) || !std::isfinite(t.demand)) throw InvalidNetwork("trip demand must be positive");
}

/// A simple path, stored as its node sequence.
struct Path {
  std::size_t trip = 0;
  std::vector<NodeId> nodes;

  std::size_t edge_count() const noexcept { return nodes.empty() ? 0 : nodes.size() - 1; }

  std::vector<EdgeKey> edges() const {
    std::vector<EdgeKey> out;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) out.push_back({nodes[i], nodes[i + 1]});
    return out;
  }

  /// Node sequence joined by '-', e.g. "0-5-6-2-3".
  std::string key() const {
    std::string s;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (i) s += '-';
      s += std::to_string(nodes[i]);
    }
    return s;
  }

  bool contains_edge(EdgeKey e) const {
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
      if (nodes[i] == e.from && nodes[i + 1] == e.to) return true;
    }
    return false;
  }

  bool operator==(const Path&) const = default;
  auto operator<=>(const Path&) const = default;
};

/// Sum of constant edge costs along the path.
inline double constant_path_cost(const Network& net, const Path& p) {
  double c = 0.0;
  for (const EdgeKey& k : p.edges()) c += net.edge(k.from, k.to).cost.evaluate(0.0);
  return c;
}

/// True iff `p` is a simple walk along edges of `net` from the trip's source to its sink.
inline bool is_valid_path(const Network& net, const Trip& trip, const Path& p) {
  if (p.nodes.size() < 2 || p.nodes.front() != trip.source || p.nodes.back() != trip.sink) return false;
  std::set<NodeId> seen(p.nodes.begin(), p.nodes.end());
  if (seen.size() != p.nodes.size()) return false;
  for (const EdgeKey& k : p.edges()) {
    if (!net.has_edge(k.from, k.to)) return false;
  }
  return true;
}

/// Per-trip path lists.
struct PathSet {
  std::vector<std::vector<Path>> per_trip;

  std::size_t size() const {
    std::size_t n = 0;
    for (const auto& v : per_trip) n += v.size();
    return n;
  }
  std::vector<Path> all() const {
    std::vector<Path> out;
    for (const auto& v : per_trip) out.insert(out.end(), v.begin(), v.end());
    return out;
  }
};

inline constexpr std::size_t kDefaultPathLimit = 10000;

/// All simple source-sink paths of `trip`, in lexicographic order of node
/// sequences. Throws PathLimitExceeded when more than `limit` exist.
inline std::vector<Path> enumerate_paths(const Network& net, const Trip& trip, std::size_t trip_index = 0,
                                         std::size_t limit = kDefaultPathLimit) {
  std::vector<Path> out;
  if (!net.has_node(trip.source) || !net.has_node(trip.sink)) return out;

  std::map<NodeId, std::vector<NodeId>> succ;
  for (NodeId n : net.nodes()) succ[n] = net.successors(n);

  std::vector<NodeId> stack{trip.source};
  std::set<NodeId> on_path{trip.source};
  // Explicit DFS keeps deep grids off the call stack.
  std::vector<std::size_t> cursor{0};
  while (!stack.empty()) {
    const NodeId u = stack.back();
    if (u == trip.sink) {
      if (out.size() == limit) throw PathLimitExceeded(limit);
      out.push_back(Path{trip_index, stack});
      on_path.erase(u);
      stack.pop_back();
      cursor.pop_back();
      continue;
    }
    const auto& next = succ[u];
    std::size_t& i = cursor.back();
    while (i < next.size() && on_path.count(next[i])) ++i;
    if (i == next.size()) {
      on_path.erase(u);
      stack.pop_back();
      cursor.pop_back();
      continue;
    }
    const NodeId v = next[i++];
    stack.push_back(v);
    on_path.insert(v);
    cursor.push_back(0);
  }
  return out;
}

inline PathSet enumerate_all_paths(const Network& net, const TripSet& trips,
                                   std::size_t limit = kDefaultPathLimit) {
  PathSet ps;
  for (std::size_t m = 0; m < trips.size(); ++m) ps.per_trip.push_back(enumerate_paths(net, trips[m], m, limit));
  return ps;
}

/// Node and edge set union. Operands sharing an ordered pair must agree on
/// its cost model and capacity.
inline Network graph_union(const Network& base, std::span<const Network> additions) {
  Network out = base;
  for (const Network& add : additions) {
    for (NodeId n : add.nodes()) out.add_node(n);
    for (const auto& [key, e] : add.edges()) {
      if (const Edge* existing = out.find_edge(key.from, key.to)) {
        if (!(*existing == e)) {
          throw TemplateConsistencyError("operands disagree on edge " + std::to_string(key.from) + "->" +
                                         std::to_string(key.to));
        }
        continue;
      }
      out.add_edge(e);
    }
  }
  return out;
}

inline Network graph_union(const Network& a, const Network& b) {
  return graph_union(a, std::span<const Network>(&b, 1));
}

/// Paths for `trip` present in base (+) addition but not in base.
inline std::vector<Path> added_paths(const Network& base, const Network& addition, const Trip& trip,
                                     std::size_t trip_index = 0, std::size_t limit = kDefaultPathLimit) {
  const auto before = enumerate_paths(base, trip, trip_index, limit);
  const auto after = enumerate_paths(graph_union(base, addition), trip, trip_index, limit);
  std::vector<Path> out;
  std::set_difference(after.begin(), after.end(), before.begin(), before.end(), std::back_inserter(out));
  return out;
}

}  // namespace netdesign

#pragma once

// Template graphs and the two building blocks of incremental design: the
// trip spanning tree (initial feasible network) and trip path graphs (the
// unit of addition).

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "netdesign/network.hpp"

namespace netdesign {

/// Network designated as the universe every construction must live in.
struct TemplateGraph {
  Network graph;
};

/// Square lattice with both directions on every adjacency; node id = row * cols + col.
inline TemplateGraph build_grid_template(std::size_t rows, std::size_t cols, const CostModel& cost,
                                         double capacity) {
  if (rows == 0 || cols == 0) throw BadParams("grid needs at least one row and one column");
  TemplateGraph t;
  auto id = [cols](std::size_t r, std::size_t c) { return static_cast<NodeId>(r * cols + c); };
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      t.graph.add_node(id(r, c));
      if (c + 1 < cols) {
        t.graph.add_edge(id(r, c), id(r, c + 1), cost, capacity);
        t.graph.add_edge(id(r, c + 1), id(r, c), cost, capacity);
      }
      if (r + 1 < rows) {
        t.graph.add_edge(id(r, c), id(r + 1, c), cost, capacity);
        t.graph.add_edge(id(r + 1, c), id(r, c), cost, capacity);
      }
    }
  }
  return t;
}

/// One failed defining property. `property` is 1-based as in the
/// definitions; 0 flags a graph that is not a subgraph of the template.
struct Violation {
  int property = 0;
  std::string message;
  std::optional<std::size_t> trip;
  std::optional<NodeId> node;
  std::optional<EdgeKey> edge;
};

using ViolationList = std::vector<Violation>;

/// Either a validated value or the list of properties it failed.
template <typename T>
struct Validated {
  std::optional<T> value;
  ViolationList violations;

  bool ok() const noexcept { return value.has_value(); }
  const T& operator*() const { return *value; }
  const T* operator->() const { return &*value; }
};

class TripSpanningTree {
 public:
  const Network& graph() const noexcept { return graph_; }
  const TripSet& trips() const noexcept { return trips_; }
  bool operator==(const TripSpanningTree&) const = default;

 private:
  TripSpanningTree(Network g, TripSet t) : graph_(std::move(g)), trips_(std::move(t)) {}
  friend Validated<TripSpanningTree> validate_trip_spanning_tree(const Network&, const TripSet&,
                                                                 const TemplateGraph*, std::size_t);
  Network graph_;
  TripSet trips_;
};

class TripPathGraph {
 public:
  const Network& graph() const noexcept { return graph_; }
  std::size_t trip_index() const noexcept { return trip_index_; }
  const Trip& trip() const noexcept { return trip_; }
  std::size_t candidate_index() const noexcept { return candidate_index_; }
  /// The single source-sink path this graph consists of.
  const Path& path() const noexcept { return path_; }
  bool operator==(const TripPathGraph&) const = default;

 private:
  TripPathGraph(Network g, std::size_t m, Trip t, std::size_t x, Path p)
      : graph_(std::move(g)), trip_index_(m), trip_(t), candidate_index_(x), path_(std::move(p)) {}
  friend Validated<TripPathGraph> validate_trip_path_graph(const Network&, const Trip&, std::size_t,
                                                           std::size_t, const TemplateGraph*, std::size_t);
  Network graph_;
  std::size_t trip_index_;
  Trip trip_;
  std::size_t candidate_index_;
  Path path_;
};

inline Validated<TripSpanningTree> validate_trip_spanning_tree(const Network& candidate, const TripSet& trips,
                                                               const TemplateGraph* tmpl = nullptr,
                                                               std::size_t limit = kDefaultPathLimit) {
  Validated<TripSpanningTree> result;
  auto fail = [&result](Violation v) { result.violations.push_back(std::move(v)); };

  if (tmpl && !is_subgraph(candidate, tmpl->graph)) {
    fail({0, "graph is not a subgraph of the template", {}, {}, {}});
  }

  std::vector<std::vector<Path>> paths(trips.size());
  for (std::size_t m = 0; m < trips.size(); ++m) {
    const Trip& t = trips[m];
    validate_trip(t);
    bool endpoints = true;
    for (NodeId n : {t.source, t.sink}) {
      if (!candidate.has_node(n)) {
        fail({1, "trip endpoint missing from graph", m, n, {}});
        endpoints = false;
      }
    }
    if (!endpoints) continue;
    paths[m] = enumerate_paths(candidate, t, m, limit);
    if (paths[m].size() != 1) {
      fail({2, "trip has " + std::to_string(paths[m].size()) + " source-sink paths, expected exactly 1", m, {},
            {}});
    }
  }

  std::set<NodeId> covered;
  std::map<EdgeKey, double> load;
  for (std::size_t m = 0; m < trips.size(); ++m) {
    for (const Path& p : paths[m]) {
      covered.insert(p.nodes.begin(), p.nodes.end());
      for (const EdgeKey& k : p.edges()) load[k] += trips[m].demand;
    }
  }
  for (NodeId n : candidate.nodes()) {
    if (!covered.count(n)) fail({3, "node lies on no trip path", {}, n, {}});
  }
  for (const auto& [k, demand] : load) {
    const double cap = candidate.edge(k.from, k.to).capacity;
    if (demand > cap) {
      fail({4, "routed demand " + std::to_string(demand) + " exceeds capacity " + std::to_string(cap), {}, {},
            k});
    }
  }

  if (result.violations.empty()) result.value = TripSpanningTree(candidate, trips);
  return result;
}

inline Validated<TripPathGraph> validate_trip_path_graph(const Network& candidate, const Trip& trip,
                                                         std::size_t trip_index = 0,
                                                         std::size_t candidate_index = 0,
                                                         const TemplateGraph* tmpl = nullptr,
                                                         std::size_t limit = kDefaultPathLimit) {
  Validated<TripPathGraph> result;
  auto fail = [&result](Violation v) { result.violations.push_back(std::move(v)); };
  validate_trip(trip);

  if (tmpl && !is_subgraph(candidate, tmpl->graph)) {
    fail({0, "graph is not a subgraph of the template", {}, {}, {}});
  }
  bool endpoints = true;
  for (NodeId n : {trip.source, trip.sink}) {
    if (!candidate.has_node(n)) {
      fail({1, "trip endpoint missing from graph", trip_index, n, {}});
      endpoints = false;
    }
  }
  std::vector<Path> paths;
  if (endpoints) {
    paths = enumerate_paths(candidate, trip, trip_index, limit);
    if (paths.size() != 1) {
      fail({2, "graph has " + std::to_string(paths.size()) + " source-sink paths, expected exactly 1",
            trip_index, {}, {}});
    }
  }
  std::set<NodeId> on_path;
  for (const Path& p : paths) on_path.insert(p.nodes.begin(), p.nodes.end());
  for (NodeId n : candidate.nodes()) {
    if (!on_path.count(n)) fail({3, "node lies off the source-sink path", trip_index, n, {}});
  }
  if (paths.size() == 1) {
    for (const auto& [k, e] : candidate.edges()) {
      if (!paths.front().contains_edge(k)) fail({3, "edge lies off the source-sink path", trip_index, {}, k});
    }
  }

  if (result.violations.empty()) {
    result.value = TripPathGraph(candidate, trip_index, trip, candidate_index, paths.front());
  }
  return result;
}

/// Builds the path graph along `nodes`, copying edges from the template.
inline Network path_graph_from_template(const Network& tmpl, const std::vector<NodeId>& nodes) {
  Network g;
  for (NodeId n : nodes) g.add_node(n);
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) g.add_edge(tmpl.edge(nodes[i], nodes[i + 1]));
  return g;
}

/// Subgraph of `tmpl` induced by an explicit edge list.
inline Network subgraph_from_edges(const Network& tmpl, const std::vector<EdgeKey>& edges) {
  Network g;
  for (const EdgeKey& k : edges) {
    if (g.has_edge(k.from, k.to)) continue;
    g.add_edge(tmpl.edge(k.from, k.to));
  }
  return g;
}

}  // namespace netdesign

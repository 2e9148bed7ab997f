#pragma once

// Routing instances, flow assignments and solver results shared by the MC,
// SO and UE solvers.

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "netdesign/network.hpp"

namespace netdesign {

/// The triple (network, trips, edge costs); cost models live on the edges.
struct Instance {
  Network network;
  TripSet trips;

  void validate() const {
    if (trips.empty()) throw InvalidNetwork("instance has no trips");
    for (std::size_t m = 0; m < trips.size(); ++m) {
      validate_trip(trips[m]);
      if (!network.has_node(trips[m].source) || !network.has_node(trips[m].sink)) {
        throw InvalidNetwork("trip " + std::to_string(m) + " endpoint is not in the network");
      }
    }
  }

  double total_demand() const {
    double d = 0.0;
    for (const Trip& t : trips) d += t.demand;
    return d;
  }
};

/// Contiguous view of a Network for the solvers. Edge i corresponds to the
/// i-th entry of Network::edges() (ordered by (from, to)).
class IndexedGraph {
 public:
  struct Arc {
    std::size_t from;
    std::size_t to;
    const Edge* edge;
  };

  explicit IndexedGraph(const Network& net) {
    for (NodeId n : net.nodes()) {
      index_.emplace(n, ids_.size());
      ids_.push_back(n);
    }
    out_.resize(ids_.size());
    in_.resize(ids_.size());
    for (const auto& [key, e] : net.edges()) {
      const std::size_t i = arcs_.size();
      arcs_.push_back({index_.at(key.from), index_.at(key.to), &e});
      out_[arcs_.back().from].push_back(i);
      in_[arcs_.back().to].push_back(i);
      arc_index_.emplace(key, i);
    }
  }

  std::size_t node_count() const noexcept { return ids_.size(); }
  std::size_t arc_count() const noexcept { return arcs_.size(); }
  const Arc& arc(std::size_t i) const { return arcs_[i]; }
  const std::vector<Arc>& arcs() const noexcept { return arcs_; }
  NodeId node_id(std::size_t i) const { return ids_[i]; }
  std::size_t node_index(NodeId n) const { return index_.at(n); }
  /// Outgoing arcs of node index `i`, ordered by head node id.
  const std::vector<std::size_t>& out(std::size_t i) const { return out_[i]; }
  const std::vector<std::size_t>& in(std::size_t i) const { return in_[i]; }
  std::size_t arc_index(EdgeKey k) const { return arc_index_.at(k); }

  std::vector<std::size_t> path_arcs(const Path& p) const {
    std::vector<std::size_t> out;
    out.reserve(p.edge_count());
    for (const EdgeKey& k : p.edges()) out.push_back(arc_index(k));
    return out;
  }

 private:
  std::vector<NodeId> ids_;
  std::unordered_map<NodeId, std::size_t> index_;
  std::vector<Arc> arcs_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<std::vector<std::size_t>> in_;
  std::map<EdgeKey, std::size_t> arc_index_;
};

struct PathFlow {
  Path path;
  double flow = 0.0;
  bool operator==(const PathFlow&) const = default;
};

/// Non-negative path flows with derived edge flows and per-trip totals.
struct FlowAssignment {
  std::vector<PathFlow> path_flows;
  std::map<EdgeKey, double> edge_flows;
  std::vector<double> trip_totals;

  /// Builds the assignment from path flows, dropping exact zeros and
  /// ordering paths by (trip, node sequence).
  static FlowAssignment from_paths(const Instance& inst, std::vector<PathFlow> flows) {
    FlowAssignment a;
    a.trip_totals.assign(inst.trips.size(), 0.0);
    for (const auto& [key, e] : inst.network.edges()) a.edge_flows[key] = 0.0;
    std::sort(flows.begin(), flows.end(), [](const PathFlow& x, const PathFlow& y) { return x.path < y.path; });
    for (auto& pf : flows) {
      if (pf.flow == 0.0) continue;
      if (pf.flow < 0.0) throw InvalidNetwork("negative path flow on " + pf.path.key());
      a.trip_totals.at(pf.path.trip) += pf.flow;
      for (const EdgeKey& k : pf.path.edges()) a.edge_flows.at(k) += pf.flow;
      a.path_flows.push_back(std::move(pf));
    }
    return a;
  }

  double edge_flow(EdgeKey k) const {
    auto it = edge_flows.find(k);
    return it == edge_flows.end() ? 0.0 : it->second;
  }

  double path_flow(const std::string& key) const {
    for (const auto& pf : path_flows) {
      if (pf.path.key() == key) return pf.flow;
    }
    return 0.0;
  }

  bool operator==(const FlowAssignment&) const = default;
};

/// Total travel time sum_e x_e c_e(x_e).
inline double total_travel_time(const Network& net, const FlowAssignment& a) {
  double total = 0.0;
  for (const auto& [key, x] : a.edge_flows) {
    if (x > 0.0) total += x * net.edge(key.from, key.to).cost.evaluate(x);
  }
  return total;
}

/// Travel time of `p` under the assignment's edge flows.
inline double path_travel_time(const Network& net, const FlowAssignment& a, const Path& p) {
  double c = 0.0;
  for (const EdgeKey& k : p.edges()) c += net.edge(k.from, k.to).cost.evaluate(a.edge_flow(k));
  return c;
}

/// Marginal cost k'_p of `p` under the assignment's edge flows.
inline double path_marginal_cost(const Network& net, const FlowAssignment& a, const Path& p) {
  double c = 0.0;
  for (const EdgeKey& k : p.edges()) c += net.edge(k.from, k.to).cost.marginal(a.edge_flow(k));
  return c;
}

struct SolverConfig {
  double relative_gap_tol = 1e-8;
  std::size_t max_iterations = 100000;
  double line_search_tol = 1e-12;
  double capacity_margin = 1e-9;
  /// Pairwise Frank-Wolfe also waits until, on every trip, each path carrying
  /// flow is within this relative distance of the cheapest path.
  double equalization_tol = 1e-10;
  /// 1 starts from an all-or-nothing assignment; k > 1 splits each trip
  /// uniformly over its k cheapest free-flow paths.
  std::size_t initial_split = 1;
  std::size_t path_limit = kDefaultPathLimit;
  /// Record the objective after every iteration in SolveResult::objective_trace.
  bool record_trace = false;
};

enum class CertificateKind { McDualFeasible, SoMarginalEqualized, UeWardrop };

inline std::string to_string(CertificateKind k) {
  switch (k) {
    case CertificateKind::McDualFeasible: return "mc-dual-feasible";
    case CertificateKind::SoMarginalEqualized: return "so-marginal-equalized";
    case CertificateKind::UeWardrop: return "ue-wardrop";
  }
  return "unknown";
}

/// Spread of the per-path optimality measure on one trip: used paths range
/// over [min_used, max_used]; best_any is the minimum over all paths.
struct TripSpread {
  double min_used = 0.0;
  double max_used = 0.0;
  double best_any = 0.0;
};

struct OptimalityCertificate {
  CertificateKind kind = CertificateKind::UeWardrop;
  double max_violation = 0.0;
  double tolerance = 0.0;
  std::vector<TripSpread> trips;

  bool accepted() const noexcept { return max_violation <= tolerance; }
};

enum class Routing { MC, SO, UE };

inline std::string to_string(Routing r) {
  switch (r) {
    case Routing::MC: return "mc";
    case Routing::SO: return "so";
    case Routing::UE: return "ue";
  }
  return "unknown";
}

inline Routing parse_routing(const std::string& s) {
  if (s == "mc") return Routing::MC;
  if (s == "so") return Routing::SO;
  if (s == "ue") return Routing::UE;
  throw ParseError("unknown routing '" + s + "' (expected mc, so or ue)");
}

/// Dual prices of the MC path LP: one per trip (conservation rows) and one
/// non-negative price per capacitated edge.
struct McDuals {
  std::vector<double> trip_price;
  std::map<EdgeKey, double> edge_price;
};

struct SolveResult {
  Routing routing = Routing::MC;
  FlowAssignment assignment;
  /// sum_e x_e c_e(x_e)
  double total_cost = 0.0;
  /// Value of the minimized objective (LP cost, SO cost or Beckmann potential).
  double objective = 0.0;
  /// UE: common used-path cost C_m. SO and MC: cheapest used-path cost.
  std::vector<double> per_trip_cost;
  std::vector<double> per_trip_max_cost;
  std::size_t iterations = 0;
  double relative_gap = 0.0;
  OptimalityCertificate certificate;
  McDuals duals;
  std::vector<double> objective_trace;
};

}  // namespace netdesign

#pragma once

// Solver-independent optimality checks.
//
// SO: every used path of a trip has the minimum marginal path cost k'_p.
// UE: every used path of a trip has the minimum travel time (Wardrop).
// MC: the stored LP duals are feasible and complementary to the flows.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <vector>

#include "netdesign/flow.hpp"
#include "netdesign/shortest_path.hpp"

namespace netdesign {

inline constexpr double kCertificateTol = 1e-6;

/// Flow below this fraction of the trip demand counts as unused.
inline constexpr double kUsedPathFraction = 1e-10;

namespace detail {

/// Cheapest path cost of `trip` under per-edge weights, by enumeration when
/// the path set is small and by label-setting otherwise.
template <typename WeightFn>
double cheapest_path(const Instance& inst, std::size_t m, std::size_t limit, WeightFn&& weight) {
  try {
    const auto paths = enumerate_paths(inst.network, inst.trips[m], m, limit);
    double best = std::numeric_limits<double>::infinity();
    for (const Path& p : paths) {
      double c = 0.0;
      for (const EdgeKey& k : p.edges()) c += weight(k);
      best = std::min(best, c);
    }
    return best;
  } catch (const PathLimitExceeded&) {
    const IndexedGraph g(inst.network);
    std::vector<double> w(g.arc_count());
    for (std::size_t a = 0; a < g.arc_count(); ++a) w[a] = weight(g.arc(a).edge->key());
    const auto dist = distances_to(g, g.node_index(inst.trips[m].sink), w);
    return dist[g.node_index(inst.trips[m].source)];
  }
}

}  // namespace detail

/// Recomputes the optimality certificate of `result` from the instance and
/// the assignment alone. Reports violations; never throws on them.
inline OptimalityCertificate verify_certificate(const Instance& inst, const SolveResult& result,
                                                CertificateKind kind,
                                                std::size_t limit = kDefaultPathLimit) {
  OptimalityCertificate cert;
  cert.kind = kind;
  cert.tolerance = kCertificateTol;
  const FlowAssignment& a = result.assignment;
  const Network& net = inst.network;

  if (kind == CertificateKind::McDualFeasible) {
    // Scale for relative tolerances: the most expensive path considered.
    double scale = 1.0;
    const McDuals& duals = result.duals;
    auto price = [&duals](EdgeKey k) {
      auto it = duals.edge_price.find(k);
      return it == duals.edge_price.end() ? 0.0 : it->second;
    };
    double worst = 0.0;
    for (std::size_t m = 0; m < inst.trips.size(); ++m) {
      const auto paths = enumerate_paths(net, inst.trips[m], m, limit);
      TripSpread spread{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
                        std::numeric_limits<double>::infinity()};
      const double pi = m < duals.trip_price.size() ? duals.trip_price[m] : 0.0;
      for (const Path& p : paths) {
        const double cp = constant_path_cost(net, p);
        scale = std::max(scale, std::abs(cp));
        spread.best_any = std::min(spread.best_any, cp);
        double rc = cp - pi;
        for (const EdgeKey& k : p.edges()) rc += price(k);
        worst = std::max(worst, -rc);  // dual feasibility
        const double x = a.path_flow(p.key());
        if (x > kUsedPathFraction * inst.trips[m].demand) {
          worst = std::max(worst, std::abs(rc));  // complementary slackness
          spread.min_used = std::min(spread.min_used, cp);
          spread.max_used = std::max(spread.max_used, cp);
        }
      }
      // Conservation.
      const double total = m < a.trip_totals.size() ? a.trip_totals[m] : 0.0;
      worst = std::max(worst, std::abs(total - inst.trips[m].demand) / inst.trips[m].demand);
      cert.trips.push_back(spread);
    }
    for (const auto& [k, e] : net.edges()) {
      const double mu = price(k);
      const double x = a.edge_flow(k);
      worst = std::max(worst, -mu);
      if (std::isfinite(e.capacity)) {
        worst = std::max(worst, (x - e.capacity) / (1.0 + e.capacity));
        if (mu > 0.0) worst = std::max(worst, mu * (e.capacity - x) / (1.0 + e.capacity));
      }
    }
    cert.max_violation = worst / scale;
    return cert;
  }

  const bool marginal = kind == CertificateKind::SoMarginalEqualized;
  auto weight = [&](EdgeKey k) {
    const CostModel& c = net.edge(k.from, k.to).cost;
    const double x = a.edge_flow(k);
    return marginal ? c.marginal(x) : c.evaluate(x);
  };
  double worst = 0.0;
  for (std::size_t m = 0; m < inst.trips.size(); ++m) {
    TripSpread spread{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(), 0.0};
    for (const PathFlow& pf : a.path_flows) {
      if (pf.path.trip != m || pf.flow <= kUsedPathFraction * inst.trips[m].demand) continue;
      double c = 0.0;
      for (const EdgeKey& k : pf.path.edges()) c += weight(k);
      spread.min_used = std::min(spread.min_used, c);
      spread.max_used = std::max(spread.max_used, c);
    }
    spread.best_any = detail::cheapest_path(inst, m, limit, weight);
    const double total = m < a.trip_totals.size() ? a.trip_totals[m] : 0.0;
    worst = std::max(worst, std::abs(total - inst.trips[m].demand) / inst.trips[m].demand);
    if (std::isfinite(spread.max_used)) {
      worst = std::max(worst, (spread.max_used - spread.best_any) / (1.0 + std::abs(spread.best_any)));
    } else {
      worst = std::numeric_limits<double>::infinity();  // no used path at all
    }
    cert.trips.push_back(spread);
  }
  cert.max_violation = worst;
  return cert;
}

/// Largest violation of non-negativity, per-trip conservation and, when
/// `capacities` is set, edge capacities (relative to demand / capacity).
inline double feasibility_violation(const Instance& inst, const FlowAssignment& a, bool capacities) {
  double worst = 0.0;
  std::vector<double> totals(inst.trips.size(), 0.0);
  std::map<EdgeKey, double> recomputed;
  for (const PathFlow& pf : a.path_flows) {
    worst = std::max(worst, -pf.flow);
    totals.at(pf.path.trip) += pf.flow;
    if (!is_valid_path(inst.network, inst.trips.at(pf.path.trip), pf.path)) return std::numeric_limits<double>::infinity();
    for (const EdgeKey& k : pf.path.edges()) recomputed[k] += pf.flow;
  }
  for (std::size_t m = 0; m < inst.trips.size(); ++m) {
    worst = std::max(worst, std::abs(totals[m] - inst.trips[m].demand) / inst.trips[m].demand);
  }
  for (const auto& [k, e] : inst.network.edges()) {
    const double x = recomputed.count(k) ? recomputed[k] : 0.0;
    worst = std::max(worst, std::abs(x - a.edge_flow(k)) / (1.0 + x));
    if (capacities && std::isfinite(e.capacity)) worst = std::max(worst, (x - e.capacity) / e.capacity);
  }
  return worst;
}

}  // namespace netdesign

#pragma once

// Minimum-cost multi-commodity flow on the path formulation:
//
//   min  sum_p x_p c_p
//   s.t. sum_{p through e} x_p <= u_e     for every capacitated edge
//        sum_{p in P^m} x_p   = d^m      for every trip
//        x_p >= 0
//
// after enumerating every simple path of every trip.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <vector>

#include "netdesign/certificate.hpp"
#include "netdesign/flow.hpp"
#include "netdesign/simplex.hpp"

namespace netdesign {

inline SolveResult solve_mc(const Instance& inst, std::size_t limit = kDefaultPathLimit) {
  inst.validate();
  for (const auto& [k, e] : inst.network.edges()) {
    if (!e.cost.is_constant()) throw BadParams("MC routing needs constant edge costs");
  }

  const PathSet paths = enumerate_all_paths(inst.network, inst.trips, limit);
  const std::vector<Path> columns = paths.all();
  for (std::size_t m = 0; m < inst.trips.size(); ++m) {
    if (paths.per_trip[m].empty()) throw Unreachable(m);
  }

  // Capacity rows only for finite capacities on edges some path uses.
  std::map<EdgeKey, std::size_t> cap_row;
  for (const Path& p : columns) {
    for (const EdgeKey& k : p.edges()) {
      if (std::isfinite(inst.network.edge(k.from, k.to).capacity) && !cap_row.count(k)) {
        cap_row.emplace(k, 0);
      }
    }
  }
  lp::Problem lp;
  const std::size_t n = columns.size();
  for (const Path& p : columns) lp.cost.push_back(constant_path_cost(inst.network, p));
  std::size_t r = 0;
  for (auto& [k, row] : cap_row) {
    row = r++;
    std::vector<double> a(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      if (columns[j].contains_edge(k)) a[j] = 1.0;
    }
    lp.rows.push_back(std::move(a));
    lp.sense.push_back(lp::RowSense::LessEqual);
    lp.rhs.push_back(inst.network.edge(k.from, k.to).capacity);
  }
  const std::size_t first_trip_row = r;
  for (std::size_t m = 0; m < inst.trips.size(); ++m) {
    std::vector<double> a(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      if (columns[j].trip == m) a[j] = 1.0;
    }
    lp.rows.push_back(std::move(a));
    lp.sense.push_back(lp::RowSense::Equal);
    lp.rhs.push_back(inst.trips[m].demand);
  }

  const lp::Solution sol = lp::solve(lp);
  if (sol.status == lp::Status::Infeasible) throw Infeasible("capacity constraints cannot carry the trip demands");
  if (sol.status != lp::Status::Optimal) throw Infeasible("MC linear program is unbounded");

  SolveResult res;
  res.routing = Routing::MC;
  std::vector<PathFlow> flows;
  for (std::size_t j = 0; j < n; ++j) {
    if (sol.x[j] > 0.0) flows.push_back({columns[j], sol.x[j]});
  }
  res.assignment = FlowAssignment::from_paths(inst, std::move(flows));
  res.objective = sol.objective;
  res.total_cost = total_travel_time(inst.network, res.assignment);
  res.iterations = sol.pivots;
  res.relative_gap = 0.0;
  for (const auto& [k, row] : cap_row) res.duals.edge_price[k] = std::max(0.0, -sol.duals[row]);
  for (std::size_t m = 0; m < inst.trips.size(); ++m) res.duals.trip_price.push_back(sol.duals[first_trip_row + m]);

  res.per_trip_cost.assign(inst.trips.size(), std::numeric_limits<double>::infinity());
  res.per_trip_max_cost.assign(inst.trips.size(), 0.0);
  for (const PathFlow& pf : res.assignment.path_flows) {
    const double c = constant_path_cost(inst.network, pf.path);
    res.per_trip_cost[pf.path.trip] = std::min(res.per_trip_cost[pf.path.trip], c);
    res.per_trip_max_cost[pf.path.trip] = std::max(res.per_trip_max_cost[pf.path.trip], c);
  }
  res.certificate = verify_certificate(inst, res, CertificateKind::McDualFeasible, limit);
  return res;
}

}  // namespace netdesign

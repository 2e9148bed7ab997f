#pragma once

// Closed forms for single-trip networks of parallel source-sink paths.

#include <algorithm>
#include <cstddef>
#include <vector>

#include "netdesign/errors.hpp"
#include "netdesign/flow.hpp"

namespace netdesign {

/// MC value when every path can carry the whole demand: all of it goes on
/// the cheapest available path.
inline double parallel_mc_value(double spanning_cost, const std::vector<double>& candidate_costs,
                                const std::vector<std::size_t>& chosen, double demand) {
  double best = spanning_cost;
  for (std::size_t x : chosen) {
    if (x >= candidate_costs.size()) throw BadParams("chosen candidate index out of range");
    best = std::min(best, candidate_costs[x]);
  }
  return demand * best;
}

/// SO and UE value on n identical single-edge Greenshields paths. The
/// demand splits evenly, so each path carries d / n.
inline double parallel_uniform_value(Routing routing, std::size_t n_paths, double l, double v_max, double u,
                                     double demand) {
  if (routing == Routing::MC) throw BadParams("the uniform parallel form covers SO and UE only");
  if (n_paths == 0) throw BadParams("need at least one path");
  if (!(l > 0.0) || !(v_max > 0.0) || !(u > 0.0) || !(demand > 0.0)) {
    throw BadParams("parallel form parameters must be positive");
  }
  const double load = demand / (static_cast<double>(n_paths) * u);
  if (load >= 1.0) throw DomainError("demand reaches the combined capacity of the parallel paths");
  return demand * l / (v_max * (1.0 - load));
}

}  // namespace netdesign

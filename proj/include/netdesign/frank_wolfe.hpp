#pragma once

// System-optimal and user-equilibrium routing by Frank-Wolfe.
//
// Both problems minimize a separable convex potential over the product of
// per-trip path simplices:
//
//   SO:  sum_e x_e c_e(x_e)            gradient c*_e = c_e + x_e c'_e
//   UE:  sum_e int_0^{x_e} c_e         gradient c_e
//
// Every iteration solves the all-or-nothing subproblem under the current
// gradient, which gives the Frank-Wolfe duality gap
//
//   gap = sum_e g_e x_e - sum_m d^m min_{p in P^m} g_p
//
// and stops once gap / |potential| <= relative_gap_tol. The default
// pairwise variant then moves flow, trip by trip, from the most expensive
// used path to the all-or-nothing path with an exact line search; a step
// may empty the away path completely. The classic variant moves every trip
// toward the all-or-nothing vertex at once.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "netdesign/certificate.hpp"
#include "netdesign/flow.hpp"
#include "netdesign/shortest_path.hpp"

namespace netdesign {

enum class FrankWolfeVariant { Pairwise, Classic };

namespace detail {

enum class Potential { SystemOptimal, Beckmann };

class FrankWolfe {
 public:
  FrankWolfe(const Instance& inst, const SolverConfig& cfg, Potential potential, FrankWolfeVariant variant)
      : inst_(inst), cfg_(cfg), potential_(potential), variant_(variant), g_(inst.network) {
    limit_.resize(g_.arc_count());
    for (std::size_t a = 0; a < g_.arc_count(); ++a) {
      const double lim = g_.arc(a).edge->cost.domain_limit();
      // The model's own guard, tightened further when the config asks for a wider margin.
      limit_[a] = std::isfinite(lim) ? std::min(std::nextafter(lim, 0.0),
                                                lim / (1.0 - kGreenshieldsMargin) * (1.0 - cfg.capacity_margin))
                                     : lim;
    }
    active_.resize(inst.trips.size());
  }

  SolveResult run() {
    initialize();
    SolveResult res;
    res.routing = potential_ == Potential::SystemOptimal ? Routing::SO : Routing::UE;
    std::vector<double> grad(g_.arc_count());
    bool converged = false;
    std::size_t it = 0;
    double rel_gap = std::numeric_limits<double>::infinity();
    for (;; ++it) {
      recompute_edge_flows();
      for (std::size_t a = 0; a < g_.arc_count(); ++a) grad[a] = gradient(a, x_[a]);
      const double obj = objective();
      if (cfg_.record_trace) res.objective_trace.push_back(obj);

      double lower = 0.0;
      for (std::size_t a = 0; a < g_.arc_count(); ++a) lower += grad[a] * x_[a];
      std::vector<std::vector<std::size_t>> aon(inst_.trips.size());
      for (std::size_t m = 0; m < inst_.trips.size(); ++m) {
        aon[m] = shortest(m, grad);
        lower -= inst_.trips[m].demand * arcs_cost(aon[m], grad);
      }
      const double gap = std::max(0.0, lower);
      rel_gap = obj != 0.0 ? gap / std::abs(obj) : gap;
      double spread = 0.0;
      if (variant_ == FrankWolfeVariant::Pairwise) {
        for (std::size_t m = 0; m < inst_.trips.size(); ++m) {
          const double best = arcs_cost(aon[m], grad);
          for (const auto& ap : active_[m]) {
            if (ap.flow > 0.0) spread = std::max(spread, (arcs_cost(ap.arcs, grad) - best) / (1.0 + std::abs(best)));
          }
        }
      }
      if (rel_gap <= cfg_.relative_gap_tol && spread <= cfg_.equalization_tol) {
        converged = true;
        break;
      }
      if (it >= cfg_.max_iterations) break;

      if (variant_ == FrankWolfeVariant::Pairwise) {
        pairwise_sweep();
      } else {
        classic_step(aon, grad, it);
      }
    }
    if (!converged) {
      throw NotConverged("Frank-Wolfe stopped after " + std::to_string(it) + " iterations at relative gap " +
                         std::to_string(rel_gap));
    }

    std::vector<PathFlow> flows;
    for (const auto& trip_paths : active_) {
      for (const auto& ap : trip_paths) {
        if (ap.flow > 0.0) flows.push_back({ap.path, ap.flow});
      }
    }
    res.assignment = FlowAssignment::from_paths(inst_, std::move(flows));
    res.objective = objective();
    res.total_cost = total_travel_time(inst_.network, res.assignment);
    res.iterations = it;
    res.relative_gap = rel_gap;
    summarize_trip_costs(res);
    res.certificate = verify_certificate(inst_, res,
                                         potential_ == Potential::SystemOptimal ? CertificateKind::SoMarginalEqualized
                                                                                : CertificateKind::UeWardrop,
                                         cfg_.path_limit);
    return res;
  }

 private:
  struct ActivePath {
    Path path;
    std::vector<std::size_t> arcs;
    double flow = 0.0;
  };

  double gradient(std::size_t a, double x) const {
    const CostModel& c = g_.arc(a).edge->cost;
    return potential_ == Potential::SystemOptimal ? c.marginal(x) : c.evaluate(x);
  }

  double objective() const {
    double v = 0.0;
    for (std::size_t a = 0; a < g_.arc_count(); ++a) {
      const CostModel& c = g_.arc(a).edge->cost;
      v += potential_ == Potential::SystemOptimal ? c.effective(x_[a]) : c.beckmann_integral(x_[a]);
    }
    return v;
  }

  static double arcs_cost(const std::vector<std::size_t>& arcs, const std::vector<double>& w) {
    double c = 0.0;
    for (std::size_t a : arcs) c += w[a];
    return c;
  }

  std::vector<std::size_t> shortest(std::size_t m, const std::vector<double>& w) const {
    const std::size_t s = g_.node_index(inst_.trips[m].source);
    const std::size_t t = g_.node_index(inst_.trips[m].sink);
    auto arcs = shortest_path_arcs(g_, s, t, w);
    if (!arcs) throw Unreachable(m);
    return *arcs;
  }

  /// Index of the active path with these arcs, adding it with zero flow if new.
  std::size_t find_or_add(std::size_t m, const std::vector<std::size_t>& arcs) {
    auto& paths = active_[m];
    for (std::size_t i = 0; i < paths.size(); ++i) {
      if (paths[i].arcs == arcs) return i;
    }
    const std::size_t s = g_.node_index(inst_.trips[m].source);
    paths.push_back({arcs_to_path(g_, m, arcs, s), arcs, 0.0});
    return paths.size() - 1;
  }

  void recompute_edge_flows() {
    x_.assign(g_.arc_count(), 0.0);
    for (const auto& paths : active_) {
      for (const auto& ap : paths) {
        for (std::size_t a : ap.arcs) x_[a] += ap.flow;
      }
    }
  }

  bool interior() const {
    for (std::size_t a = 0; a < g_.arc_count(); ++a) {
      if (!(x_[a] < limit_[a])) return false;
    }
    return true;
  }

  /// Splits each trip uniformly over its k cheapest paths under free-flow gradients.
  void split_start(std::size_t k) {
    std::vector<double> w(g_.arc_count());
    for (std::size_t a = 0; a < g_.arc_count(); ++a) w[a] = gradient(a, 0.0);
    for (std::size_t m = 0; m < inst_.trips.size(); ++m) {
      auto paths = enumerate_paths(inst_.network, inst_.trips[m], m, cfg_.path_limit);
      if (paths.empty()) throw Unreachable(m);
      std::vector<std::pair<double, std::size_t>> order;
      std::vector<std::vector<std::size_t>> arcs(paths.size());
      for (std::size_t i = 0; i < paths.size(); ++i) {
        arcs[i] = g_.path_arcs(paths[i]);
        order.push_back({arcs_cost(arcs[i], w), i});
      }
      std::stable_sort(order.begin(), order.end(),
                       [](const auto& l, const auto& r) { return l.first < r.first; });
      const std::size_t take = std::min(k, order.size());
      active_[m].clear();
      for (std::size_t j = 0; j < take; ++j) {
        active_[m].push_back({paths[order[j].second], arcs[order[j].second], inst_.trips[m].demand / take});
      }
    }
    recompute_edge_flows();
  }

  void initialize() {
    inst_.validate();
    if (cfg_.initial_split > 1) {
      split_start(cfg_.initial_split);
    } else {
      std::vector<double> w(g_.arc_count());
      for (std::size_t a = 0; a < g_.arc_count(); ++a) w[a] = gradient(a, 0.0);
      for (std::size_t m = 0; m < inst_.trips.size(); ++m) {
        active_[m].clear();
        const std::size_t i = find_or_add(m, shortest(m, w));
        active_[m][i].flow = inst_.trips[m].demand;
      }
      recompute_edge_flows();
    }
    if (!interior() && cfg_.initial_split <= 8) split_start(8);
    if (!interior()) {
      throw CapacitySaturation("no interior starting flow: demand saturates an edge on every candidate start");
    }
  }

  /// Directional derivative of the potential at x + step * dir.
  double slope(const std::vector<std::pair<std::size_t, double>>& dir, double step) const {
    double d = 0.0;
    for (const auto& [a, delta] : dir) d += gradient(a, x_[a] + step * delta) * delta;
    return d;
  }

  /// Exact line search on [0, max_step] by bisection on the slope.
  double line_search(const std::vector<std::pair<std::size_t, double>>& dir, double max_step) const {
    for (const auto& [a, delta] : dir) {
      if (delta > 0.0 && std::isfinite(limit_[a])) {
        max_step = std::min(max_step, (limit_[a] - x_[a]) / delta * (1.0 - 1e-12));
      }
    }
    if (!(max_step > 0.0)) return 0.0;
    if (slope(dir, 0.0) >= 0.0) return -1.0;  // not a descent direction numerically
    if (slope(dir, max_step) <= 0.0) return max_step;
    double lo = 0.0;
    double hi = max_step;
    for (int i = 0; i < 200 && hi - lo > cfg_.line_search_tol * std::max(1.0, max_step); ++i) {
      const double mid = 0.5 * (lo + hi);
      if (slope(dir, mid) > 0.0) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    return 0.5 * (lo + hi);
  }

  void pairwise_sweep() {
    std::vector<double> grad(g_.arc_count());
    for (std::size_t m = 0; m < inst_.trips.size(); ++m) {
      for (std::size_t a = 0; a < g_.arc_count(); ++a) grad[a] = gradient(a, x_[a]);
      const std::size_t toward = find_or_add(m, shortest(m, grad));
      auto& paths = active_[m];
      std::size_t away = paths.size();
      double away_cost = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < paths.size(); ++i) {
        if (paths[i].flow <= 0.0) continue;
        const double c = arcs_cost(paths[i].arcs, grad);
        if (c > away_cost) {
          away_cost = c;
          away = i;
        }
      }
      if (away == paths.size() || away == toward) continue;

      std::map<std::size_t, double> delta;
      for (std::size_t a : paths[toward].arcs) delta[a] += 1.0;
      for (std::size_t a : paths[away].arcs) delta[a] -= 1.0;
      std::vector<std::pair<std::size_t, double>> dir;
      for (const auto& [a, d] : delta) {
        if (d != 0.0) dir.push_back({a, d});
      }
      const double step = line_search(dir, paths[away].flow);
      if (step <= 0.0) continue;
      if (step >= paths[away].flow) {
        paths[toward].flow += paths[away].flow;
        paths[away].flow = 0.0;
      } else {
        paths[toward].flow += step;
        paths[away].flow -= step;
      }
      for (const auto& [a, d] : dir) x_[a] = std::max(0.0, x_[a] + step * d);
      if (paths[away].flow == 0.0) recompute_edge_flows();
    }
    // Forget emptied paths so the active set stays small.
    for (auto& paths : active_) {
      std::erase_if(paths, [](const ActivePath& ap) { return ap.flow <= 0.0; });
    }
  }

  void classic_step(const std::vector<std::vector<std::size_t>>& aon, const std::vector<double>&,
                    std::size_t iteration) {
    std::vector<double> target(g_.arc_count(), 0.0);
    for (std::size_t m = 0; m < inst_.trips.size(); ++m) {
      for (std::size_t a : aon[m]) target[a] += inst_.trips[m].demand;
    }
    std::vector<std::pair<std::size_t, double>> dir;
    for (std::size_t a = 0; a < g_.arc_count(); ++a) {
      if (target[a] != x_[a]) dir.push_back({a, target[a] - x_[a]});
    }
    double step = line_search(dir, 1.0);
    if (step < 0.0) step = 2.0 / (static_cast<double>(iteration) + 2.0);
    if (step <= 0.0) return;
    for (std::size_t m = 0; m < inst_.trips.size(); ++m) {
      for (auto& ap : active_[m]) ap.flow *= (1.0 - step);
      const std::size_t i = find_or_add(m, aon[m]);
      active_[m][i].flow += step * inst_.trips[m].demand;
    }
  }

  void summarize_trip_costs(SolveResult& res) const {
    const std::size_t n = inst_.trips.size();
    res.per_trip_cost.assign(n, std::numeric_limits<double>::infinity());
    res.per_trip_max_cost.assign(n, 0.0);
    std::vector<double> heaviest(n, -1.0);
    for (const PathFlow& pf : res.assignment.path_flows) {
      const std::size_t m = pf.path.trip;
      if (pf.flow <= kUsedPathFraction * inst_.trips[m].demand) continue;
      const double c = path_travel_time(inst_.network, res.assignment, pf.path);
      res.per_trip_max_cost[m] = std::max(res.per_trip_max_cost[m], c);
      if (potential_ == Potential::Beckmann) {
        // Common cost C_m, read off the heaviest used path.
        if (pf.flow > heaviest[m]) {
          heaviest[m] = pf.flow;
          res.per_trip_cost[m] = c;
        }
      } else {
        res.per_trip_cost[m] = std::min(res.per_trip_cost[m], c);
      }
    }
  }

  const Instance& inst_;
  SolverConfig cfg_;
  Potential potential_;
  FrankWolfeVariant variant_;
  IndexedGraph g_;
  std::vector<double> limit_;
  std::vector<double> x_;
  std::vector<std::vector<ActivePath>> active_;
};

}  // namespace detail

/// System-optimal routing: minimizes total travel time sum_e x_e c_e(x_e).
/// Edge capacities are not enforced; Greenshields edges bound flow through
/// their asymptote.
inline SolveResult solve_so(const Instance& inst, const SolverConfig& cfg = {},
                            FrankWolfeVariant variant = FrankWolfeVariant::Pairwise) {
  return detail::FrankWolfe(inst, cfg, detail::Potential::SystemOptimal, variant).run();
}

/// User-equilibrium routing: minimizes the Beckmann potential.
inline SolveResult solve_ue(const Instance& inst, const SolverConfig& cfg = {},
                            FrankWolfeVariant variant = FrankWolfeVariant::Pairwise) {
  return detail::FrankWolfe(inst, cfg, detail::Potential::Beckmann, variant).run();
}

/// The instance with every edge cost replaced by its marginal cost c*.
inline Instance with_marginal_costs(const Instance& inst) {
  Instance out;
  out.trips = inst.trips;
  for (NodeId n : inst.network.nodes()) out.network.add_node(n);
  for (const auto& [k, e] : inst.network.edges()) {
    out.network.add_edge(Edge{e.from, e.to, marginal_model(e.cost), e.capacity});
  }
  return out;
}

struct BridgeComparison {
  SolveResult so;
  /// UE on the marginal-cost instance.
  SolveResult ue_marginal;
  double so_total = 0.0;
  /// Total travel time of the UE-on-c* flows, evaluated under c.
  double ue_marginal_total = 0.0;
  double abs_difference = 0.0;
  double rel_difference = 0.0;
};

/// Solves SO on (G, M, c) and UE on (G, M, c*) and compares both flow
/// patterns under the original costs.
inline BridgeComparison so_ue_bridge(const Instance& inst, const SolverConfig& cfg = {}) {
  BridgeComparison b;
  b.so = solve_so(inst, cfg);
  b.ue_marginal = solve_ue(with_marginal_costs(inst), cfg);
  b.so_total = b.so.total_cost;
  b.ue_marginal_total = total_travel_time(inst.network, b.ue_marginal.assignment);
  b.abs_difference = std::abs(b.so_total - b.ue_marginal_total);
  b.rel_difference = b.abs_difference / std::max(std::abs(b.so_total), 1e-300);
  return b;
}

/// UE total travel time over SO total travel time.
inline double price_of_anarchy(const Instance& inst, const SolverConfig& cfg = {}) {
  const double ue = solve_ue(inst, cfg).total_cost;
  const double so = solve_so(inst, cfg).total_cost;
  return ue / so;
}

}  // namespace netdesign

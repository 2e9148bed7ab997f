#pragma once

// Built-in fixtures.
//
// Node numbering:
//   braess          s=0, v=1, w=2, t=3
//   pigou           s=0, t=1; the variable-cost route is 0 -> 2 -> 1, where
//                   2 -> 1 costs nothing (the network has no parallel edges)
//   fig3            labels of the two-trip union example: s1=9, t1=4, s2=6, t2=14
//   fig4            s=0, v=1, t=2, w=3, r=4, g=5, h=6
//   counterexample  1..14 as laid out in the counterexample figure, s=1, t=4:
//                   black  1-2-3-4
//                   orange 1-5-6-2-10-13-14-11-12-4
//                   blue   1-9-10-11-3-7-8-4
//   parallel        s=0, t=1; path k runs 0 -> k+2 -> 1, and path 0 is the
//                   spanning tree

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "netdesign/design.hpp"

namespace netdesign {

using ScenarioParams = std::map<std::string, std::string>;

struct Scenario {
  std::string name;
  /// Parameters with defaults filled in.
  ScenarioParams params;
  /// The network `solve` runs on.
  Instance instance;
  std::optional<CandidateSet> candidates;
};

struct ScenarioInfo {
  std::string name;
  std::string summary;
  ScenarioParams defaults;
};

inline std::vector<ScenarioInfo> list_scenarios() {
  return {
      {"braess", "four-node paradox network; spanning tree s-v-t, additions s-w-t and s-v-w-t",
       {{"with_edge", "true"}, {"demand", "6"}}},
      {"pigou", "constant route against a route costing x", {{"demand", "1"}}},
      {"fig3", "two-trip spanning tree and one trip path graph", {{"demand", "1"}}},
      {"fig4", "one trip path graph inducing two extra paths", {{"demand", "1"}}},
      {"counterexample", "14-node network with orange and blue additions; demand defaults to 5 under greenshields",
       {{"costing", "mc"}, {"demand", "1"}, {"l", "1"}, {"v_max", "1"}, {"u", "10"}}},
      {"parallel", "n parallel two-edge paths; costing greenshields or mc",
       {{"costing", "greenshields"},
        {"n", "3"},
        {"l", "1"},
        {"v_max", "1"},
        {"u", "10"},
        {"d", "5"},
        {"costs", ""},
        {"spanning_cost", "9"}}},
  };
}

namespace detail {

class ParamReader {
 public:
  ParamReader(const std::string& scenario, const ScenarioParams& given, const ScenarioParams& defaults)
      : scenario_(scenario), values_(defaults) {
    for (const auto& [k, v] : given) {
      if (!defaults.count(k)) throw BadParams(scenario + ": unknown parameter '" + k + "'");
      values_[k] = v;
    }
  }

  double real(const std::string& key) const {
    const std::string& s = values_.at(key);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s.empty()) throw BadParams(scenario_ + ": parameter '" + key + "' is not a number");
    return v;
  }

  double positive(const std::string& key) const {
    const double v = real(key);
    if (!(v > 0.0) || !std::isfinite(v)) throw BadParams(scenario_ + ": parameter '" + key + "' must be positive");
    return v;
  }

  std::size_t count(const std::string& key) const {
    const double v = real(key);
    if (!(v >= 1.0) || v != std::floor(v) || v > 30.0) {
      throw BadParams(scenario_ + ": parameter '" + key + "' must be an integer in [1, 30]");
    }
    return static_cast<std::size_t>(v);
  }

  bool flag(const std::string& key) const {
    const std::string& s = values_.at(key);
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    throw BadParams(scenario_ + ": parameter '" + key + "' must be true or false");
  }

  std::string text(const std::string& key) const { return values_.at(key); }

  std::vector<double> reals(const std::string& key) const {
    std::vector<double> out;
    std::stringstream ss(values_.at(key));
    std::string item;
    while (std::getline(ss, item, ',')) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(item, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (item.empty() || used != item.size() || !(v > 0.0)) {
        throw BadParams(scenario_ + ": '" + key + "' must be a comma-separated list of positive numbers");
      }
      out.push_back(v);
    }
    return out;
  }

  const ScenarioParams& values() const { return values_; }

 private:
  std::string scenario_;
  ScenarioParams values_;
};

inline Network chain(const Network& tmpl, const std::vector<NodeId>& nodes) {
  return path_graph_from_template(tmpl, nodes);
}

struct Layout {
  Network tmpl;
  TripSet trips;
  Network tree;
  std::vector<CandidateSpec> specs;
  CandidateClass cls = CandidateClass::General;
};

inline Scenario finish(std::string name, const ParamReader& p, Layout l, std::optional<Subset> realized = {}) {
  Scenario sc;
  sc.name = std::move(name);
  sc.params = p.values();
  sc.candidates = make_candidate_set(TemplateGraph{l.tmpl}, l.tree, l.trips, l.specs, l.cls);
  const Subset chosen = realized ? *realized : sc.candidates->ground_set();
  sc.instance = make_state(*sc.candidates, chosen).instance();
  return sc;
}

inline Scenario braess(const ParamReader& p) {
  Layout l;
  const auto ten_x = CostModel::affine(0, 10);
  const auto fifty = CostModel::affine(50, 1);
  l.tmpl.add_edge(0, 1, ten_x, kInfiniteCapacity);
  l.tmpl.add_edge(0, 2, fifty, kInfiniteCapacity);
  l.tmpl.add_edge(1, 3, fifty, kInfiniteCapacity);
  l.tmpl.add_edge(2, 3, ten_x, kInfiniteCapacity);
  l.tmpl.add_edge(1, 2, CostModel::affine(10, 1), kInfiniteCapacity);
  l.trips = {Trip{0, 3, p.positive("demand")}};
  l.tree = chain(l.tmpl, {0, 1, 3});
  l.specs = {{0, chain(l.tmpl, {0, 2, 3}), "s-w-t"}, {0, chain(l.tmpl, {0, 1, 2, 3}), "s-v-w-t"}};
  return finish("braess", p, std::move(l), p.flag("with_edge") ? Subset{0b11} : Subset{0b01});
}

inline Scenario pigou(const ParamReader& p) {
  Layout l;
  l.tmpl.add_edge(0, 1, CostModel::constant(1), kInfiniteCapacity);
  l.tmpl.add_edge(0, 2, CostModel::affine(0, 1), kInfiniteCapacity);
  l.tmpl.add_edge(2, 1, CostModel::affine(0, 0), kInfiniteCapacity);
  l.trips = {Trip{0, 1, p.positive("demand")}};
  l.tree = chain(l.tmpl, {0, 1});
  l.specs = {{0, chain(l.tmpl, {0, 2, 1}), "variable"}};
  return finish("pigou", p, std::move(l));
}

inline Scenario fig3(const ParamReader& p) {
  Layout l;
  const double d = p.positive("demand");
  const auto one = CostModel::constant(1);
  for (auto [a, b] : std::vector<std::pair<NodeId, NodeId>>{
           {9, 10}, {2, 3}, {3, 4}, {6, 2}, {2, 10}, {10, 2}, {11, 14}, {10, 11}, {11, 3}}) {
    l.tmpl.add_edge(a, b, one, 2.0 * d);
  }
  l.trips = {Trip{9, 4, d}, Trip{6, 14, d}};
  l.tree = subgraph_from_edges(l.tmpl, {{9, 10}, {2, 3}, {3, 4}, {6, 2}, {2, 10}, {10, 2}, {11, 14}, {10, 11}});
  l.specs = {{0, chain(l.tmpl, {9, 10, 11, 3, 4}), "orange"}};
  return finish("fig3", p, std::move(l));
}

inline Scenario fig4(const ParamReader& p) {
  Layout l;
  const double d = p.positive("demand");
  const auto one = CostModel::constant(1);
  for (auto [a, b] : std::vector<std::pair<NodeId, NodeId>>{{0, 1}, {1, 2}, {0, 3}, {3, 4}, {4, 1}, {1, 5}, {5, 6}, {6, 2}}) {
    l.tmpl.add_edge(a, b, one, d);
  }
  l.trips = {Trip{0, 2, d}};
  l.tree = chain(l.tmpl, {0, 1, 2});
  l.specs = {{0, chain(l.tmpl, {0, 3, 4, 1, 5, 6, 2}), "orange"}};
  return finish("fig4", p, std::move(l));
}

inline Scenario counterexample(const ParamReader& p) {
  Layout l;
  const std::string costing = p.text("costing");
  const std::vector<NodeId> black{1, 2, 3, 4};
  const std::vector<NodeId> orange{1, 5, 6, 2, 10, 13, 14, 11, 12, 4};
  const std::vector<NodeId> blue{1, 9, 10, 11, 3, 7, 8, 4};
  const double d = p.positive("demand");
  CostModel black_cost;
  CostModel other_cost;
  double capacity = 0.0;
  if (costing == "mc") {
    black_cost = CostModel::constant(3);
    other_cost = CostModel::constant(1);
    capacity = d;
  } else if (costing == "greenshields") {
    black_cost = other_cost = CostModel::greenshields(p.positive("l"), p.positive("v_max"), p.positive("u"));
    capacity = kInfiniteCapacity;
  } else {
    throw BadParams("counterexample: costing must be mc or greenshields");
  }
  auto add = [&](const std::vector<NodeId>& nodes, const CostModel& c) {
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) l.tmpl.add_edge(nodes[i], nodes[i + 1], c, capacity);
  };
  add(black, black_cost);
  add(orange, other_cost);
  add(blue, other_cost);
  l.trips = {Trip{1, 4, d}};
  l.tree = chain(l.tmpl, black);
  l.specs = {{0, chain(l.tmpl, orange), "orange"}, {0, chain(l.tmpl, blue), "blue"}};
  l.cls = CandidateClass::Prime;
  return finish("counterexample", p, std::move(l));
}

inline Scenario parallel(const ParamReader& p) {
  Layout l;
  const std::string costing = p.text("costing");
  std::vector<CostModel> half_costs;  // per path, cost of each of its two edges
  double capacity = kInfiniteCapacity;
  double d = 0.0;
  if (costing == "greenshields") {
    const std::size_t n = p.count("n");
    const double len = p.positive("l");
    const double v = p.positive("v_max");
    const double u = p.positive("u");
    d = p.positive("d");
    half_costs.assign(n, CostModel::greenshields(len / 2.0, v, u));
  } else if (costing == "mc") {
    d = p.positive("d");
    capacity = p.positive("u");
    half_costs.push_back(CostModel::constant(p.positive("spanning_cost") / 2.0));
    for (double c : p.reals("costs")) half_costs.push_back(CostModel::constant(c / 2.0));
    if (half_costs.size() > 31) throw BadParams("parallel: at most 30 candidate costs");
  } else {
    throw BadParams("parallel: costing must be greenshields or mc");
  }
  for (std::size_t k = 0; k < half_costs.size(); ++k) {
    const NodeId mid = static_cast<NodeId>(k + 2);
    l.tmpl.add_edge(0, mid, half_costs[k], capacity);
    l.tmpl.add_edge(mid, 1, half_costs[k], capacity);
  }
  l.trips = {Trip{0, 1, d}};
  l.tree = chain(l.tmpl, {0, 2, 1});
  for (std::size_t k = 1; k < half_costs.size(); ++k) {
    l.specs.push_back({0, chain(l.tmpl, {0, static_cast<NodeId>(k + 2), 1}), "p" + std::to_string(k)});
  }
  l.cls = CandidateClass::DoublePrime;
  return finish("parallel", p, std::move(l));
}

}  // namespace detail

inline Scenario materialize(const std::string& name, const ScenarioParams& params = {}) {
  for (const ScenarioInfo& info : list_scenarios()) {
    if (info.name != name) continue;
    ScenarioParams defaults = info.defaults;
    // The flow-dependent counterexample is posed with demand 5.
    if (name == "counterexample" && params.count("costing") && params.at("costing") == "greenshields") {
      defaults["demand"] = "5";
    }
    const detail::ParamReader p(name, params, defaults);
    if (name == "braess") return detail::braess(p);
    if (name == "pigou") return detail::pigou(p);
    if (name == "fig3") return detail::fig3(p);
    if (name == "fig4") return detail::fig4(p);
    if (name == "counterexample") return detail::counterexample(p);
    return detail::parallel(p);
  }
  throw UnknownScenario("unknown scenario '" + name + "'");
}

}  // namespace netdesign

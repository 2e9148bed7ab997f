#pragma once

// JSON documents: instances, candidate sets, solve results and property
// reports.
//
// Instance:
//   {"nodes":[int], "edges":[{"from":int,"to":int,"cost":{...},"capacity":number|"inf"}],
//    "trips":[{"source":int,"sink":int,"demand":number}]}
// Candidate set (same document plus):
//   "spanning_tree":[[from,to],...],
//   "candidates":[{"trip":int,"edges":[[from,to],...],"name":string?}],
//   "class":"general"|"prime"|"double_prime"?
// With candidates present, "edges" lists the template graph.

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "netdesign/design.hpp"
#include "netdesign/set_properties.hpp"

namespace netdesign {

using Json = nlohmann::ordered_json;

inline constexpr int kFormatVersion = 1;

namespace detail {

inline void require_keys(const Json& j, const std::string& where, std::initializer_list<const char*> required,
                         std::initializer_list<const char*> optional = {}) {
  if (!j.is_object()) throw ParseError(where + ": expected an object");
  for (const char* k : required) {
    if (!j.contains(k)) throw ParseError(where + ": missing key '" + k + "'");
  }
  for (const auto& [k, v] : j.items()) {
    bool known = false;
    for (const char* r : required) known = known || k == r;
    for (const char* o : optional) known = known || k == o;
    if (!known) throw ParseError(where + ": unknown key '" + k + "'");
  }
}

inline double number(const Json& j, const std::string& where) {
  if (!j.is_number()) throw ParseError(where + ": expected a number");
  return j.get<double>();
}

inline NodeId node_id(const Json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 0 ||
      j.get<long long>() > static_cast<long long>(std::numeric_limits<NodeId>::max())) {
    throw ParseError(where + ": expected a non-negative integer node id");
  }
  return static_cast<NodeId>(j.get<long long>());
}

inline std::size_t index(const Json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 0) throw ParseError(where + ": expected a non-negative integer");
  return static_cast<std::size_t>(j.get<long long>());
}

inline std::vector<EdgeKey> edge_pairs(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected an array of [from,to] pairs");
  std::vector<EdgeKey> out;
  for (const Json& e : j) {
    if (!e.is_array() || e.size() != 2) throw ParseError(where + ": expected a [from,to] pair");
    out.push_back({node_id(e[0], where), node_id(e[1], where)});
  }
  return out;
}

inline Json pairs_to_json(const Network& g) {
  Json a = Json::array();
  for (const auto& [k, e] : g.edges()) a.push_back(Json::array({k.from, k.to}));
  return a;
}

}  // namespace detail

inline Json cost_to_json(const CostModel& c) {
  Json j;
  j["kind"] = c.kind();
  if (c.is<ConstantCost>()) {
    j["c"] = c.as<ConstantCost>().c;
  } else if (c.is<AffineCost>()) {
    j["a"] = c.as<AffineCost>().a;
    j["b"] = c.as<AffineCost>().b;
  } else if (c.is<GreenshieldsCost>()) {
    const auto& g = c.as<GreenshieldsCost>();
    j["l"] = g.l;
    j["v_max"] = g.v_max;
    j["u"] = g.u;
  } else if (c.is<BprCost>()) {
    const auto& b = c.as<BprCost>();
    j["c0"] = b.c0;
    j["u"] = b.u;
    j["alpha"] = b.alpha;
    j["beta"] = b.beta;
  } else {
    throw ParseError("marginal cost models have no JSON form");
  }
  return j;
}

inline CostModel cost_from_json(const Json& j) {
  const std::string where = "cost";
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw ParseError("cost: expected an object with a string 'kind'");
  }
  const std::string kind = j["kind"].get<std::string>();
  try {
    if (kind == "constant") {
      detail::require_keys(j, where, {"kind", "c"});
      return CostModel::constant(detail::number(j["c"], "cost.c"));
    }
    if (kind == "affine") {
      detail::require_keys(j, where, {"kind", "a", "b"});
      return CostModel::affine(detail::number(j["a"], "cost.a"), detail::number(j["b"], "cost.b"));
    }
    if (kind == "greenshields") {
      detail::require_keys(j, where, {"kind", "l", "v_max", "u"});
      return CostModel::greenshields(detail::number(j["l"], "cost.l"), detail::number(j["v_max"], "cost.v_max"),
                                     detail::number(j["u"], "cost.u"));
    }
    if (kind == "bpr") {
      detail::require_keys(j, where, {"kind", "c0", "u", "alpha", "beta"});
      return CostModel::bpr(detail::number(j["c0"], "cost.c0"), detail::number(j["u"], "cost.u"),
                            detail::number(j["alpha"], "cost.alpha"), detail::number(j["beta"], "cost.beta"));
    }
  } catch (const BadParams& e) {
    throw ParseError(std::string("cost: ") + e.what());
  }
  throw ParseError("cost: unknown kind '" + kind + "'");
}

inline Json capacity_to_json(double u) { return std::isinf(u) ? Json("inf") : Json(u); }

inline double capacity_from_json(const Json& j) {
  if (j.is_string() && j.get<std::string>() == "inf") return kInfiniteCapacity;
  return detail::number(j, "edge.capacity");
}

inline Json network_to_json(const Network& net, const TripSet& trips) {
  Json j;
  j["nodes"] = Json::array();
  for (NodeId n : net.nodes()) j["nodes"].push_back(n);
  j["edges"] = Json::array();
  for (const auto& [k, e] : net.edges()) {
    Json je;
    je["from"] = e.from;
    je["to"] = e.to;
    je["cost"] = cost_to_json(e.cost);
    je["capacity"] = capacity_to_json(e.capacity);
    j["edges"].push_back(je);
  }
  j["trips"] = Json::array();
  for (const Trip& t : trips) j["trips"].push_back({{"source", t.source}, {"sink", t.sink}, {"demand", t.demand}});
  return j;
}

inline Json instance_to_json(const Instance& inst) { return network_to_json(inst.network, inst.trips); }

inline Json candidate_set_to_json(const CandidateSet& cs) {
  Json j = network_to_json(cs.tmpl.graph, cs.trips());
  j["spanning_tree"] = detail::pairs_to_json(cs.spanning_tree.graph());
  j["candidates"] = Json::array();
  for (std::size_t x = 0; x < cs.size(); ++x) {
    Json c;
    c["trip"] = cs.candidates[x].trip_index();
    c["edges"] = detail::pairs_to_json(cs.candidates[x].graph());
    if (!cs.names[x].empty()) c["name"] = cs.names[x];
    j["candidates"].push_back(c);
  }
  j["class"] = to_string(cs.declared_class);
  return j;
}

/// A parsed document: the listed network with its trips, and the candidate
/// set when the document declares one.
struct Document {
  Instance instance;
  std::optional<CandidateSet> candidates;
};

inline Document document_from_json(const Json& j) {
  detail::require_keys(j, "document", {"nodes", "edges", "trips"}, {"spanning_tree", "candidates", "class"});
  Document doc;
  if (!j["nodes"].is_array()) throw ParseError("nodes: expected an array");
  std::set<NodeId> declared;
  for (const Json& n : j["nodes"]) declared.insert(detail::node_id(n, "nodes"));
  Network& net = doc.instance.network;
  for (NodeId n : declared) net.add_node(n);
  if (!j["edges"].is_array()) throw ParseError("edges: expected an array");
  for (const Json& e : j["edges"]) {
    detail::require_keys(e, "edge", {"from", "to", "cost", "capacity"});
    const NodeId from = detail::node_id(e["from"], "edge.from");
    const NodeId to = detail::node_id(e["to"], "edge.to");
    if (!declared.count(from) || !declared.count(to)) throw ParseError("edge endpoint is not listed in nodes");
    net.add_edge(from, to, cost_from_json(e["cost"]), capacity_from_json(e["capacity"]));
  }
  if (!j["trips"].is_array()) throw ParseError("trips: expected an array");
  for (const Json& t : j["trips"]) {
    detail::require_keys(t, "trip", {"source", "sink", "demand"});
    Trip trip{detail::node_id(t["source"], "trip.source"), detail::node_id(t["sink"], "trip.sink"),
              detail::number(t["demand"], "trip.demand")};
    doc.instance.trips.push_back(trip);
  }
  doc.instance.validate();

  const bool has_tree = j.contains("spanning_tree");
  const bool has_candidates = j.contains("candidates");
  if (has_tree != has_candidates) throw ParseError("'spanning_tree' and 'candidates' must appear together");
  if (!has_candidates) {
    if (j.contains("class")) throw ParseError("'class' needs a candidate set");
    return doc;
  }
  const TemplateGraph tmpl{net};
  const Network tree = subgraph_from_edges(net, detail::edge_pairs(j["spanning_tree"], "spanning_tree"));
  if (!j["candidates"].is_array()) throw ParseError("candidates: expected an array");
  std::vector<CandidateSpec> specs;
  for (const Json& c : j["candidates"]) {
    detail::require_keys(c, "candidate", {"trip", "edges"}, {"name"});
    CandidateSpec spec;
    spec.trip = detail::index(c["trip"], "candidate.trip");
    for (const EdgeKey& k : detail::edge_pairs(c["edges"], "candidate.edges")) {
      if (!net.has_edge(k.from, k.to)) throw ParseError("candidate edge is not in the template");
    }
    spec.graph = subgraph_from_edges(net, detail::edge_pairs(c["edges"], "candidate.edges"));
    if (c.contains("name")) {
      if (!c["name"].is_string()) throw ParseError("candidate.name: expected a string");
      spec.name = c["name"].get<std::string>();
    }
    specs.push_back(std::move(spec));
  }
  for (const EdgeKey& k : detail::edge_pairs(j["spanning_tree"], "spanning_tree")) {
    if (!net.has_edge(k.from, k.to)) throw ParseError("spanning tree edge is not in the template");
  }
  CandidateClass cls = CandidateClass::General;
  if (j.contains("class")) {
    if (!j["class"].is_string()) throw ParseError("class: expected a string");
    cls = parse_candidate_class(j["class"].get<std::string>());
  }
  doc.candidates = make_candidate_set(tmpl, tree, doc.instance.trips, specs, cls);
  return doc;
}

inline Document parse_document(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  try {
    return document_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad document: ") + e.what());
  }
}

inline Json certificate_to_json(const OptimalityCertificate& c) {
  Json j;
  j["kind"] = to_string(c.kind);
  j["max_violation"] = c.max_violation;
  j["tolerance"] = c.tolerance;
  j["accepted"] = c.accepted();
  j["trips"] = Json::array();
  for (const TripSpread& t : c.trips) {
    j["trips"].push_back({{"min_used", t.min_used}, {"max_used", t.max_used}, {"best_any", t.best_any}});
  }
  return j;
}

inline Json result_to_json(const SolveResult& r) {
  Json j;
  j["routing"] = to_string(r.routing);
  j["total_cost"] = r.total_cost;
  j["objective"] = r.objective;
  j["per_trip_cost"] = r.per_trip_cost;
  j["per_trip_max_cost"] = r.per_trip_max_cost;
  j["iterations"] = r.iterations;
  j["relative_gap"] = r.relative_gap;
  Json flows = Json::object();
  for (const PathFlow& pf : r.assignment.path_flows) flows[pf.path.key()] = pf.flow;
  j["path_flows"] = flows;
  j["edge_flows"] = Json::array();
  for (const auto& [k, x] : r.assignment.edge_flows) j["edge_flows"].push_back({{"from", k.from}, {"to", k.to}, {"flow", x}});
  j["certificate"] = certificate_to_json(r.certificate);
  return j;
}

inline Json config_to_json(const SolverConfig& c) {
  return {{"relative_gap_tol", c.relative_gap_tol},
          {"equalization_tol", c.equalization_tol},
          {"max_iterations", c.max_iterations},
          {"line_search_tol", c.line_search_tol},
          {"capacity_margin", c.capacity_margin},
          {"path_limit", c.path_limit}};
}

inline Json lambda_to_json(const LambdaEvaluation& ev, const CandidateSet& cs) {
  return {{"subset", ev.subset},
          {"names", cs.label(ev.subset)},
          {"value", ev.value},
          {"iterations", ev.iterations},
          {"relative_gap", ev.relative_gap},
          {"certificate_violation", ev.certificate_violation},
          {"closed_form", ev.closed_form}};
}

inline Json property_report_to_json(const PropertyReport& r, const CandidateSet& cs) {
  Json j;
  j["property"] = to_string(r.property);
  j["routing"] = to_string(r.routing);
  j["verdict"] = r.holds ? "holds" : "violated";
  j["tolerance"] = r.tolerance;
  j["mode"] = r.mode.kind == CheckMode::Kind::Exhaustive
                  ? Json{{"kind", "exhaustive"}}
                  : Json{{"kind", "sampled"}, {"seed", r.mode.seed}, {"trials", r.mode.trials}};
  j["checked"] = r.checked;
  j["population"] = r.population;
  j["witnesses"] = Json::array();
  for (const Witness& w : r.witnesses) {
    Json jw;
    jw["a"] = w.a;
    jw["a_names"] = cs.label(w.a);
    jw["b"] = w.b;
    jw["b_names"] = cs.label(w.b);
    if (w.x) {
      jw["x"] = *w.x;
      jw["x_name"] = cs.label(with(0, *w.x));
    } else {
      jw["x"] = nullptr;
    }
    jw["lhs"] = w.lhs;
    jw["rhs"] = w.rhs;
    jw["margin"] = w.margin;
    j["witnesses"].push_back(jw);
  }
  j["lambda"] = Json::array();
  for (const LambdaEvaluation& ev : r.evaluations) j["lambda"].push_back(lambda_to_json(ev, cs));
  return j;
}

/// Header plus one row per Lambda evaluation, for plotting cost ladders.
struct PlotRow {
  Subset subset = 0;
  std::string names;
  Routing routing = Routing::MC;
  double value = 0.0;
};

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace detail

inline std::vector<PlotRow> plot_rows(const std::vector<LambdaEvaluation>& evs, const CandidateSet& cs) {
  std::vector<PlotRow> rows;
  for (const LambdaEvaluation& ev : evs) rows.push_back({ev.subset, cs.label(ev.subset), ev.routing, ev.value});
  return rows;
}

inline std::string emit_plot_data(const std::vector<PlotRow>& rows) {
  std::string out = "subset_bitmask,subset_names,routing,lambda_value\n";
  for (const PlotRow& r : rows) {
    out += std::to_string(r.subset) + "," + detail::csv_field(r.names) + "," + to_string(r.routing) + "," +
           detail::format_double(r.value) + "\n";
  }
  return out;
}

/// One row per evaluated subset: bitmask, Lambda, relative gap of the solve.
inline std::string lambda_table_csv(const std::vector<LambdaEvaluation>& evs) {
  std::string out = "bitmask,lambda,gap\n";
  for (const LambdaEvaluation& ev : evs) {
    out += std::to_string(ev.subset) + "," + detail::format_double(ev.value) + "," +
           detail::format_double(ev.relative_gap) + "\n";
  }
  return out;
}

}  // namespace netdesign

#pragma once

// Candidate sets of trip path graphs and the set functions Lambda over them.
//
// A subset of candidates is a bitmask: bit x set means candidate x is added
// to the trip spanning tree.

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "netdesign/construction.hpp"
#include "netdesign/frank_wolfe.hpp"
#include "netdesign/mc_solver.hpp"
#include "netdesign/parallel_forms.hpp"

namespace netdesign {

using Subset = std::uint32_t;

inline constexpr std::size_t kMaxCandidates = 32;

inline bool contains(Subset s, std::size_t x) { return (s >> x) & 1u; }
inline Subset with(Subset s, std::size_t x) { return s | (Subset{1} << x); }
inline bool is_subset(Subset a, Subset b) { return (a & ~b) == 0; }

inline std::vector<std::size_t> subset_indices(Subset s) {
  std::vector<std::size_t> out;
  for (std::size_t x = 0; x < kMaxCandidates; ++x) {
    if (contains(s, x)) out.push_back(x);
  }
  return out;
}

inline Subset subset_from_indices(const std::vector<std::size_t>& xs) {
  Subset s = 0;
  for (std::size_t x : xs) {
    if (x >= kMaxCandidates) throw BadParams("candidate index out of range: " + std::to_string(x));
    s = with(s, x);
  }
  return s;
}

enum class CandidateClass { General, Prime, DoublePrime };

inline std::string to_string(CandidateClass c) {
  switch (c) {
    case CandidateClass::General: return "general";
    case CandidateClass::Prime: return "prime";
    case CandidateClass::DoublePrime: return "double_prime";
  }
  return "?";
}

inline CandidateClass parse_candidate_class(const std::string& s) {
  if (s == "general") return CandidateClass::General;
  if (s == "prime") return CandidateClass::Prime;
  if (s == "double_prime") return CandidateClass::DoublePrime;
  throw ParseError("unknown candidate class '" + s + "'");
}

/// Unvalidated description of one candidate.
struct CandidateSpec {
  std::size_t trip = 0;
  Network graph;
  std::string name;
};

struct CandidateSet {
  TemplateGraph tmpl;
  TripSpanningTree spanning_tree;
  std::vector<TripPathGraph> candidates;
  std::vector<std::string> names;
  CandidateClass declared_class = CandidateClass::General;

  const TripSet& trips() const { return spanning_tree.trips(); }
  std::size_t size() const { return candidates.size(); }
  Subset ground_set() const { return size() == kMaxCandidates ? ~Subset{0} : (Subset{1} << size()) - 1; }

  /// "{orange,blue}" style label; unnamed candidates print as their index.
  std::string label(Subset s) const {
    std::string out = "{";
    bool first = true;
    for (std::size_t x : subset_indices(s)) {
      if (!first) out += ",";
      first = false;
      out += x < names.size() && !names[x].empty() ? names[x] : std::to_string(x);
    }
    return out + "}";
  }
};

inline std::string format_violations(const ViolationList& vs) {
  std::string out;
  for (const Violation& v : vs) {
    if (!out.empty()) out += "; ";
    out += "property " + std::to_string(v.property) + ": " + v.message;
  }
  return out;
}

/// Validates the spanning tree and every candidate against the template.
/// Throws InvalidNetwork naming the first failing graph.
inline CandidateSet make_candidate_set(TemplateGraph tmpl, const Network& tree, const TripSet& trips,
                                       const std::vector<CandidateSpec>& specs,
                                       CandidateClass declared = CandidateClass::General,
                                       std::size_t limit = kDefaultPathLimit) {
  if (specs.size() > kMaxCandidates) throw BadParams("at most 32 candidates are supported");
  auto st = validate_trip_spanning_tree(tree, trips, &tmpl, limit);
  if (!st.ok()) throw InvalidNetwork("trip spanning tree rejected: " + format_violations(st.violations));
  CandidateSet cs{std::move(tmpl), *st.value, {}, {}, declared};
  for (std::size_t x = 0; x < specs.size(); ++x) {
    if (specs[x].trip >= trips.size()) throw InvalidNetwork("candidate " + std::to_string(x) + " names an unknown trip");
    auto pg = validate_trip_path_graph(specs[x].graph, trips[specs[x].trip], specs[x].trip, x, &cs.tmpl, limit);
    if (!pg.ok()) {
      throw InvalidNetwork("candidate " + std::to_string(x) + " rejected: " + format_violations(pg.violations));
    }
    cs.candidates.push_back(*pg.value);
    cs.names.push_back(specs[x].name);
  }
  return cs;
}

/// The trip spanning tree plus the chosen candidates, unioned.
struct DesignState {
  const CandidateSet* candidate_set = nullptr;
  Subset chosen = 0;
  Network realized;

  Instance instance() const { return {realized, candidate_set->trips()}; }
};

inline DesignState make_state(const CandidateSet& cs, Subset chosen) {
  if (!is_subset(chosen, cs.ground_set())) throw BadParams("subset names a candidate that does not exist");
  std::vector<Network> parts;
  for (std::size_t x : subset_indices(chosen)) parts.push_back(cs.candidates[x].graph());
  return {&cs, chosen, graph_union(cs.spanning_tree.graph(), parts)};
}

struct RestrictionReport {
  CandidateClass candidate_class = CandidateClass::General;
  bool holds = true;
  std::vector<std::string> violations;
};

namespace detail {

inline bool all_constant(const CandidateSet& cs) {
  auto constant = [](const Network& n) {
    return std::all_of(n.edges().begin(), n.edges().end(), [](const auto& kv) { return kv.second.cost.is_constant(); });
  };
  if (!constant(cs.spanning_tree.graph())) return false;
  return std::all_of(cs.candidates.begin(), cs.candidates.end(),
                     [&](const TripPathGraph& g) { return constant(g.graph()); });
}

/// Travel time along `p` when every edge carries flow x.
inline double path_cost_at(const Network& net, const Path& p, double x) {
  double c = 0.0;
  for (const EdgeKey& k : p.edges()) c += net.edge(k.from, k.to).cost.evaluate(x);
  return c;
}

inline double path_domain_limit(const Network& net, const Path& p) {
  double lim = std::numeric_limits<double>::infinity();
  for (const EdgeKey& k : p.edges()) lim = std::min(lim, net.edge(k.from, k.to).cost.domain_limit());
  return lim;
}

/// Compares two path cost functions on a grid of flows inside both domains.
inline bool same_path_cost(const Network& na, const Path& a, const Network& nb, const Path& b, double demand) {
  const double lim = std::min(path_domain_limit(na, a), path_domain_limit(nb, b));
  if (path_domain_limit(na, a) != path_domain_limit(nb, b)) return false;
  const double top = std::isfinite(lim) ? lim : std::max(1.0, 2.0 * demand);
  for (int i = 0; i <= 16; ++i) {
    const double x = top * i / 17.0;
    const double ca = path_cost_at(na, a, x);
    const double cb = path_cost_at(nb, b, x);
    if (std::abs(ca - cb) > 1e-12 * (1.0 + std::abs(ca))) return false;
  }
  return true;
}

}  // namespace detail

/// Checks whether the candidates belong to the restricted class.
///
/// Prime: candidates are pairwise edge-disjoint and edge-disjoint from the
/// spanning tree, and every candidate edge has the same cost model and
/// capacity.
///
/// DoublePrime: a single trip; every candidate shares with the spanning tree
/// and with every other candidate only the trip endpoints. With constant
/// costs each candidate edge must carry the full demand (u >= d); otherwise
/// all parallel paths, the spanning tree path included, must have the same
/// path cost function.
inline RestrictionReport check_restriction(const CandidateSet& cs, CandidateClass cls) {
  RestrictionReport r;
  r.candidate_class = cls;
  auto fail = [&r](std::string msg) {
    r.holds = false;
    r.violations.push_back(std::move(msg));
  };
  if (cls == CandidateClass::General) return r;
  const Network& tree = cs.spanning_tree.graph();
  const std::size_t n = cs.size();

  if (cls == CandidateClass::Prime) {
    const Edge* ref = nullptr;
    for (std::size_t x = 0; x < n; ++x) {
      const Network& gx = cs.candidates[x].graph();
      for (const auto& [k, e] : gx.edges()) {
        if (tree.has_edge(k.from, k.to)) {
          fail("candidate " + std::to_string(x) + " shares an edge with the spanning tree");
        }
        for (std::size_t y = x + 1; y < n; ++y) {
          if (cs.candidates[y].graph().has_edge(k.from, k.to)) {
            fail("candidates " + std::to_string(x) + " and " + std::to_string(y) + " share an edge");
          }
        }
        if (!ref) {
          ref = &e;
        } else if (!(e.cost == ref->cost) || e.capacity != ref->capacity) {
          fail("candidate " + std::to_string(x) + " has an edge with a different cost or capacity");
        }
      }
    }
    return r;
  }

  const TripSet& trips = cs.trips();
  if (trips.size() != 1) {
    fail("parallel classes need exactly one trip");
    return r;
  }
  const Trip& trip = trips.front();
  auto interior = [&trip](const Network& g) {
    std::set<NodeId> s = g.nodes();
    s.erase(trip.source);
    s.erase(trip.sink);
    return s;
  };
  const auto tree_nodes = interior(tree);
  for (std::size_t x = 0; x < n; ++x) {
    const Network& gx = cs.candidates[x].graph();
    const auto nx = interior(gx);
    for (NodeId v : nx) {
      if (tree_nodes.count(v)) fail("candidate " + std::to_string(x) + " shares node " + std::to_string(v) + " with the spanning tree");
    }
    for (const auto& [k, e] : gx.edges()) {
      if (tree.has_edge(k.from, k.to)) fail("candidate " + std::to_string(x) + " shares an edge with the spanning tree");
    }
    for (std::size_t y = x + 1; y < n; ++y) {
      const Network& gy = cs.candidates[y].graph();
      for (NodeId v : interior(gy)) {
        if (nx.count(v)) {
          fail("candidates " + std::to_string(x) + " and " + std::to_string(y) + " share node " + std::to_string(v));
        }
      }
      for (const auto& [k, e] : gy.edges()) {
        if (gx.has_edge(k.from, k.to)) {
          fail("candidates " + std::to_string(x) + " and " + std::to_string(y) + " share an edge");
        }
      }
    }
  }

  const Path tree_path = enumerate_paths(tree, trip, 0).front();
  if (detail::all_constant(cs)) {
    for (std::size_t x = 0; x < n; ++x) {
      for (const auto& [k, e] : cs.candidates[x].graph().edges()) {
        if (e.capacity < trip.demand) {
          fail("candidate " + std::to_string(x) + " has an edge that cannot carry the full demand");
          break;
        }
      }
    }
  } else {
    for (std::size_t x = 0; x < n; ++x) {
      if (!detail::same_path_cost(tree, tree_path, cs.candidates[x].graph(), cs.candidates[x].path(), trip.demand)) {
        fail("candidate " + std::to_string(x) + " has a path cost function different from the spanning tree path");
      }
    }
  }
  return r;
}

struct LambdaEvaluation {
  Routing routing = Routing::MC;
  Subset subset = 0;
  double value = 0.0;
  std::size_t iterations = 0;
  double relative_gap = 0.0;
  double certificate_violation = 0.0;
  /// True when the value came from a parallel-case closed form.
  bool closed_form = false;
};

struct LambdaOptions {
  /// Use the parallel closed forms when the declared class checks out.
  bool closed_forms = true;
  std::size_t path_limit = kDefaultPathLimit;
};

namespace detail {

inline std::optional<double> closed_form_value(Routing routing, const CandidateSet& cs, Subset s) {
  const Trip& trip = cs.trips().front();
  const Network& tree = cs.spanning_tree.graph();
  const Path tree_path = enumerate_paths(tree, trip, 0).front();
  if (routing == Routing::MC) {
    std::vector<double> costs;
    for (const TripPathGraph& g : cs.candidates) costs.push_back(constant_path_cost(g.graph(), g.path()));
    return parallel_mc_value(constant_path_cost(tree, tree_path), costs, subset_indices(s), trip.demand);
  }
  const std::size_t paths = 1 + static_cast<std::size_t>(std::popcount(s));
  const double per_path = trip.demand / static_cast<double>(paths);
  if (!(per_path < path_domain_limit(tree, tree_path))) {
    throw DomainError("parallel paths cannot carry the demand below capacity");
  }
  return trip.demand * path_cost_at(tree, tree_path, per_path);
}

}  // namespace detail

/// Lambda for one subset: total travel time of the selected routing on the
/// spanning tree unioned with the chosen candidates.
inline LambdaEvaluation lambda_eval(Routing routing, const DesignState& state, const SolverConfig& cfg = {},
                                    const LambdaOptions& opt = {}) {
  const CandidateSet& cs = *state.candidate_set;
  LambdaEvaluation ev;
  ev.routing = routing;
  ev.subset = state.chosen;
  if (opt.closed_forms && cs.declared_class == CandidateClass::DoublePrime &&
      check_restriction(cs, CandidateClass::DoublePrime).holds &&
      (routing != Routing::MC || detail::all_constant(cs))) {
    ev.value = *detail::closed_form_value(routing, cs, state.chosen);
    ev.closed_form = true;
    return ev;
  }
  const Instance inst = state.instance();
  SolveResult res;
  switch (routing) {
    case Routing::MC: res = solve_mc(inst, opt.path_limit); break;
    case Routing::SO: res = solve_so(inst, cfg); break;
    case Routing::UE: res = solve_ue(inst, cfg); break;
  }
  ev.value = res.total_cost;
  ev.iterations = res.iterations;
  ev.relative_gap = res.relative_gap;
  ev.certificate_violation = res.certificate.max_violation;
  return ev;
}

inline LambdaEvaluation lambda_eval(Routing routing, const CandidateSet& cs, Subset s, const SolverConfig& cfg = {},
                                    const LambdaOptions& opt = {}) {
  return lambda_eval(routing, make_state(cs, s), cfg, opt);
}

/// Worker count from NETDESIGN_THREADS; 0 or unset means serial.
inline std::size_t configured_threads() {
  const char* env = std::getenv("NETDESIGN_THREADS");
  if (!env || !*env) return 0;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 0) throw BadParams("NETDESIGN_THREADS must be a non-negative integer");
  return static_cast<std::size_t>(v);
}

/// Memoizing Lambda over subsets of one candidate set.
class LambdaTable {
 public:
  LambdaTable(const CandidateSet& cs, Routing routing, SolverConfig cfg = {}, LambdaOptions opt = {})
      : cs_(cs), routing_(routing), cfg_(cfg), opt_(opt) {}

  const LambdaEvaluation& at(Subset s) {
    {
      std::lock_guard lock(mu_);
      auto it = cache_.find(s);
      if (it != cache_.end()) return it->second;
    }
    LambdaEvaluation ev = lambda_eval(routing_, cs_, s, cfg_, opt_);
    std::lock_guard lock(mu_);
    return cache_.emplace(s, std::move(ev)).first->second;
  }

  double operator()(Subset s) { return at(s).value; }

  /// Evaluates all `subsets`, using up to `threads` workers (0 = serial).
  /// The first error in subset order is rethrown.
  void evaluate(const std::vector<Subset>& subsets, std::size_t threads) {
    std::vector<Subset> todo;
    {
      std::lock_guard lock(mu_);
      for (Subset s : subsets) {
        if (!cache_.count(s)) todo.push_back(s);
      }
    }
    std::sort(todo.begin(), todo.end());
    todo.erase(std::unique(todo.begin(), todo.end()), todo.end());
    if (threads <= 1 || todo.size() <= 1) {
      for (Subset s : todo) at(s);
      return;
    }
    std::vector<std::exception_ptr> errors(todo.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
      for (std::size_t i = next++; i < todo.size(); i = next++) {
        try {
          at(todo[i]);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    };
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < std::min(threads, todo.size()); ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  /// Every cached evaluation in bitmask order.
  std::vector<LambdaEvaluation> evaluations() const {
    std::lock_guard lock(mu_);
    std::vector<LambdaEvaluation> out;
    for (const auto& [s, ev] : cache_) out.push_back(ev);
    return out;
  }

  const CandidateSet& candidate_set() const { return cs_; }
  Routing routing() const { return routing_; }

 private:
  const CandidateSet& cs_;
  Routing routing_;
  SolverConfig cfg_;
  LambdaOptions opt_;
  mutable std::mutex mu_;
  std::map<Subset, LambdaEvaluation> cache_;
};

}  // namespace netdesign

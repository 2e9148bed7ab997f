#pragma once

// Cardinality-constrained design by greedy addition, with the exhaustive
// optimum alongside for small ground sets.

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "netdesign/design.hpp"

namespace netdesign {

inline constexpr std::size_t kMaxExhaustiveDesign = 10;

struct GreedyResult {
  /// Candidates in the order they were added.
  std::vector<std::size_t> picks;
  /// Lambda after 0, 1, ..., picks.size() additions.
  std::vector<double> trace;
  /// Best subset of at most `budget` candidates, when the ground set is small.
  std::optional<Subset> optimum;
  std::optional<double> optimum_value;
};

/// Adds, one at a time, the candidate giving the largest decrease of Lambda;
/// ties go to the lowest index. Stops after `budget` additions.
inline GreedyResult greedy_designer(LambdaTable& table, std::size_t budget, std::size_t threads = configured_threads()) {
  const CandidateSet& cs = table.candidate_set();
  const std::size_t n = cs.size();
  if (budget > n) throw BadParams("budget exceeds the number of candidates");
  GreedyResult res;
  Subset current = 0;
  res.trace.push_back(table(current));
  for (std::size_t round = 0; round < budget; ++round) {
    std::vector<Subset> options;
    for (std::size_t x = 0; x < n; ++x) {
      if (!contains(current, x)) options.push_back(with(current, x));
    }
    table.evaluate(options, threads);
    std::size_t best = n;
    double best_value = std::numeric_limits<double>::infinity();
    for (std::size_t x = 0; x < n; ++x) {
      if (contains(current, x)) continue;
      const double v = table(with(current, x));
      if (v < best_value) {
        best_value = v;
        best = x;
      }
    }
    current = with(current, best);
    res.picks.push_back(best);
    res.trace.push_back(best_value);
  }
  if (n <= kMaxExhaustiveDesign) {
    std::vector<Subset> all;
    for (Subset s = 0; s <= cs.ground_set(); ++s) {
      if (static_cast<std::size_t>(std::popcount(s)) <= budget) all.push_back(s);
    }
    table.evaluate(all, threads);
    for (Subset s : all) {
      const double v = table(s);
      if (!res.optimum_value || v < *res.optimum_value) {
        res.optimum = s;
        res.optimum_value = v;
      }
    }
  }
  return res;
}

inline GreedyResult greedy_designer(Routing routing, const CandidateSet& cs, std::size_t budget,
                                    const SolverConfig& cfg = {}, const LambdaOptions& opt = {}) {
  LambdaTable table(cs, routing, cfg, opt);
  return greedy_designer(table, budget);
}

}  // namespace netdesign

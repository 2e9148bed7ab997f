#pragma once

// Monotonicity and supermodularity checks for Lambda over a candidate set.
//
//   monotone non-increasing:  A ⊆ B  =>  Lambda(B) <= Lambda(A)
//   supermodular:             A ⊆ B, x ∉ B  =>
//                             Lambda(A) - Lambda(A + x) >= Lambda(B) - Lambda(B + x)

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "netdesign/design.hpp"

namespace netdesign {

enum class SetProperty { MonotoneNonincreasing, Supermodular };

inline std::string to_string(SetProperty p) {
  return p == SetProperty::MonotoneNonincreasing ? "monotone" : "supermodular";
}

inline SetProperty parse_property(const std::string& s) {
  if (s == "monotone") return SetProperty::MonotoneNonincreasing;
  if (s == "supermodular") return SetProperty::Supermodular;
  throw ParseError("unknown property '" + s + "'");
}

inline constexpr std::size_t kMaxExhaustiveMonotone = 12;
inline constexpr std::size_t kMaxExhaustiveSupermodular = 10;

struct CheckMode {
  enum class Kind { Exhaustive, Sampled };
  Kind kind = Kind::Exhaustive;
  std::uint64_t seed = 0;
  std::size_t trials = 0;

  static CheckMode exhaustive() { return {}; }
  static CheckMode sampled(std::uint64_t seed, std::size_t trials) { return {Kind::Sampled, seed, trials}; }
};

/// One checked instance of the defining inequality lhs >= rhs.
/// Monotonicity: lhs = Lambda(A), rhs = Lambda(B).
/// Supermodularity: lhs = Lambda(A) - Lambda(A + x), rhs = Lambda(B) - Lambda(B + x).
struct Witness {
  Subset a = 0;
  Subset b = 0;
  std::optional<std::size_t> x;
  double lhs = 0.0;
  double rhs = 0.0;
  /// lhs - rhs; a violation has margin < -tolerance.
  double margin = 0.0;
};

struct PropertyReport {
  SetProperty property = SetProperty::MonotoneNonincreasing;
  Routing routing = Routing::MC;
  bool holds = true;
  std::vector<Witness> witnesses;
  double tolerance = 0.0;
  /// Inequalities checked, and how many exist in total.
  std::size_t checked = 0;
  std::size_t population = 0;
  CheckMode mode;
  std::vector<LambdaEvaluation> evaluations;
};

/// Default tolerance: relative to Lambda(empty) for exact MC values,
/// absolute for iterative SO and UE values.
inline double default_property_tolerance(Routing routing, double lambda_empty) {
  return routing == Routing::MC ? 1e-6 * (1.0 + std::abs(lambda_empty)) : 5e-3;
}

namespace detail {

inline std::size_t pow3(std::size_t n) {
  std::size_t p = 1;
  for (std::size_t i = 0; i < n; ++i) p *= 3;
  return p;
}

/// Uniformly random subset of `of`.
inline Subset random_subset(std::mt19937_64& rng, Subset of) {
  Subset s = 0;
  for (std::size_t x : subset_indices(of)) {
    if (rng() & 1u) s = with(s, x);
  }
  return s;
}

inline PropertyReport run_check(SetProperty property, LambdaTable& table, std::optional<double> tol,
                                CheckMode mode, std::size_t threads) {
  const CandidateSet& cs = table.candidate_set();
  const std::size_t n = cs.size();
  const Subset ground = cs.ground_set();
  const bool monotone = property == SetProperty::MonotoneNonincreasing;

  PropertyReport rep;
  rep.property = property;
  rep.routing = table.routing();
  rep.mode = mode;
  // Strict pairs A ⊊ B, with x ranging outside B for supermodularity.
  const std::size_t two = std::size_t{1} << n;
  rep.population = monotone ? pow3(n) - two : (n == 0 ? 0 : n * (pow3(n - 1) - two / 2));

  std::vector<std::tuple<Subset, Subset, std::optional<std::size_t>>> triples;
  if (mode.kind == CheckMode::Kind::Exhaustive) {
    const std::size_t cap = monotone ? kMaxExhaustiveMonotone : kMaxExhaustiveSupermodular;
    if (n > cap) {
      throw BadParams("exhaustive " + to_string(property) + " check supports at most " + std::to_string(cap) +
                      " candidates; use sampled mode");
    }
    // Canonical order: x, then A, then B.
    if (monotone) {
      for (Subset a = 0; a <= ground; ++a) {
        for (Subset b = a;; b = (b + 1) | a) {
          if (b > ground) break;
          if (b != a) triples.emplace_back(a, b, std::nullopt);
          if (b == ground) break;
        }
      }
    } else {
      for (std::size_t x = 0; x < n; ++x) {
        const Subset rest = ground & ~with(0, x);
        for (Subset a = 0; a <= ground; ++a) {
          if (!is_subset(a, rest)) continue;
          for (Subset b = a;; b = (b + 1) | a) {
            if (b > ground) break;
            if (is_subset(b, rest) && b != a) triples.emplace_back(a, b, x);
            if (b == ground) break;
          }
        }
      }
    }
  } else {
    std::mt19937_64 rng(mode.seed);
    for (std::size_t t = 0; t < mode.trials; ++t) {
      if (monotone) {
        const Subset b = random_subset(rng, ground);
        triples.emplace_back(random_subset(rng, b), b, std::nullopt);
      } else {
        if (n == 0) break;
        const std::size_t x = static_cast<std::size_t>(rng() % n);
        const Subset b = random_subset(rng, ground & ~with(0, x));
        triples.emplace_back(random_subset(rng, b), b, x);
      }
    }
    std::sort(triples.begin(), triples.end(), [](const auto& l, const auto& r) {
      return std::make_tuple(std::get<2>(l).value_or(0), std::get<0>(l), std::get<1>(l)) <
             std::make_tuple(std::get<2>(r).value_or(0), std::get<0>(r), std::get<1>(r));
    });
    triples.erase(std::unique(triples.begin(), triples.end()), triples.end());
  }

  std::vector<Subset> needed{0};
  for (const auto& [a, b, x] : triples) {
    needed.push_back(a);
    needed.push_back(b);
    if (x) {
      needed.push_back(with(a, *x));
      needed.push_back(with(b, *x));
    }
  }
  table.evaluate(needed, threads);

  rep.tolerance = tol ? *tol : default_property_tolerance(table.routing(), table(0));
  for (const auto& [a, b, x] : triples) {
    Witness w{a, b, x, 0.0, 0.0, 0.0};
    if (monotone) {
      w.lhs = table(a);
      w.rhs = table(b);
    } else {
      w.lhs = table(a) - table(with(a, *x));
      w.rhs = table(b) - table(with(b, *x));
    }
    w.margin = w.lhs - w.rhs;
    ++rep.checked;
    if (w.margin < -rep.tolerance) rep.witnesses.push_back(w);
  }
  rep.holds = rep.witnesses.empty();
  rep.evaluations = table.evaluations();
  return rep;
}

}  // namespace detail

/// Checks Lambda(B) <= Lambda(A) + tol over pairs A ⊊ B. Exhaustive mode
/// takes at most 12 candidates.
inline PropertyReport check_monotonicity(LambdaTable& table, std::optional<double> tol = std::nullopt,
                                         CheckMode mode = CheckMode::exhaustive(),
                                         std::size_t threads = configured_threads()) {
  return detail::run_check(SetProperty::MonotoneNonincreasing, table, tol, mode, threads);
}

inline PropertyReport check_monotonicity(Routing routing, const CandidateSet& cs, std::optional<double> tol = std::nullopt,
                                         CheckMode mode = CheckMode::exhaustive(), const SolverConfig& cfg = {},
                                         const LambdaOptions& opt = {}) {
  LambdaTable table(cs, routing, cfg, opt);
  return check_monotonicity(table, tol, mode);
}

/// Checks the diminishing-returns inequality over triples A ⊊ B, x ∉ B.
/// Exhaustive mode takes at most 10 candidates.
inline PropertyReport check_supermodularity(LambdaTable& table, std::optional<double> tol = std::nullopt,
                                            CheckMode mode = CheckMode::exhaustive(),
                                            std::size_t threads = configured_threads()) {
  return detail::run_check(SetProperty::Supermodular, table, tol, mode, threads);
}

inline PropertyReport check_supermodularity(Routing routing, const CandidateSet& cs,
                                            std::optional<double> tol = std::nullopt,
                                            CheckMode mode = CheckMode::exhaustive(), const SolverConfig& cfg = {},
                                            const LambdaOptions& opt = {}) {
  LambdaTable table(cs, routing, cfg, opt);
  return check_supermodularity(table, tol, mode);
}

}  // namespace netdesign

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "netdesign.hpp"

namespace nd = netdesign;
using nd::Network;

namespace {

nd::Instance braess(bool with_edge) {
  return nd::materialize("braess", {{"with_edge", with_edge ? "true" : "false"}}).instance;
}

nd::Instance pigou() { return nd::materialize("pigou").instance; }

nd::Instance counterexample(const std::string& costing) {
  return nd::materialize("counterexample", {{"costing", costing}}).instance;
}

nd::Instance single_edge(double cost, double demand) {
  nd::Instance inst;
  inst.network.add_edge(0, 1, nd::CostModel::constant(cost), 2.0 * demand);
  inst.trips = {{0, 1, demand}};
  return inst;
}

/// Four unequal parallel routes under heavy demand; classic Frank-Wolfe
/// needs a few hundred iterations here.
nd::Instance four_route() {
  nd::Instance inst;
  for (nd::NodeId k = 2; k < 6; ++k) {
    inst.network.add_edge(0, k, nd::CostModel::greenshields(k, 1, 10));
    inst.network.add_edge(k, 1, nd::CostModel::bpr(1, 5, 0.5, 2));
  }
  inst.trips = {{0, 1, 20.0}};
  return inst;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

std::vector<nd::Instance> greenshields_corpus() {
  std::vector<nd::Instance> out{counterexample("greenshields"), four_route()};
  for (std::uint64_t seed = 100; seed < 110; ++seed) out.push_back(nd::testing::random_greenshields_instance(seed));
  return out;
}

}  // namespace

TEST(SolveMc, CounterexampleEndpoints) {
  const auto sc = nd::materialize("counterexample", {{"costing", "mc"}});
  const auto& cs = *sc.candidates;
  EXPECT_EQ(nd::solve_mc(nd::make_state(cs, 0).instance()).total_cost, 9.0);
  EXPECT_EQ(nd::solve_mc(sc.instance).total_cost, 5.0);
}

TEST(SolveMc, SingleEdge) {
  const auto r = nd::solve_mc(single_edge(4.5, 3));
  EXPECT_DOUBLE_EQ(r.total_cost, 13.5);
  EXPECT_DOUBLE_EQ(r.assignment.path_flow("0-1"), 3.0);
}

TEST(SolveMc, CapacitySplitsFlow) {
  nd::Instance inst;
  inst.network.add_edge(0, 1, nd::CostModel::constant(1), 1.0);
  inst.network.add_edge(0, 2, nd::CostModel::constant(2), 5.0);
  inst.network.add_edge(2, 1, nd::CostModel::constant(2), 5.0);
  inst.trips = {{0, 1, 3.0}};
  const auto r = nd::solve_mc(inst);
  EXPECT_NEAR(r.total_cost, 1.0 + 2.0 * 4.0, 1e-12);
  EXPECT_NEAR(r.assignment.path_flow("0-1"), 1.0, 1e-12);
  EXPECT_TRUE(nd::verify_certificate(inst, r, nd::CertificateKind::McDualFeasible).accepted());
  EXPECT_GT(r.duals.edge_price.at({0, 1}), 0.0);
}

TEST(SolveMc, InfeasibleAndUnreachable) {
  nd::Instance inst = single_edge(1, 3);
  inst.trips[0].demand = 7;
  EXPECT_THROW(nd::solve_mc(inst), nd::Infeasible);
  inst.network.add_node(9);
  inst.trips = {{0, 9, 1.0}};
  EXPECT_THROW(nd::solve_mc(inst), nd::Unreachable);
}

TEST(SolveMc, RejectsFlowDependentCosts) { EXPECT_THROW(nd::solve_mc(pigou()), nd::BadParams); }

TEST(SolveMc, MatchesGridOracle) {
  std::vector<nd::Instance> corpus;
  const auto sc = nd::materialize("counterexample", {{"costing", "mc"}});
  for (nd::Subset s = 0; s < 4; ++s) corpus.push_back(nd::make_state(*sc.candidates, s).instance());
  corpus.push_back(nd::materialize("fig4").instance);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto cs = nd::testing::random_parallel_mc(seed, 2);
    corpus.push_back(nd::make_state(cs, cs.ground_set()).instance());
  }
  for (const auto& inst : corpus) {
    // The grid search is exponential in the path count.
    if (nd::enumerate_all_paths(inst.network, inst.trips).size() > 4) continue;
    const auto oracle = nd::testing::mc_grid_oracle(inst);
    ASSERT_TRUE(oracle.feasible);
    const auto r = nd::solve_mc(inst);
    EXPECT_LE(r.total_cost, oracle.objective + 1e-9);
    EXPECT_GE(r.total_cost, oracle.objective - oracle.step - 1e-9);
    EXPECT_LE(nd::feasibility_violation(inst, r.assignment, true), 1e-9);
    EXPECT_TRUE(r.certificate.accepted());
  }
}

TEST(SolveMc, ConservesFlowOnRandomGrids) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto cs = nd::testing::random_grid_candidate_set(seed, nd::testing::Costing::Constant);
    const auto inst = nd::make_state(cs, cs.ground_set()).instance();
    const auto r = nd::solve_mc(inst);
    EXPECT_LE(nd::feasibility_violation(inst, r.assignment, true), 1e-9) << seed;
    EXPECT_LE(nd::verify_certificate(inst, r, nd::CertificateKind::McDualFeasible).max_violation, nd::kCertificateTol);
    EXPECT_NEAR(r.total_cost, nd::total_travel_time(inst.network, r.assignment), 1e-10 * r.total_cost);
  }
}

TEST(SolveSo, Pigou) {
  const auto r = nd::solve_so(pigou());
  EXPECT_NEAR(r.assignment.path_flow("0-1"), 0.5, 1e-4);
  EXPECT_NEAR(r.assignment.path_flow("0-2-1"), 0.5, 1e-4);
  EXPECT_NEAR(r.total_cost, 0.75, 1e-4);
}

TEST(SolveSo, CounterexampleFullNetwork) {
  EXPECT_NEAR(nd::solve_so(counterexample("greenshields")).total_cost, 24.97, 0.01);
}

TEST(SolveSo, BraessUnchangedByNewEdge) {
  EXPECT_NEAR(nd::solve_so(braess(true)).total_cost, 498.0, 1e-4);
  EXPECT_NEAR(nd::solve_so(braess(false)).total_cost, 498.0, 1e-4);
}

TEST(SolveUe, BraessWithoutEdge) {
  const auto r = nd::solve_ue(braess(false));
  EXPECT_NEAR(r.total_cost, 498.0, 1e-4);
  EXPECT_NEAR(r.per_trip_cost[0], 83.0, 1e-4);
}

TEST(SolveUe, BraessWithEdge) {
  const auto inst = braess(true);
  const auto r = nd::solve_ue(inst);
  EXPECT_NEAR(r.total_cost, 552.0, 1e-4);
  EXPECT_NEAR(r.per_trip_cost[0], 92.0, 1e-4);
  ASSERT_EQ(r.assignment.path_flows.size(), 3u);
  for (const auto& pf : r.assignment.path_flows) {
    EXPECT_NEAR(nd::path_travel_time(inst.network, r.assignment, pf.path), 92.0, 1e-4) << pf.path.key();
  }
}

TEST(SolveUe, Pigou) {
  const auto r = nd::solve_ue(pigou());
  EXPECT_NEAR(r.assignment.path_flow("0-1"), 0.0, 1e-4);
  EXPECT_NEAR(r.assignment.path_flow("0-2-1"), 1.0, 1e-4);
  EXPECT_NEAR(r.total_cost, 1.0, 1e-4);
  const auto cert = nd::verify_certificate(pigou(), r, nd::CertificateKind::UeWardrop);
  EXPECT_LE(cert.max_violation, 1e-6);
  EXPECT_NEAR(cert.trips[0].max_used - cert.trips[0].min_used, 0.0, 1e-6);
}

TEST(SolveUe, CounterexampleFullNetwork) {
  EXPECT_NEAR(nd::solve_ue(counterexample("greenshields")).total_cost, 26.66, 0.01);
}

TEST(FrankWolfe, ClassicVariantAgrees) {
  nd::SolverConfig cfg;
  cfg.relative_gap_tol = 1e-6;
  for (const auto& inst : {pigou(), braess(true), counterexample("greenshields"), four_route()}) {
    const auto pw = nd::solve_ue(inst);
    const auto cl = nd::solve_ue(inst, cfg, nd::FrankWolfeVariant::Classic);
    EXPECT_NEAR(cl.total_cost, pw.total_cost, 1e-3 * pw.total_cost);
  }
}

TEST(FrankWolfe, IterationCapRaises) {
  nd::SolverConfig cfg;
  cfg.max_iterations = 20;
  EXPECT_THROW(nd::solve_ue(four_route(), cfg, nd::FrankWolfeVariant::Classic), nd::NotConverged);
  EXPECT_NO_THROW(nd::solve_ue(four_route(), {}, nd::FrankWolfeVariant::Classic));
}

TEST(FrankWolfe, SaturatedStartRaises) {
  nd::Instance inst;
  inst.network.add_edge(0, 1, nd::CostModel::greenshields(1, 1, 2));
  inst.trips = {{0, 1, 3.0}};
  EXPECT_THROW(nd::solve_ue(inst), nd::CapacitySaturation);
}

TEST(FrankWolfe, SplitStartAvoidsSaturation) {
  nd::Instance inst;
  inst.network.add_edge(0, 1, nd::CostModel::greenshields(1, 1, 2));
  inst.network.add_edge(0, 2, nd::CostModel::greenshields(1, 1, 2));
  inst.network.add_edge(2, 1, nd::CostModel::greenshields(1, 1, 2));
  inst.trips = {{0, 1, 3.0}};
  const auto r = nd::solve_so(inst);
  for (const auto& [k, x] : r.assignment.edge_flows) EXPECT_LT(x, 2.0);
  EXPECT_TRUE(r.certificate.accepted());
}

TEST(FrankWolfe, ObjectiveTraceNonincreasing) {
  nd::SolverConfig cfg;
  cfg.record_trace = true;
  for (const auto& inst : greenshields_corpus()) {
    for (auto solve : {&nd::solve_so, &nd::solve_ue}) {
      const auto r = solve(inst, cfg, nd::FrankWolfeVariant::Pairwise);
      ASSERT_FALSE(r.objective_trace.empty());
      for (std::size_t i = 1; i < r.objective_trace.size(); ++i) {
        EXPECT_LE(r.objective_trace[i], r.objective_trace[i - 1] + 1e-12 * std::abs(r.objective_trace[i - 1]));
      }
    }
  }
}

TEST(FrankWolfe, UeTotalIndependentOfStart) {
  for (const auto& inst : greenshields_corpus()) {
    const double base = nd::solve_ue(inst).total_cost;
    for (std::size_t k : {2u, 3u, 5u}) {
      nd::SolverConfig cfg;
      cfg.initial_split = k;
      EXPECT_LE(rel(nd::solve_ue(inst, cfg).total_cost, base), 1e-6);
    }
  }
}

TEST(Certificates, AcceptedSolutionsSatisfyOptimality) {
  for (const auto& inst : greenshields_corpus()) {
    const auto so = nd::solve_so(inst);
    const auto so_cert = nd::verify_certificate(inst, so, nd::CertificateKind::SoMarginalEqualized);
    EXPECT_LE(so_cert.max_violation, 1e-6);
    for (const auto& t : so_cert.trips) EXPECT_LE(t.max_used - t.min_used, 1e-6 * (1 + std::abs(t.min_used)));

    const auto ue = nd::solve_ue(inst);
    const auto ue_cert = nd::verify_certificate(inst, ue, nd::CertificateKind::UeWardrop);
    EXPECT_LE(ue_cert.max_violation, 1e-6);
    double sum = 0.0;
    for (std::size_t m = 0; m < inst.trips.size(); ++m) sum += inst.trips[m].demand * ue.per_trip_cost[m];
    EXPECT_LE(std::abs(sum - ue.total_cost), 1e-8 * ue.total_cost);

    EXPECT_LE(nd::feasibility_violation(inst, so.assignment, false), 1e-9);
    EXPECT_LE(nd::feasibility_violation(inst, ue.assignment, false), 1e-9);
    EXPECT_NEAR(ue.total_cost, nd::total_travel_time(inst.network, ue.assignment), 1e-10 * ue.total_cost);
  }
}

TEST(Certificates, PerturbationIsReported) {
  const auto inst = braess(true);
  auto r = nd::solve_ue(inst);
  std::vector<nd::PathFlow> flows = r.assignment.path_flows;
  ASSERT_GE(flows.size(), 2u);
  flows[0].flow -= 0.1;
  flows[1].flow += 0.1;
  r.assignment = nd::FlowAssignment::from_paths(inst, flows);
  const auto cert = nd::verify_certificate(inst, r, nd::CertificateKind::UeWardrop);
  EXPECT_GT(cert.max_violation, nd::kCertificateTol);
  EXPECT_FALSE(cert.accepted());
}

TEST(AllOrNothing, CheapestCompositePath) {
  const auto inst = counterexample("mc");
  std::map<nd::EdgeKey, double> costs;
  for (const auto& [k, e] : inst.network.edges()) costs[k] = e.cost.evaluate(0);
  const auto a = nd::all_or_nothing(inst, costs);
  ASSERT_EQ(a.path_flows.size(), 1u);
  EXPECT_EQ(a.path_flows[0].path.key(), "1-9-10-11-12-4");
  EXPECT_EQ(a.path_flows[0].flow, 1.0);
}

TEST(AllOrNothing, SinglePath) {
  const auto inst = single_edge(2, 5);
  const auto a = nd::all_or_nothing(inst, {{{0, 1}, 2.0}});
  EXPECT_EQ(a.path_flow("0-1"), 5.0);
}

TEST(AllOrNothing, TieGoesToSmallerSequence) {
  nd::Instance inst;
  for (auto [a, b] : std::vector<std::pair<nd::NodeId, nd::NodeId>>{{0, 2}, {2, 3}, {0, 1}, {1, 3}}) {
    inst.network.add_edge(a, b, nd::CostModel::constant(1));
  }
  inst.trips = {{0, 3, 1.0}};
  std::map<nd::EdgeKey, double> costs;
  for (const auto& [k, e] : inst.network.edges()) costs[k] = 1.0;
  EXPECT_EQ(nd::all_or_nothing(inst, costs).path_flows[0].path.key(), "0-1-3");
}

TEST(AllOrNothing, AgreesWithEnumeration) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto cs = nd::testing::random_grid_candidate_set(seed, nd::testing::Costing::Constant);
    const auto inst = nd::make_state(cs, cs.ground_set()).instance();
    std::map<nd::EdgeKey, double> costs;
    for (const auto& [k, e] : inst.network.edges()) costs[k] = e.cost.evaluate(0);
    const auto a = nd::all_or_nothing(inst, costs);
    for (const auto& pf : a.path_flows) {
      const auto paths = nd::enumerate_paths(inst.network, inst.trips[pf.path.trip], pf.path.trip);
      double best = 1e300;
      const nd::Path* first = nullptr;
      for (const auto& p : paths) {
        const double c = nd::constant_path_cost(inst.network, p);
        if (c < best - 1e-12) {
          best = c;
          first = &p;
        }
      }
      EXPECT_EQ(nd::constant_path_cost(inst.network, pf.path), best);
      EXPECT_EQ(pf.path, *first);
    }
  }
}

TEST(Bridge, Pigou) {
  const auto b = nd::so_ue_bridge(pigou());
  EXPECT_NEAR(b.so_total, 0.75, 1e-4);
  EXPECT_NEAR(b.ue_marginal_total, 0.75, 1e-4);
}

TEST(Bridge, GreenshieldsCorpus) {
  for (const auto& inst : greenshields_corpus()) {
    const auto b = nd::so_ue_bridge(inst);
    EXPECT_LE(b.rel_difference, 1e-4);
  }
}

TEST(Bridge, ConstantCostsMatchMc) {
  nd::Instance inst = counterexample("mc");
  const double mc = nd::solve_mc(inst).total_cost;
  EXPECT_NEAR(nd::solve_so(inst).total_cost, mc, 1e-9);
  EXPECT_NEAR(nd::solve_ue(inst).total_cost, mc, 1e-9);
}

TEST(PriceOfAnarchy, Examples) {
  EXPECT_NEAR(nd::price_of_anarchy(pigou()), 4.0 / 3.0, 1e-4);
  nd::Instance one;
  one.network.add_edge(0, 1, nd::CostModel::greenshields(1, 1, 10));
  one.trips = {{0, 1, 5.0}};
  EXPECT_NEAR(nd::price_of_anarchy(one), 1.0, 1e-12);
  EXPECT_NEAR(nd::price_of_anarchy(braess(true)), 552.0 / 498.0, 1e-6);
}

TEST(PriceOfAnarchy, AtLeastOne) {
  for (const auto& inst : greenshields_corpus()) EXPECT_GE(nd::price_of_anarchy(inst), 1.0 - 1e-9);
}

TEST(Determinism, RepeatedSolvesAreBitIdentical) {
  const auto inst = counterexample("greenshields");
  const auto a = nd::solve_ue(inst);
  const auto b = nd::solve_ue(inst);
  EXPECT_EQ(a.total_cost, b.total_cost);
  EXPECT_EQ(a.assignment, b.assignment);
}

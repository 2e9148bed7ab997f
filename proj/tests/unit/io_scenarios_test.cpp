#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "netdesign.hpp"

namespace nd = netdesign;
using nd::Json;

namespace {

std::vector<nd::Scenario> every_scenario() {
  std::vector<nd::Scenario> out;
  for (const auto& info : nd::list_scenarios()) out.push_back(nd::materialize(info.name));
  out.push_back(nd::materialize("braess", {{"with_edge", "false"}}));
  out.push_back(nd::materialize("counterexample", {{"costing", "greenshields"}}));
  out.push_back(nd::materialize("parallel", {{"costing", "mc"}, {"costs", "9,7,4"}, {"d", "1"}, {"u", "1"}}));
  return out;
}

void expect_same_candidates(const nd::CandidateSet& a, const nd::CandidateSet& b) {
  EXPECT_EQ(a.tmpl.graph, b.tmpl.graph);
  EXPECT_EQ(a.spanning_tree, b.spanning_tree);
  EXPECT_EQ(a.candidates, b.candidates);
  EXPECT_EQ(a.names, b.names);
  EXPECT_EQ(a.declared_class, b.declared_class);
}

std::string minimal_instance() {
  return R"({"nodes":[0,1],"edges":[{"from":0,"to":1,"cost":{"kind":"constant","c":3},"capacity":"inf"}],
             "trips":[{"source":0,"sink":1,"demand":2}]})";
}

}  // namespace

TEST(Scenarios, ListIsComplete) {
  std::vector<std::string> names;
  for (const auto& info : nd::list_scenarios()) names.push_back(info.name);
  EXPECT_EQ(names, (std::vector<std::string>{"braess", "pigou", "fig3", "fig4", "counterexample", "parallel"}));
}

TEST(Scenarios, Errors) {
  EXPECT_THROW(nd::materialize("nope"), nd::UnknownScenario);
  EXPECT_THROW(nd::materialize("braess", {{"bogus", "1"}}), nd::BadParams);
  EXPECT_THROW(nd::materialize("braess", {{"demand", "-1"}}), nd::BadParams);
  EXPECT_THROW(nd::materialize("braess", {{"demand", "abc"}}), nd::BadParams);
  EXPECT_THROW(nd::materialize("braess", {{"with_edge", "maybe"}}), nd::BadParams);
  EXPECT_THROW(nd::materialize("parallel", {{"n", "0"}}), nd::BadParams);
  EXPECT_THROW(nd::materialize("parallel", {{"n", "2.5"}}), nd::BadParams);
  EXPECT_THROW(nd::materialize("counterexample", {{"costing", "bpr"}}), nd::BadParams);
  EXPECT_THROW(nd::materialize("parallel", {{"costing", "mc"}, {"costs", "1,,2"}}), nd::BadParams);
}

TEST(Scenarios, BraessShape) {
  const auto with = nd::materialize("braess");
  EXPECT_EQ(with.instance.network.node_count(), 4u);
  EXPECT_EQ(with.instance.network.edge_count(), 5u);
  const auto without = nd::materialize("braess", {{"with_edge", "false"}});
  EXPECT_EQ(without.instance.network.edge_count(), 4u);
  EXPECT_FALSE(without.instance.network.has_edge(1, 2));
  EXPECT_NEAR(nd::solve_ue(without.instance).total_cost, 498.0, 1e-4);
}

TEST(Scenarios, PigouShape) {
  const auto sc = nd::materialize("pigou");
  EXPECT_EQ(nd::enumerate_paths(sc.instance.network, sc.instance.trips[0]).size(), 2u);
  EXPECT_EQ(sc.instance.trips[0].demand, 1.0);
}

TEST(Scenarios, CounterexampleMcLadder) {
  const auto sc = nd::materialize("counterexample");
  const auto& cs = *sc.candidates;
  EXPECT_EQ(cs.names, (std::vector<std::string>{"orange", "blue"}));
  std::vector<double> values;
  for (nd::Subset s = 0; s <= cs.ground_set(); ++s) values.push_back(nd::lambda_eval(nd::Routing::MC, cs, s).value);
  EXPECT_EQ(values, (std::vector<double>{9, 9, 7, 5}));
}

TEST(Scenarios, GreenshieldsCounterexampleDefaults) {
  const auto sc = nd::materialize("counterexample", {{"costing", "greenshields"}});
  EXPECT_EQ(sc.instance.trips[0].demand, 5.0);
  EXPECT_EQ(sc.params.at("demand"), "5");
  const auto edge = sc.instance.network.edge(1, 2).cost;
  EXPECT_EQ(edge, nd::CostModel::greenshields(1, 1, 10));
  const auto explicit_demand = nd::materialize("counterexample", {{"costing", "greenshields"}, {"demand", "4"}});
  EXPECT_EQ(explicit_demand.instance.trips[0].demand, 4.0);
}

TEST(Scenarios, ParallelDefaultSolves) {
  const auto sc = nd::materialize("parallel");
  EXPECT_NEAR(nd::solve_so(sc.instance).total_cost, 6.0, 1e-6);
}

TEST(JsonFormat, EveryScenarioRoundTrips) {
  for (const auto& sc : every_scenario()) {
    SCOPED_TRACE(sc.name);
    const Json inst = nd::instance_to_json(sc.instance);
    const auto doc = nd::parse_document(inst.dump());
    EXPECT_EQ(doc.instance.network, sc.instance.network);
    EXPECT_EQ(doc.instance.trips, sc.instance.trips);
    EXPECT_FALSE(doc.candidates);
    EXPECT_EQ(nd::instance_to_json(doc.instance).dump(), inst.dump());

    const Json cs = nd::candidate_set_to_json(*sc.candidates);
    const auto cdoc = nd::parse_document(cs.dump());
    ASSERT_TRUE(cdoc.candidates);
    expect_same_candidates(*cdoc.candidates, *sc.candidates);
    EXPECT_EQ(nd::candidate_set_to_json(*cdoc.candidates).dump(), cs.dump());
  }
}

TEST(JsonFormat, CostKinds) {
  for (const auto& c : {nd::CostModel::constant(3), nd::CostModel::affine(50, 1), nd::CostModel::greenshields(1, 1, 10),
                        nd::CostModel::bpr(3, 10, 1, 4)}) {
    EXPECT_EQ(nd::cost_from_json(nd::cost_to_json(c)), c);
  }
  EXPECT_EQ(nd::cost_to_json(nd::CostModel::greenshields(1, 1, 10)).dump(),
            R"({"kind":"greenshields","l":1.0,"v_max":1.0,"u":10.0})");
  EXPECT_EQ(nd::cost_to_json(nd::CostModel::bpr(3, 10, 1, 4)).dump(),
            R"({"kind":"bpr","c0":3.0,"u":10.0,"alpha":1.0,"beta":4.0})");
}

TEST(JsonFormat, RejectsUnknownAndMissingKeys) {
  EXPECT_NO_THROW(nd::parse_document(minimal_instance()));
  auto j = Json::parse(minimal_instance());
  j["extra"] = 1;
  EXPECT_THROW(nd::parse_document(j.dump()), nd::ParseError);
  j = Json::parse(minimal_instance());
  j["edges"][0]["weight"] = 1;
  EXPECT_THROW(nd::parse_document(j.dump()), nd::ParseError);
  j = Json::parse(minimal_instance());
  j["edges"][0]["cost"]["b"] = 1;
  EXPECT_THROW(nd::parse_document(j.dump()), nd::ParseError);
  j = Json::parse(minimal_instance());
  j["trips"][0].erase("demand");
  EXPECT_THROW(nd::parse_document(j.dump()), nd::ParseError);
  j = Json::parse(minimal_instance());
  j["edges"][0]["cost"]["kind"] = "cubic";
  EXPECT_THROW(nd::parse_document(j.dump()), nd::ParseError);
  j = Json::parse(minimal_instance());
  j["edges"][0]["to"] = 7;
  EXPECT_THROW(nd::parse_document(j.dump()), nd::ParseError);
  j = Json::parse(minimal_instance());
  j["edges"][0]["cost"]["c"] = -1;
  EXPECT_THROW(nd::parse_document(j.dump()), nd::ParseError);
  EXPECT_THROW(nd::parse_document("{not json"), nd::ParseError);
  EXPECT_THROW(nd::parse_document("[]"), nd::ParseError);
}

TEST(JsonFormat, CandidateSectionValidated) {
  auto j = nd::candidate_set_to_json(*nd::materialize("fig4").candidates);
  auto broken = j;
  broken.erase("spanning_tree");
  EXPECT_THROW(nd::parse_document(broken.dump()), nd::ParseError);
  broken = j;
  broken["candidates"][0]["edges"].push_back({6, 0});
  EXPECT_THROW(nd::parse_document(broken.dump()), nd::ParseError);
  broken = j;
  broken["class"] = "fancy";
  EXPECT_THROW(nd::parse_document(broken.dump()), nd::ParseError);
  // A candidate that is not a single path fails validation.
  broken = j;
  broken["candidates"][0]["edges"].push_back({1, 2});
  EXPECT_THROW(nd::parse_document(broken.dump()), nd::InvalidNetwork);
}

TEST(Reports, SolveResultJson) {
  const auto r = nd::solve_ue(nd::materialize("pigou").instance);
  const Json j = nd::result_to_json(r);
  EXPECT_EQ(j["routing"], "ue");
  EXPECT_NEAR(j["total_cost"].get<double>(), 1.0, 1e-6);
  EXPECT_TRUE(j["path_flows"].contains("0-2-1"));
  EXPECT_TRUE(j["certificate"]["accepted"].get<bool>());
  EXPECT_EQ(j["certificate"]["kind"], "ue-wardrop");
}

TEST(Reports, PlotDataCounterexampleMc) {
  const auto cs = *nd::materialize("counterexample").candidates;
  const auto rep = nd::check_supermodularity(nd::Routing::MC, cs);
  EXPECT_EQ(nd::emit_plot_data(nd::plot_rows(rep.evaluations, cs)),
            "subset_bitmask,subset_names,routing,lambda_value\n"
            "0,{},mc,9\n"
            "1,{orange},mc,9\n"
            "2,{blue},mc,7\n"
            "3,\"{orange,blue}\",mc,5\n");
}

TEST(Reports, PlotDataCounterexampleSo) {
  const auto cs = *nd::materialize("counterexample", {{"costing", "greenshields"}}).candidates;
  const auto rep = nd::check_supermodularity(nd::Routing::SO, cs);
  const auto rows = nd::plot_rows(rep.evaluations, cs);
  ASSERT_EQ(rows.size(), 4u);
  const std::vector<double> expected{30, 29.28, 27.47, 24.97};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(rows[i].value, expected[i], 0.01);
}

TEST(Reports, EmptyPlotDataIsHeaderOnly) {
  EXPECT_EQ(nd::emit_plot_data({}), "subset_bitmask,subset_names,routing,lambda_value\n");
  EXPECT_EQ(nd::lambda_table_csv({}), "bitmask,lambda,gap\n");
}

TEST(Reports, PropertyReportJson) {
  const auto cs = *nd::materialize("counterexample").candidates;
  const Json j = nd::property_report_to_json(nd::check_supermodularity(nd::Routing::MC, cs), cs);
  EXPECT_EQ(j["verdict"], "violated");
  EXPECT_EQ(j["witnesses"][0]["a_names"], "{}");
  EXPECT_EQ(j["witnesses"][0]["b_names"], "{blue}");
  EXPECT_EQ(j["witnesses"][0]["x_name"], "{orange}");
  EXPECT_EQ(j["witnesses"][0]["margin"].get<double>(), -2.0);
  EXPECT_EQ(j["lambda"].size(), 4u);
}

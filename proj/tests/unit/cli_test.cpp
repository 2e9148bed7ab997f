#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <sys/wait.h>

#include "netdesign.hpp"
#include "netdesign/cli.hpp"

namespace nd = netdesign;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "netdesign_cli");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  Run r;
  r.code = nd::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

/// Runs the built executable through the shell; returns its exit status and stdout.
Run run_binary(const std::string& args) {
  Run r;
  const std::string cmd = std::string(NETDESIGN_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return {-1, "", ""};
  char buf[4096];
  while (std::fgets(buf, sizeof buf, pipe)) r.out += buf;
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("netdesign_cli_" + std::to_string(::getpid()))) {
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name, const std::string& content) const {
    const fs::path p = path_ / name;
    std::ofstream(p) << content;
    return p.string();
  }
  std::string path(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, SolvePigouUe) {
  const auto r = run({"solve", "--scenario", "pigou", "--routing", "ue"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nd::Json::parse(r.out);
  EXPECT_EQ(j["format_version"], 1);
  EXPECT_EQ(j["command"], "solve");
  EXPECT_NEAR(j["result"]["total_cost"].get<double>(), 1.0, 1e-6);
}

TEST(Cli, CheckCounterexampleMc) {
  const auto r = run({"check", "--property", "supermodular", "--scenario", "counterexample", "--routing", "mc"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("VIOLATED (A={}, B={blue}, x={orange}, margin -2)"), std::string::npos) << r.err;
  const auto j = nd::Json::parse(r.out);
  EXPECT_EQ(j["result"]["verdict"], "violated");
}

TEST(Cli, ExpectationExitCodes) {
  std::vector<std::string> base{"check", "--property", "supermodular", "--scenario", "counterexample", "--routing", "mc"};
  auto holds = base;
  holds.insert(holds.end(), {"--expect", "holds"});
  EXPECT_EQ(run(holds).code, 1);
  auto violated = base;
  violated.insert(violated.end(), {"--expect", "violated"});
  EXPECT_EQ(run(violated).code, 0);
}

TEST(Cli, LambdaBySubsetNamesAndIndices) {
  const auto a = run({"lambda", "--scenario", "counterexample", "--routing", "mc", "--subset", "blue,orange"});
  const auto b = run({"lambda", "--scenario", "counterexample", "--routing", "mc", "--subset", "0,1"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(nd::Json::parse(a.out)["result"]["value"].get<double>(), 5.0);
  const auto e = run({"lambda", "--scenario", "counterexample", "--routing", "mc", "--subset", ""});
  EXPECT_EQ(e.code, 0) << e.err;
  EXPECT_EQ(nd::Json::parse(e.out)["result"]["value"].get<double>(), 9.0);
  EXPECT_EQ(run({"lambda", "--scenario", "counterexample", "--routing", "mc", "--subset", "green"}).code, 64);
}

TEST(Cli, ParallelScenarioParams) {
  const auto r = run({"solve", "--scenario", "parallel", "--param", "n=3", "--param", "d=5", "--routing", "so"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(nd::Json::parse(r.out)["result"]["total_cost"].get<double>(), 6.0, 1e-6);
}

TEST(Cli, DesignCounterexample) {
  const auto r = run({"design", "--scenario", "counterexample", "--routing", "mc", "--budget", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nd::Json::parse(r.out)["result"];
  EXPECT_EQ(j["pick_names"], nd::Json::parse(R"(["{blue}","{orange}"])"));
  EXPECT_EQ(j["trace"], nd::Json::parse("[9.0,7.0,5.0]"));
}

TEST(Cli, ScenarioList) {
  const auto r = run({"scenario", "list"});
  ASSERT_EQ(r.code, 0);
  for (const char* name : {"braess", "pigou", "fig3", "fig4", "counterexample", "parallel"}) {
    EXPECT_NE(r.out.find(std::string(name) + ":"), std::string::npos) << name;
  }
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 64);
  EXPECT_EQ(run({"solve", "--scenario", "pigou"}).code, 64);
  EXPECT_EQ(run({"solve", "--scenario", "pigou", "--routing", "fast"}).code, 64);
  EXPECT_EQ(run({"solve", "--scenario", "atlantis", "--routing", "ue"}).code, 64);
  EXPECT_EQ(run({"solve", "--scenario", "pigou", "--param", "demand", "--routing", "ue"}).code, 64);
  EXPECT_EQ(run({"solve", "--scenario", "pigou", "--param", "speed=3", "--routing", "ue"}).code, 64);
  EXPECT_EQ(run({"solve", "--routing", "ue"}).code, 64);
  EXPECT_EQ(run({"solve", "--scenario", "pigou", "--network", "x.json", "--routing", "ue"}).code, 64);
  EXPECT_EQ(run({"solve", "--network", "/nonexistent/file.json", "--routing", "ue"}).code, 64);
  EXPECT_EQ(run({"check", "--property", "modular", "--scenario", "pigou", "--routing", "ue"}).code, 64);
  const auto r = run({"solve", "--scenario", "atlantis", "--routing", "ue"});
  EXPECT_NE(r.err.find("error [load]"), std::string::npos);
}

TEST(Cli, SolverErrors) {
  // MC on flow-dependent costs is rejected as bad input; Greenshields demand
  // above capacity fails in the solver.
  const auto mc = run({"solve", "--scenario", "pigou", "--routing", "mc"});
  EXPECT_NE(mc.code, 0);
  const auto sat = run({"solve", "--scenario", "parallel", "--param", "n=1", "--param", "d=20", "--routing", "so"});
  EXPECT_EQ(sat.code, 2) << sat.err;
  EXPECT_NE(sat.err.find("error [solve]"), std::string::npos);
}

TEST(Cli, NetworkFileAndOutputs) {
  TempDir dir;
  const std::string net = dir.file("braess.json", nd::candidate_set_to_json(*nd::materialize("braess").candidates).dump());
  const std::string out = dir.path("report.json");
  const std::string csv = dir.path("plot.csv");
  const auto r = run({"check", "--property", "monotone", "--network", net, "--routing", "ue", "--out", out, "--csv", csv,
                      "--expect", "violated"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("VIOLATED"), std::string::npos);
  const auto j = nd::Json::parse(slurp(out));
  EXPECT_EQ(j["result"]["verdict"], "violated");
  EXPECT_EQ(slurp(csv).rfind("subset_bitmask,subset_names,routing,lambda_value\n", 0), 0u);

  const std::string bad = dir.file("bad.json", "{\"nodes\": [0, 1], \"edges\": [");
  EXPECT_EQ(run({"solve", "--network", bad, "--routing", "so"}).code, 64);
  const std::string plain = dir.file("plain.json", nd::instance_to_json(nd::materialize("pigou").instance).dump());
  EXPECT_EQ(run({"solve", "--network", plain, "--routing", "so"}).code, 0);
  EXPECT_EQ(run({"lambda", "--network", plain, "--routing", "so", "--subset", "0"}).code, 64);
}

TEST(Cli, ReportsAreDeterministic) {
  const std::vector<std::string> args{"check", "--property", "supermodular", "--scenario", "counterexample",
                                      "--param", "costing=greenshields", "--routing", "ue"};
  EXPECT_EQ(run(args).out, run(args).out);
  const std::vector<std::string> sampled{"check", "--property", "monotone", "--scenario", "parallel", "--routing", "so",
                                         "--mode", "sampled", "--seed", "4", "--trials", "30"};
  EXPECT_EQ(run(sampled).out, run(sampled).out);
}

TEST(CliBinary, ExitCodeContract) {
  EXPECT_EQ(run_binary("solve --scenario pigou --routing ue").code, 0);
  EXPECT_EQ(run_binary("check --property supermodular --scenario counterexample --routing mc --expect holds").code, 1);
  EXPECT_EQ(run_binary("solve --scenario parallel --param n=1 --param d=20 --routing so").code, 2);
  EXPECT_EQ(run_binary("solve --scenario nowhere --routing so").code, 64);
  TempDir dir;
  const std::string bad = dir.file("malformed.json", "{\"nodes\": [0,");
  EXPECT_EQ(run_binary("solve --network " + bad + " --routing so").code, 64);
  const auto ok = run_binary("solve --scenario pigou --routing ue");
  EXPECT_NEAR(nd::Json::parse(ok.out)["result"]["total_cost"].get<double>(), 1.0, 1e-6);
}

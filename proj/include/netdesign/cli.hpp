#pragma once

// Command-line front end.
//
//   solve    --routing mc|so|ue (--scenario NAME | --network FILE)
//   lambda   --routing ... --subset i,j,...
//   check    --property monotone|supermodular --routing ... [--mode exhaustive|sampled]
//   design   --routing ... --budget K
//   scenario list
//
// Exit codes: 0 success, 1 verdict differs from --expect, 2 solver error,
// 64 usage or input error.

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "netdesign/greedy.hpp"
#include "netdesign/io_json.hpp"
#include "netdesign/scenarios.hpp"
#include "netdesign/set_properties.hpp"

namespace netdesign {

inline constexpr int kExitOk = 0;
inline constexpr int kExitExpectation = 1;
inline constexpr int kExitSolver = 2;
inline constexpr int kExitUsage = 64;

namespace detail {

struct Source {
  std::string scenario;
  std::vector<std::string> params;
  std::string network_file;
};

struct Loaded {
  Json origin;
  Instance instance;
  std::optional<CandidateSet> candidates;
};

inline ScenarioParams parse_params(const std::vector<std::string>& kvs) {
  ScenarioParams out;
  for (const std::string& kv : kvs) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw BadParams("--param expects key=value, got '" + kv + "'");
    out[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  return out;
}

inline Loaded load(const Source& src) {
  Loaded l;
  if (!src.scenario.empty() && !src.network_file.empty()) throw BadParams("give either --scenario or --network");
  if (!src.scenario.empty()) {
    Scenario sc = materialize(src.scenario, parse_params(src.params));
    l.origin = {{"scenario", sc.name}, {"params", sc.params}};
    l.instance = std::move(sc.instance);
    l.candidates = std::move(sc.candidates);
    return l;
  }
  if (src.network_file.empty()) throw BadParams("one of --scenario or --network is required");
  if (!src.params.empty()) throw BadParams("--param applies to --scenario only");
  std::ifstream in(src.network_file);
  if (!in) throw BadParams("cannot read " + src.network_file);
  std::stringstream ss;
  ss << in.rdbuf();
  Document doc = parse_document(ss.str());
  l.origin = {{"network", src.network_file}};
  l.instance = std::move(doc.instance);
  l.candidates = std::move(doc.candidates);
  return l;
}

inline const CandidateSet& need_candidates(const Loaded& l) {
  if (!l.candidates) throw BadParams("this command needs a candidate set (spanning_tree and candidates)");
  return *l.candidates;
}

inline Subset parse_subset(const std::string& text, const CandidateSet& cs) {
  Subset s = 0;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t x = cs.size();
    for (std::size_t i = 0; i < cs.size(); ++i) {
      if (cs.names[i] == item) x = i;
    }
    if (x == cs.size()) {
      std::size_t used = 0;
      try {
        x = std::stoul(item, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != item.size() || x >= cs.size()) throw BadParams("unknown candidate '" + item + "'");
    }
    s = with(s, x);
  }
  return s;
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw BadParams("cannot write " + path);
  out << text;
}

inline Json envelope(const std::string& command, const Loaded& l, const SolverConfig& cfg) {
  Json j;
  j["format_version"] = kFormatVersion;
  j["command"] = command;
  j["source"] = l.origin;
  j["config"] = config_to_json(cfg);
  return j;
}

inline SolveResult solve(Routing r, const Instance& inst, const SolverConfig& cfg) {
  switch (r) {
    case Routing::MC: return solve_mc(inst, cfg.path_limit);
    case Routing::SO: return solve_so(inst, cfg);
    case Routing::UE: return solve_ue(inst, cfg);
  }
  throw BadParams("unknown routing");
}

}  // namespace detail

/// Runs one command line. Reports go to --out when given, else to `out`.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Path additions to transport networks under MC, SO and UE routing", "netdesign"};
  app.require_subcommand(1);

  detail::Source src;
  std::string routing_text;
  std::string out_path;
  std::string csv_path;
  SolverConfig cfg;
  bool no_closed_forms = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--routing", routing_text, "mc, so or ue")->required()->check(CLI::IsMember({"mc", "so", "ue"}));
    sub->add_option("--scenario", src.scenario, "built-in scenario name");
    sub->add_option("--param", src.params, "scenario parameter key=value, repeatable");
    sub->add_option("--network", src.network_file, "instance or candidate-set JSON file");
    sub->add_option("--out", out_path, "write the JSON report here");
    sub->add_option("--gap-tol", cfg.relative_gap_tol, "Frank-Wolfe relative gap")->check(CLI::PositiveNumber);
    sub->add_option("--max-iters", cfg.max_iterations, "Frank-Wolfe iteration cap")->check(CLI::PositiveNumber);
  };

  CLI::App* solve = app.add_subcommand("solve", "solve one routing problem");
  add_common(solve);

  CLI::App* lambda = app.add_subcommand("lambda", "evaluate Lambda on one subset of candidates");
  add_common(lambda);
  std::string subset_text;
  lambda->add_option("--subset", subset_text, "candidate indices or names, comma separated")->required();
  lambda->add_flag("--no-closed-forms", no_closed_forms, "always run the full solver");

  CLI::App* check = app.add_subcommand("check", "check monotonicity or supermodularity of Lambda");
  add_common(check);
  std::string property_text;
  std::string mode_text = "exhaustive";
  std::uint64_t seed = 0;
  std::size_t trials = 1000;
  std::optional<double> tol;
  std::string expect_text;
  check->add_option("--property", property_text, "monotone or supermodular")
      ->required()
      ->check(CLI::IsMember({"monotone", "supermodular"}));
  check->add_option("--mode", mode_text, "exhaustive or sampled")->check(CLI::IsMember({"exhaustive", "sampled"}));
  check->add_option("--seed", seed, "sampling seed");
  check->add_option("--trials", trials, "sampled triples")->check(CLI::PositiveNumber);
  check->add_option("--tol", tol, "violation tolerance")->check(CLI::NonNegativeNumber);
  check->add_option("--expect", expect_text, "holds or violated")->check(CLI::IsMember({"holds", "violated"}));
  check->add_option("--csv", csv_path, "write plot data CSV here");
  check->add_flag("--no-closed-forms", no_closed_forms, "always run the full solver");

  CLI::App* design = app.add_subcommand("design", "greedy additions under a cardinality budget");
  add_common(design);
  std::size_t budget = 1;
  design->add_option("--budget", budget, "number of additions")->required();

  CLI::App* scenario = app.add_subcommand("scenario", "built-in scenarios");
  CLI::App* scenario_list = scenario->add_subcommand("list", "list scenarios and their parameters");
  scenario->require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error [usage]: " << e.what() << "\n";
    return kExitUsage;
  }

  auto emit = [&](const Json& report, const std::string& summary) {
    const std::string text = report.dump(2) + "\n";
    if (out_path.empty()) {
      out << text;
    } else {
      detail::write_text(out_path, text);
      out << summary << "\n";
    }
  };

  std::string stage = "load";
  try {
    if (scenario_list->parsed()) {
      for (const ScenarioInfo& info : list_scenarios()) {
        out << info.name << ": " << info.summary;
        if (!info.defaults.empty()) {
          out << " [";
          bool first = true;
          for (const auto& [k, v] : info.defaults) {
            out << (first ? "" : " ") << k << "=" << v;
            first = false;
          }
          out << "]";
        }
        out << "\n";
      }
      return kExitOk;
    }

    const Routing routing = parse_routing(routing_text);
    const detail::Loaded loaded = detail::load(src);
    LambdaOptions lopt;
    lopt.closed_forms = !no_closed_forms;
    lopt.path_limit = cfg.path_limit;

    if (solve->parsed()) {
      stage = "solve";
      const SolveResult r = detail::solve(routing, loaded.instance, cfg);
      Json rep = detail::envelope("solve", loaded, cfg);
      rep["result"] = result_to_json(r);
      std::ostringstream s;
      s << "solve " << to_string(routing) << ": total " << r.total_cost << ", certificate "
        << (r.certificate.accepted() ? "accepted" : "rejected");
      emit(rep, s.str());
      return kExitOk;
    }

    const CandidateSet& cs = detail::need_candidates(loaded);
    if (lambda->parsed()) {
      const Subset s = detail::parse_subset(subset_text, cs);
      stage = "solve";
      const LambdaEvaluation ev = lambda_eval(routing, cs, s, cfg, lopt);
      Json rep = detail::envelope("lambda", loaded, cfg);
      rep["result"] = lambda_to_json(ev, cs);
      std::ostringstream sum;
      sum << "lambda " << to_string(routing) << " " << cs.label(s) << " = " << ev.value;
      emit(rep, sum.str());
      return kExitOk;
    }

    if (check->parsed()) {
      const SetProperty property = parse_property(property_text);
      const CheckMode mode = mode_text == "sampled" ? CheckMode::sampled(seed, trials) : CheckMode::exhaustive();
      LambdaTable table(cs, routing, cfg, lopt);
      stage = "check";
      const PropertyReport r = property == SetProperty::Supermodular ? check_supermodularity(table, tol, mode)
                                                                     : check_monotonicity(table, tol, mode);
      Json rep = detail::envelope("check", loaded, cfg);
      rep["result"] = property_report_to_json(r, cs);
      if (!csv_path.empty()) detail::write_text(csv_path, emit_plot_data(plot_rows(r.evaluations, cs)));
      std::ostringstream sum;
      sum << to_string(property) << " " << to_string(routing) << ": " << (r.holds ? "HOLDS" : "VIOLATED");
      if (!r.witnesses.empty()) {
        const Witness& w = r.witnesses.front();
        sum << " (A=" << cs.label(w.a) << ", B=" << cs.label(w.b);
        if (w.x) sum << ", x=" << cs.label(with(0, *w.x));
        sum << ", margin " << w.margin << ")";
      }
      emit(rep, sum.str());
      if (out_path.empty()) err << sum.str() << "\n";
      if (!expect_text.empty() && (expect_text == "holds") != r.holds) {
        err << "expected " << expect_text << "\n";
        return kExitExpectation;
      }
      return kExitOk;
    }

    if (design->parsed()) {
      LambdaTable table(cs, routing, cfg, lopt);
      stage = "design";
      const GreedyResult g = greedy_designer(table, budget);
      Json rep = detail::envelope("design", loaded, cfg);
      Json res;
      res["routing"] = to_string(routing);
      res["budget"] = budget;
      res["picks"] = g.picks;
      Json names = Json::array();
      for (std::size_t x : g.picks) names.push_back(cs.label(with(0, x)));
      res["pick_names"] = names;
      res["trace"] = g.trace;
      if (g.optimum) {
        res["optimum"] = {{"subset", *g.optimum}, {"names", cs.label(*g.optimum)}, {"value", *g.optimum_value}};
      } else {
        res["optimum"] = nullptr;
      }
      rep["result"] = res;
      std::ostringstream sum;
      sum << "design " << to_string(routing) << ": " << g.trace.back();
      emit(rep, sum.str());
      return kExitOk;
    }
  } catch (const ParseError& e) {
    err << "error [" << stage << "]: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UnknownScenario& e) {
    err << "error [" << stage << "]: " << e.what() << "\n";
    return kExitUsage;
  } catch (const BadParams& e) {
    err << "error [" << stage << "]: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvalidNetwork& e) {
    err << "error [" << stage << "]: " << e.what() << "\n";
    return stage == "load" ? kExitUsage : kExitSolver;
  } catch (const TemplateConsistencyError& e) {
    err << "error [" << stage << "]: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error [" << stage << "]: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::exception& e) {
    err << "error [" << stage << "]: " << e.what() << "\n";
    return kExitSolver;
  }
  return kExitUsage;
}

}  // namespace netdesign

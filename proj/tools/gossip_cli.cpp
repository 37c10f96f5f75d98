// Command-line front end: scenario ingestion, analysis / derivation /
// simulation / verification subcommands and report emission.
//
// Exit codes: 0 success; 2 parse or validation failure; 3 theorem
// precondition failure (including non-holonomic input); 4 convergence
// failure or violated theorem clause.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "gossip/io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitPrecondition = 3;
constexpr int kExitConvergence = 4;

struct Common {
  std::string scenario_path;
  std::string mode;  // "", "exact" or "float"; empty defers to the scenario
  double tol = 1e-10;
  long cap = 0;
  long reps = 10000;
  std::uint64_t seed = 0;
  std::string out_dir;
  int walks = 5;
  std::string walk_file;
};

void emit(const Common& c, const std::string& name, const std::string& body) {
  if (c.out_dir.empty()) {
    std::cout << body << "\n";
    return;
  }
  std::filesystem::create_directories(c.out_dir);
  gossip::write_file_atomic(
      (std::filesystem::path(c.out_dir) / name).string(), body);
}

void emit_json(const Common& c, const std::string& name, gossip::Json j) {
  j["seed"] = c.seed;
  emit(c, name, j.dump(2));
}

bool exact_mode(const Common& c, const gossip::Scenario& s) {
  const std::string& m = c.mode.empty() ? s.mode : c.mode;
  return m == "exact";
}

gossip::ConvergenceOptions options(const Common& c,
                                   const gossip::Scenario& s) {
  gossip::ConvergenceOptions opts;
  opts.tol = c.tol;
  opts.max_reps = c.reps;
  opts.exact = exact_mode(c, s);
  return opts;
}

int cmd_analyze(const Common& c) {
  gossip::Scenario s = gossip::load_scenario(c.scenario_path);
  gossip::GossipGraph g = s.to_graph();
  gossip::Diagnostics diag = gossip::validate(g);
  gossip::GraphHolonomy h = gossip::analyze_graph(g, s.weight, c.cap);
  emit_json(c, "analysis.json", gossip::analysis_to_json(g, diag, h));
  if (!h.holonomic) {
    std::cerr << "graph is not w-holonomic\n";
    return kExitPrecondition;
  }
  if (!diag.theorem_preconditions()) {
    for (const auto& issue : diag.issues) std::cerr << issue << "\n";
    return kExitPrecondition;
  }
  return kExitOk;
}

int cmd_derive(const Common& c, bool seeded) {
  gossip::Scenario s = gossip::load_scenario(c.scenario_path);
  gossip::GossipGraph g = s.to_graph();
  gossip::GraphHolonomy h = gossip::analyze_graph(g, s.weight, c.cap);
  if (!h.holonomic || h.no_cycles) {
    std::cerr << (h.no_cycles ? "graph has no cycles of length > 2\n"
                              : "graph is not w-holonomic\n");
    return kExitPrecondition;
  }
  gossip::DerivedGraph d = gossip::build_derived_graph(g, h);
  gossip::DerivedWalk walk = seeded
                                 ? gossip::exhaustive_closed_walk(d, c.seed)
                                 : gossip::exhaustive_closed_walk(d);
  emit_json(c, "derived.json", gossip::derived_to_json(d));
  emit(c, "derived.dot", gossip::derived_to_dot(d));
  emit_json(c, "walk.json", gossip::walk_to_json(d, walk));
  return kExitOk;
}

int cmd_simulate(const Common& c, bool seeded) {
  gossip::Scenario s = gossip::load_scenario(c.scenario_path);
  gossip::GossipGraph g = s.to_graph();
  gossip::GraphHolonomy h = gossip::analyze_graph(g, s.weight, c.cap);
  if (!h.holonomic || h.no_cycles) {
    std::cerr << (h.no_cycles ? "graph has no cycles of length > 2\n"
                              : "graph is not w-holonomic\n");
    return kExitPrecondition;
  }
  gossip::DerivedGraph d = gossip::build_derived_graph(g, h);
  gossip::DerivedWalk walk;
  if (!c.walk_file.empty()) {
    std::ifstream in(c.walk_file);
    if (!in) {
      std::cerr << "cannot open walk file: " << c.walk_file << "\n";
      return kExitParse;
    }
    gossip::Json j;
    in >> j;
    walk = gossip::parse_walk(d, j);
  } else {
    walk = seeded ? gossip::exhaustive_closed_walk(d, c.seed)
                  : gossip::exhaustive_closed_walk(d);
  }
  gossip::LimitReport rep =
      gossip::run_to_convergence(g, h, d, walk, options(c, s));
  emit_json(c, "limit_report.json", gossip::limit_report_to_json(rep));
  emit(c, "trace.csv", gossip::trace_to_csv(rep));
  if (!rep.converged) {
    std::cerr << (rep.error.empty() ? "did not converge" : rep.error) << "\n";
    return kExitConvergence;
  }
  return kExitOk;
}

int cmd_verify(const Common& c) {
  gossip::Scenario s = gossip::load_scenario(c.scenario_path);
  gossip::GossipGraph g = s.to_graph();
  std::vector<std::uint64_t> seeds;
  for (int i = 0; i < c.walks; ++i) seeds.push_back(c.seed + i);
  gossip::TheoremVerdict v =
      gossip::verify_theorem(g, s.weight, seeds, options(c, s));
  emit_json(c, "verdict.json", gossip::verdict_to_json(v));
  if (!v.preconditions) {
    for (const auto& issue : v.precondition_issues)
      std::cerr << issue << "\n";
    return kExitPrecondition;
  }
  for (const auto& cv : v.walks)
    if (!cv.all_pass()) {
      std::cerr << "walk seed " << cv.walk_seed << " failed"
                << (cv.detail.empty() ? "" : ": " + cv.detail) << "\n";
      return kExitConvergence;
    }
  return kExitOk;
}

int cmd_gen(const Common& c, const std::string& kind) {
  gossip::Fixture f = gossip::gen_fixture(kind, c.seed);
  gossip::Scenario s;
  s.n = f.graph.n();
  s.m = f.graph.m();
  s.edges = f.graph.edges();
  for (size_t e = 0; e < s.edges.size(); ++e)
    s.pre_local.push_back(f.graph.pre_local(static_cast<int>(e)));
  s.weight = f.w;
  emit_json(c, "scenario.json", gossip::scenario_to_json(s));

  gossip::Json truth;
  truth["kind"] = kind;
  truth["global"] = gossip::partition_to_json(f.global);
  truth["epsilon"] = f.epsilon ? gossip::Json(gossip::to_string(*f.epsilon))
                               : gossip::Json("no contraction blocks");
  truth["group_size"] = f.group_size;
  truth["limit_blocks"] = gossip::Json::array();
  for (const auto& p : f.limit_blocks)
    truth["limit_blocks"].push_back(gossip::rational_row_json(p));
  truth["orders"] = gossip::Json::array();
  for (const auto& [nodes, ord] : f.order_by_nodes) {
    gossip::Json entry;
    entry["nodes"] = gossip::Json::array();
    for (int v : nodes) entry["nodes"].push_back(v + 1);
    entry["order_w"] = ord;
    truth["orders"].push_back(entry);
  }
  emit_json(c, "truth.json", truth);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weighted gossip consensus analyzer"};
  app.require_subcommand(1);

  Common c;
  bool seeded = false;
  auto add_common = [&](CLI::App* sub, bool needs_scenario) {
    if (needs_scenario)
      sub->add_option("scenario", c.scenario_path, "scenario JSON file")
          ->required();
    sub->add_option("--mode", c.mode, "exact|float")
        ->check(CLI::IsMember({"exact", "float"}));
    sub->add_option("--tol", c.tol, "convergence tolerance on semi-norms");
    sub->add_option("--cap", c.cap, "order-search cap override");
    sub->add_option("--reps", c.reps, "max exhaustive-walk repetitions");
    sub->add_option("--seed", c.seed, "64-bit seed")
        ->each([&](const std::string&) { seeded = true; });
    sub->add_option("--out", c.out_dir, "output directory (default: stdout)");
    sub->add_option("--walks", c.walks, "number of seeded walks (verify)");
  };

  CLI::App* analyze = app.add_subcommand("analyze", "holonomy analysis");
  add_common(analyze, true);
  CLI::App* derive =
      app.add_subcommand("derive", "derived graph + canonical walk");
  add_common(derive, true);
  CLI::App* simulate =
      app.add_subcommand("simulate", "run to convergence along a walk");
  add_common(simulate, true);
  simulate->add_option("--walk", c.walk_file, "walk JSON file");
  CLI::App* verify =
      app.add_subcommand("verify", "theorem clause checks on seeded walks");
  add_common(verify, true);
  std::string kind;
  CLI::App* gen = app.add_subcommand("gen", "emit a ground-truth fixture");
  gen->add_option("kind", kind, "F1|F2|F3")
      ->required()
      ->check(CLI::IsMember({"F1", "F2", "F3"}));
  add_common(gen, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(analyze)) return cmd_analyze(c);
    if (app.got_subcommand(derive)) return cmd_derive(c, seeded);
    if (app.got_subcommand(simulate)) return cmd_simulate(c, seeded);
    if (app.got_subcommand(verify)) return cmd_verify(c);
    if (app.got_subcommand(gen)) return cmd_gen(c, kind);
  } catch (const gossip::ScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConvergence;
  }
  return kExitOk;
}

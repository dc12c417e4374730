// blockham command line: sweep, check, solve, stitch.
// Exit codes: 0 success, 2 negative verdict, 1 error.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "blockham/edge_list.hpp"
#include "blockham/exposure.hpp"
#include "blockham/harness.hpp"
#include "blockham/rng.hpp"
#include "blockham/solver.hpp"
#include "blockham/stitcher.hpp"
#include "blockham/structure.hpp"

using namespace blockham;

namespace {

std::vector<std::size_t> parse_sizes(const std::string& s) {
  ExperimentConfig cfg;
  cfg.set("sizes", s);
  return cfg.sizes;
}

void print_cycle(const std::vector<Vertex>& cycle) {
  for (std::size_t i = 0; i < cycle.size(); ++i) std::cout << (i ? " " : "") << cycle[i];
  std::cout << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hamiltonicity experiments on the stochastic block model"};
  app.require_subcommand(1);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Monte Carlo sweep over a window of c values");
  std::string config_path, sizes, regime, window, out, format = "csv";
  std::size_t trials = 0, threads = 0, restarts = 0;
  std::uint64_t seed = 0, step_budget = 0;
  sweep->add_option("--config", config_path, "key=value config file");
  sweep->add_option("--sizes", sizes, "block sizes, e.g. 300,300");
  sweep->add_option("--regime", regime, "dense | p_small | q_small");
  sweep->add_option("--window", window, "lo:hi:step or a comma list");
  sweep->add_option("--trials", trials);
  sweep->add_option("--seed", seed);
  sweep->add_option("--threads", threads);
  sweep->add_option("--restarts", restarts);
  sweep->add_option("--step-budget", step_budget);
  sweep->add_option("--out", out, "output file (default stdout)");
  sweep->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));

  // check
  auto* check = app.add_subcommand("check", "Evaluate a structural predicate on a graph file");
  std::string graph_path, predicate = "d2";
  bool as_json = false;
  std::uint64_t check_seed = 0;
  check->add_option("graph", graph_path)->required()->check(CLI::ExistingFile);
  check->add_option("--predicate", predicate)
      ->check(CLI::IsMember({"d2", "cnt", "expn", "sexpn", "ssexpn", "tpcl", "c1", "c2", "c3",
                             "c4", "c5"}));
  check->add_option("--seed", check_seed);
  check->add_flag("--json", as_json);

  // solve
  auto* solve = app.add_subcommand("solve", "Search for a Hamilton cycle");
  std::string solve_path, forced_path;
  PosaOptions posa;
  solve->add_option("graph", solve_path)->required()->check(CLI::ExistingFile);
  solve->add_option("--forced", forced_path, "file of forced pairs")->check(CLI::ExistingFile);
  solve->add_option("--seed", posa.seed);
  solve->add_option("--restarts", posa.restarts);

  // stitch
  auto* stitch_cmd = app.add_subcommand("stitch", "Case-3 stitching on a sampled graph");
  std::string stitch_sizes = "200,200";
  double stitch_c = 2.0;
  std::uint64_t stitch_seed = 0;
  stitch_cmd->add_option("--sizes", stitch_sizes);
  stitch_cmd->add_option("--c", stitch_c, "target window offset");
  stitch_cmd->add_option("--seed", stitch_seed);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sweep) {
      ExperimentConfig cfg;
      if (!config_path.empty()) cfg = load_config(config_path);
      if (!sizes.empty()) cfg.set("sizes", sizes);
      if (!regime.empty()) cfg.set("regime", regime);
      if (!window.empty()) cfg.set("window", window);
      if (sweep->count("--trials")) cfg.trials = trials;
      if (sweep->count("--seed")) cfg.seed = seed;
      if (sweep->count("--threads")) cfg.threads = threads;
      if (sweep->count("--restarts")) cfg.restarts = restarts;
      if (sweep->count("--step-budget")) cfg.step_budget = step_budget;
      if (!out.empty()) cfg.out = out;
      cfg.validate();
      for (const auto& w : cfg.lints()) std::cerr << "warning: " << w << "\n";
      const auto res = run_sweep(cfg);
      emit(res.rows, format == "json" ? EmitFormat::Json : EmitFormat::Csv, cfg.out);
      return 0;
    }

    if (*check) {
      const BlockedGraph g = load_edge_list(graph_path);
      PredicateReport rep;
      if (predicate == "d2") {
        rep = check_d2(g);
      } else if (predicate == "cnt") {
        rep = check_connected(g);
      } else if (predicate == "expn") {
        ExpnOptions o;
        o.seed = check_seed;
        rep = check_expn(g, o);
      } else if (predicate == "sexpn" || predicate == "ssexpn") {
        SexpnOptions o;
        o.expn.seed = check_seed;
        o.strong = predicate == "ssexpn";
        rep = check_sexpn(g, o);
      } else if (predicate == "tpcl") {
        TpclOptions o;
        o.sexpn.expn.seed = check_seed;
        rep = check_tpcl(g, o);
      } else {
        CPropertyOptions o;
        o.seed = check_seed;
        const auto all = check_c_properties(g, o);
        rep = all.at(static_cast<std::size_t>(predicate[1] - '1'));
      }
      std::cout << (as_json ? rep.to_json() + "\n" : rep.to_text());
      return rep.holds ? 0 : 2;
    }

    if (*solve) {
      const BlockedGraph g = load_edge_list(solve_path);
      ForcedEdgeSet forced;
      if (!forced_path.empty()) {
        std::ifstream in(forced_path);
        forced = ForcedEdgeSet(read_pair_list(in));
      }
      const auto r = posa_solve(g, forced, posa);
      switch (r.status) {
        case PosaStatus::Found:
          std::cout << "status=found\n";
          print_cycle(r.cycle);
          return 0;
        case PosaStatus::Infeasible:
          std::cout << "status=infeasible reason=" << r.reason << "\n";
          return 2;
        case PosaStatus::Failed:
          std::cout << "status=failed best_length=" << r.best_length
                    << " restarts=" << r.restarts_used << "\n";
          return 2;
      }
    }

    if (*stitch_cmd) {
      const BlockPartition part(parse_sizes(stitch_sizes));
      const auto [p, q] = regime_params(part, Regime::QSmall, stitch_c);
      const ModelParams params(part, p, q);
      const auto sched = schedule(ExposureVariant::Case3, params,
                                  default_exposure_a(ExposureVariant::Case3, part));
      const auto pair = two_stage_generate(sched, stream_seed(stitch_seed, 0));
      StitchOptions opts;
      opts.seed = stream_seed(stitch_seed, 1);
      const auto res = stitch_pipeline(pair.final_graph, pair.base, opts);
      for (const auto& line : res.trace) std::cout << line << "\n";
      for (const auto& a : res.audit.advisories) std::cout << "advisory: " << a << "\n";
      std::cout << "status=" << to_string(res.status);
      if (!res.violation.empty()) std::cout << " detail=" << res.violation;
      std::cout << "\n";
      if (res.cycle) print_cycle(*res.cycle);
      return res.status == StitchResult::Status::Found ? 0 : 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

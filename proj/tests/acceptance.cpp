// Acceptance criteria, one pass/fail line each. Run one with --criterion N.

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "CLI11.hpp"
#include "blockham/exposure.hpp"
#include "blockham/harness.hpp"
#include "blockham/model.hpp"
#include "blockham/solver.hpp"
#include "blockham/stitcher.hpp"
#include "blockham/structure.hpp"
#include "counterexamples.hpp"
#include "oracles.hpp"

using namespace blockham;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* spec, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, x);
  return buf;
}

// 1. Coupling identities on a 20 x 20 grid.
Outcome coupling_identities() {
  double worst = 0.0;
  std::size_t points = 0, three = 0;
  for (int i = 1; i <= 20; ++i) {
    for (int j = 1; j <= 20; ++j) {
      const double p = i / 21.0, bar = j / 21.0;
      if (p < bar) continue;
      ++points;
      const ModelParams params(BlockPartition({10, 10}), p, p);
      const auto s = schedule_from_bar(ExposureVariant::TwoStage, params, bar);
      worst = std::max(worst, std::abs(1 - (1 - s.p1) * (1 - bar) - p));
      worst = std::max(worst, std::abs(1 - (1 - s.q1) * (1 - bar) - p));
      worst = std::max(worst, std::abs(p * (1 - s.p_star) - s.p1));
      worst = std::max(worst, std::abs(p * (1 - s.q_star) - s.q1));
      if (p >= 1 - (1 - bar) * (1 - bar)) {
        ++three;
        const auto t = schedule_from_bar(ExposureVariant::ThreeStage,
                                         ModelParams(params.partition, 0.0, p), bar);
        worst = std::max(worst, std::abs(1 - (1 - t.q1) * (1 - bar) * (1 - bar) - p));
        worst = std::max(worst, std::abs(p * (1 - t.q_star) - t.q1));
      }
    }
  }
  return {worst <= 1e-12, std::to_string(points) + " two-stage and " + std::to_string(three) +
                              " three-stage points, max error " + fmt("%.2e", worst)};
}

// 2. Coupling marginals by Monte Carlo.
Outcome coupling_marginals() {
  const ModelParams params(BlockPartition({30, 30}), 0.2, 0.1);
  const auto sched = schedule_from_bar(ExposureVariant::TwoStage, params, 0.05);
  std::vector<Edge> block, crossing;
  for (Vertex i = 0; i < 10; ++i) {
    block.emplace_back(i, i + 10 + (i % 3));
    crossing.emplace_back(i, 30 + 2 * i + 1);
  }
  const int trials = 50000;
  std::vector<long> hb(10, 0), hc(10, 0);
  for (int t = 0; t < trials; ++t) {
    const auto pair = two_stage_generate(sched, stream_seed(2024, t));
    for (int i = 0; i < 10; ++i) {
      hb[i] += pair.final_graph.has_edge(block[i].u, block[i].v);
      hc[i] += pair.final_graph.has_edge(crossing[i].u, crossing[i].v);
    }
  }
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double sb = std::sqrt(0.2 * 0.8 / trials), sc = std::sqrt(0.1 * 0.9 / trials);
    worst = std::max(worst, std::abs(static_cast<double>(hb[i]) / trials - 0.2) / sb);
    worst = std::max(worst, std::abs(static_cast<double>(hc[i]) / trials - 0.1) / sc);
  }
  return {worst <= 4.0, "max deviation " + fmt("%.2f", worst) + " sigma over 20 pairs"};
}

// 3. Degree formula, exact vs asymptotic and vs simulation.
Outcome degree_formula() {
  const BlockPartition part({10000, 10000});
  const auto [p, q] = regime_params(part, Regime::Dense, 0.0);
  const ModelParams params(part, p, q);
  double worst_rel = 0.0;
  std::vector<double> exact(3);
  for (std::size_t j = 0; j <= 2; ++j) {
    const auto x = expected_degree_count(params, 0, j);
    exact[j] = x.exact;
    worst_rel = std::max(worst_rel, std::abs(x.exact - x.asymptotic) / x.exact);
  }
  const int trials = 2000;
  std::vector<std::array<double, 3>> counts(trials);
#pragma omp parallel for schedule(dynamic, 4)
  for (int t = 0; t < trials; ++t) {
    const auto g = generate(params, stream_seed(33, t));
    std::array<double, 3> c{0, 0, 0};
    for (Vertex v = 0; v < 10000; ++v) {
      if (g.degree(v) <= 2) c[g.degree(v)] += 1;
    }
    counts[t] = c;
  }
  double worst_sigma = 0.0;
  for (std::size_t j = 0; j <= 2; ++j) {
    double s = 0, s2 = 0;
    for (const auto& c : counts) {
      s += c[j];
      s2 += c[j] * c[j];
    }
    const double mean = s / trials;
    const double sd = std::sqrt(std::max(s2 / trials - mean * mean, 1e-12) / trials);
    worst_sigma = std::max(worst_sigma, std::abs(mean - exact[j]) / sd);
  }
  return {worst_rel <= 0.05 && worst_sigma <= 3.0,
          "exact vs asymptotic max rel " + fmt("%.4f", worst_rel) + ", simulation max " +
              fmt("%.2f", worst_sigma) + " sigma"};
}

// 4. Poisson X_1.
Outcome poisson_x1() {
  ExperimentConfig cfg;
  cfg.sizes = {10000, 10000};
  cfg.window = {0.0};
  cfg.trials = 2000;
  cfg.seed = 404;
  const auto est = estimate_poisson_x1(cfg);
  const double ratio = est.variance / est.mean;
  const bool pass = est.mean >= 1.85 && est.mean <= 2.15 && ratio >= 0.8 && ratio <= 1.2;
  return {pass, "mean " + fmt("%.4f", est.mean) + " (window [1.85, 2.15], predicted " +
                    fmt("%.4f", est.predicted_mean) + "), variance/mean " + fmt("%.4f", ratio)};
}

// 5. Solver soundness and small-n completeness.
Outcome solver_small_n() {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> cdist(-3.0, 3.0);
  std::size_t hamiltonian = 0, found = 0, unverified = 0, redrawn = 0;
  for (int t = 0; t < 500; ++t) {
    // Near c = -3 the offset is out of reach at this n (it needs phi < 0).
    std::size_t n = 0;
    double p = 0, q = 0;
    for (;;) {
      n = 8 + rng() % 7;
      try {
        std::tie(p, q) = regime_params(BlockPartition({n / 2, n - n / 2}), Regime::Dense, cdist(rng));
        break;
      } catch (const NoSolutionError&) {
        ++redrawn;
      }
    }
    const BlockPartition part({n / 2, n - n / 2});
    const auto g = generate(ModelParams(part, p, q), rng());
    const bool truth = held_karp_hamilton(g).has_value();
    PosaOptions o;
    o.seed = rng();
    const auto r = posa_solve(g, {}, o);
    if (r.status == PosaStatus::Found) {
      if (!oracle::is_hamilton_cycle(oracle::adjacency(g), r.cycle)) ++unverified;
      if (truth) ++found;
    }
    hamiltonian += truth;
  }
  const double rate = hamiltonian ? static_cast<double>(found) / hamiltonian : 1.0;
  return {unverified == 0 && rate >= 0.95,
          std::to_string(unverified) + " unverified cycles, found " + std::to_string(found) +
              " of " + std::to_string(hamiltonian) + " Hamiltonian (" + fmt("%.3f", rate) +
              "), " + std::to_string(redrawn) + " unreachable offsets redrawn"};
}

// 6. End-set expansion on exact longest paths.
Outcome end_set_expansion() {
  std::mt19937_64 rng(6);
  std::size_t held = 0, total = 0;
  while (total < 200) {
    const std::size_t n = 10 + rng() % 9;
    const auto g = oracle::random_graph(n, 2.5 / static_cast<double>(n), rng());
    const auto path = longest_path_exact_path(g);
    if (path.size() < 2) continue;
    ++total;
    const auto rs = rotate_closure(g, PathState(path, n));
    held += oracle::neighborhood(g, rs.end_set).size() < 2 * rs.end_set.size();
  }
  return {held == total, std::to_string(held) + " of " + std::to_string(total) + " instances"};
}

// 7. Boosters extend the longest path or close a Hamilton cycle.
Outcome booster_property() {
  std::mt19937_64 rng(7);
  std::size_t instances = 0, pairs = 0, good = 0;
  while (instances < 100) {
    const std::size_t n = 8 + rng() % 9;
    const auto g = oracle::random_graph(n, 3.0 / static_cast<double>(n), rng());
    if (oracle::components(g) != 1) continue;
    const auto path = longest_path_exact_path(g);
    const std::size_t len = path.size() - 1;
    const auto rs = rotate_closure(g, PathState(path, n));
    const auto boosters = booster_set(g, rs);
    if (boosters.pairs.empty()) continue;
    ++instances;
    for (const auto& e : boosters.pairs) {
      ++pairs;
      const auto h = g.with_edges(std::vector<Edge>{e});
      const bool longer = longest_path_exact(h) > len;
      const bool closes = len + 1 == n && held_karp_hamilton(h).has_value();
      good += longer || closes;
    }
  }
  return {good == pairs, std::to_string(good) + " of " + std::to_string(pairs) + " pairs over " +
                             std::to_string(instances) + " instances"};
}

// 8. Threshold window.
Outcome threshold_window() {
  ExperimentConfig cfg;
  cfg.sizes = {1500, 1500};
  cfg.regime = Regime::Dense;
  cfg.window = {-4, -2, -1, 0, 1, 2, 4};
  cfg.trials = 300;
  cfg.seed = 8;
  const auto res = run_sweep(cfg);
  bool a = true, b = true, c = true;
  std::string detail;
  for (const auto& row : res.rows) {
    a = a && row.p_hat_gap <= 0.02;
    if (row.c >= -1 && row.c <= 1) b = b && std::abs(row.p_hat_d2 - row.predicted) <= 0.10;
    if (row.c == 4) c = c && row.p_hat_ham >= 0.95;
    if (row.c == -4) c = c && row.p_hat_ham <= 0.05;
    detail += " c=" + fmt("%g", row.c) + ":ham=" + fmt("%.3f", row.p_hat_ham) + ",d2=" +
              fmt("%.3f", row.p_hat_d2) + ",gap=" + fmt("%.3f", row.p_hat_gap) + ",pred=" +
              fmt("%.3f", row.predicted);
  }
  return {a && b && c, std::string("(a) ") + (a ? "pass" : "fail") + " (b) " +
                           (b ? "pass" : "fail") + " (c) " + (c ? "pass" : "fail") + ";" + detail};
}

// 9. Case-3 stitcher.
Outcome case3_stitcher() {
  const BlockPartition part({200, 200});
  const auto [p, q] = regime_params(part, Regime::QSmall, 2.0);
  const ModelParams params(part, p, q);
  const auto sched =
      schedule(ExposureVariant::Case3, params, default_exposure_a(ExposureVariant::Case3, part));
  std::size_t eligible = 0, found = 0, bad = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto pair = two_stage_generate(sched, stream_seed(909, s));
    GreenCover cover;
    try {
      cover = build_green_cover(pair.final_graph, pair.base, stream_seed(s, 1));
    } catch (const StitchPreconditionError&) {
      continue;
    } catch (const RetryExhaustedError&) {
      continue;
    }
    ++eligible;
    ParityFix fix;
    try {
      fix = parity_fix(cover, pair.base, stream_seed(s, 2));
    } catch (const RetryExhaustedError&) {
      continue;  // counted as a miss: the cover passed
    }
    StitchOptions o;
    o.seed = s;
    const auto res = stitch(pair.final_graph, cover, fix, o);
    if (!res.cycle) continue;
    ++found;
    const auto& cyc = *res.cycle;
    bool ok = oracle::is_hamilton_cycle(oracle::adjacency(pair.final_graph), cyc);
    std::vector<std::size_t> pos(cyc.size());
    for (std::size_t i = 0; i < cyc.size(); ++i) pos[cyc[i]] = i;
    auto adjacent = [&](Vertex x, Vertex y) {
      const std::size_t d = (pos[x] + cyc.size() - pos[y]) % cyc.size();
      return d == 1 || d + 1 == cyc.size();
    };
    for (const auto& gp : cover.green_paths) {
      ok = ok && adjacent(gp.center, gp.a) && adjacent(gp.center, gp.b);
    }
    bad += !ok;
  }
  const double rate = eligible ? static_cast<double>(found) / eligible : 0.0;
  return {rate >= 0.90 && bad == 0,
          "found " + std::to_string(found) + " of " + std::to_string(eligible) +
              " eligible (" + fmt("%.3f", rate) + "), " + std::to_string(bad) +
              " returned cycles failed the audit"};
}

// 10. Structure checker counterexamples.
Outcome structure_counterexamples() {
  const std::vector<std::string> required{"D2", "EXPN", "EXPN+", "C2", "C4", "COL(a)"};
  std::size_t confirmed = 0;
  std::vector<std::string> seen;
  std::string failures;
  for (const auto& c : counterexamples::build()) {
    seen.push_back(c.name);
    if (!c.report.holds && c.confirm(c.report)) {
      ++confirmed;
    } else {
      failures += " " + c.name;
    }
  }
  bool covered = true;
  for (const auto& r : required) covered = covered && std::count(seen.begin(), seen.end(), r);
  return {covered && failures.empty(),
          std::to_string(confirmed) + " of " + std::to_string(seen.size()) +
              " witnesses confirmed" + (failures.empty() ? "" : "; unconfirmed:" + failures)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"blockham acceptance criteria"};
  int only = 0;
  app.add_option("--criterion", only, "run a single criterion (1-10)")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"coupling identities", coupling_identities},
      {"coupling marginals", coupling_marginals},
      {"degree formula", degree_formula},
      {"Poisson X1", poisson_x1},
      {"solver soundness and small-n completeness", solver_small_n},
      {"end-set expansion", end_set_expansion},
      {"booster property", booster_property},
      {"threshold window", threshold_window},
      {"Case-3 stitcher", case3_stitcher},
      {"structure checker witnesses", structure_counterexamples},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && static_cast<int>(i + 1) != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    const auto out = criteria[i].second();
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %zu %s: %s [%s] (%.1f s)\n", i + 1, criteria[i].first.c_str(),
                out.pass ? "PASS" : "FAIL", out.detail.c_str(), secs);
    std::fflush(stdout);
    all = all && out.pass;
  }
  return all ? 0 : 1;
}

#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "blockham/harness.hpp"
#include "blockham/model.hpp"

using namespace blockham;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.sizes = {150, 150};
  cfg.window = {-1.0, 1.0, 3.0};
  cfg.trials = 24;
  cfg.seed = 42;
  return cfg;
}

}  // namespace

TEST_CASE("config parsing and validation") {
  const auto cfg = parse_config(
      "# sweep\nsizes = 300,300\nregime=q_small\nwindow=-4:4:1\ntrials=30 # inline\nseed=7\n");
  CHECK(cfg.sizes == std::vector<std::size_t>{300, 300});
  CHECK(cfg.regime == Regime::QSmall);
  CHECK(cfg.window.size() == 9);
  CHECK(cfg.window.front() == -4.0);
  CHECK(cfg.window.back() == 4.0);
  CHECK(cfg.trials == 30);
  CHECK(cfg.seed == 7);
  CHECK(parse_window("0.5, 1.5") == std::vector<double>{0.5, 1.5});
  CHECK_THROWS_AS(parse_config("bogus=1"), ConfigError);
  CHECK_THROWS_AS(parse_config("trials=abc"), ConfigError);
  CHECK_THROWS_AS(parse_regime("sparse"), ConfigError);
  ExperimentConfig bad;
  bad.sizes = {10};
  bad.window = {0.0};
  bad.trials = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad.trials = 1;
  bad.window.clear();
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("lints flag (A3) in the p_small regime") {
  ExperimentConfig cfg;
  cfg.sizes = {400, 100};
  cfg.regime = Regime::PSmall;
  cfg.window = {0.0};
  bool a3 = false;
  for (const auto& w : cfg.lints()) a3 = a3 || w.find("(A3)") != std::string::npos;
  CHECK(a3);
  cfg.sizes = {250, 250};
  for (const auto& w : cfg.lints()) CHECK(w.find("(A3)") == std::string::npos);
}

TEST_CASE("regimes hit the target window offset") {
  const BlockPartition part({300, 300});
  for (auto regime : {Regime::Dense, Regime::PSmall, Regime::QSmall}) {
    for (double c : {-2.0, 0.0, 3.0}) {
      const auto [p, q] = regime_params(part, regime, c);
      CHECK(criticals(ModelParams(part, p, q)).min_c() == doctest::Approx(c).epsilon(1e-6));
    }
  }
}

TEST_CASE("predicted column matches criticals") {
  for (double c : {-3.0, 0.0, 2.5}) {
    for (auto regime : {Regime::Dense, Regime::QSmall}) {
      const BlockPartition part({200, 350});
      const auto [p, q] = regime_params(part, regime, c);
      CHECK(predicted_probability(part, p, q) ==
            doctest::Approx(criticals(ModelParams(part, p, q)).predicted_ham).epsilon(1e-12));
    }
  }
}

TEST_CASE("Wilson interval against the closed form") {
  // 7 of 20 at z = 1.96: centre (0.35 + 0.09604) / 1.19208.
  const auto [lo, hi] = wilson_interval(7, 20);
  const double z = 1.959963984540054, n = 20, ph = 0.35;
  const double centre = (ph + z * z / (2 * n)) / (1 + z * z / n);
  const double half = z / (1 + z * z / n) * std::sqrt(ph * (1 - ph) / n + z * z / (4 * n * n));
  CHECK(lo == doctest::Approx(centre - half).epsilon(1e-12));
  CHECK(hi == doctest::Approx(centre + half).epsilon(1e-12));
  const auto zero = wilson_interval(0, 10);
  CHECK(zero.first == 0.0);
  CHECK(zero.second > 0.0);
  CHECK(wilson_interval(10, 10).second == doctest::Approx(1.0));
}

TEST_CASE("near-certain single trial") {
  ExperimentConfig cfg;
  cfg.sizes = {250, 250};
  cfg.window = {8.0};
  cfg.trials = 1;
  cfg.seed = 1;
  const auto res = run_sweep(cfg);
  REQUIRE(res.rows.size() == 1);
  CHECK(res.records[0][0].d2);
  CHECK(res.records[0][0].cnt);
  CHECK(res.records[0][0].ham == HamVerdict::Found);
  CHECK(res.rows[0].p_hat_ham == 1.0);
}

TEST_CASE("deep subcritical point has no D2 graphs") {
  ExperimentConfig cfg;
  cfg.sizes = {250, 250};
  cfg.window = {-5.0};
  cfg.trials = 50;
  const auto res = run_sweep(cfg);
  CHECK(res.rows[0].p_hat_d2 == 0.0);
  CHECK(res.rows[0].p_hat_ham == 0.0);
}

TEST_CASE("results do not depend on the thread count") {
  auto cfg = small_config();
  cfg.threads = 1;
  const auto one = to_csv(run_sweep(cfg).rows);
  cfg.threads = 4;
  const auto four = to_csv(run_sweep(cfg).rows);
  const auto serial = to_csv(run_sweep_serial(cfg).rows);
  CHECK(one == four);
  CHECK(one == serial);
}

TEST_CASE("accounting identities per row") {
  const auto res = run_sweep(small_config());
  for (std::size_t i = 0; i < res.rows.size(); ++i) {
    const auto& row = res.rows[i];
    std::size_t failed = 0;
    for (const auto& r : res.records[i]) {
      failed += r.ham == HamVerdict::SolverFailed;
      if (r.ham == HamVerdict::Found) CHECK(r.d2);
    }
    CHECK(row.p_hat_ham <= row.p_hat_d2 + static_cast<double>(failed) / row.trials);
    CHECK(row.p_hat_gap <= row.p_hat_d2);
    CHECK(row.ci_lo <= row.p_hat_ham);
    CHECK(row.ci_hi >= row.p_hat_ham);
  }
}

TEST_CASE("CSV and JSON emission") {
  CHECK(to_csv({}) == "c,n,trials,p_hat_ham,p_hat_d2,p_hat_gap,predicted,ci_lo,ci_hi\n");
  const auto rows = run_sweep(small_config()).rows;
  CHECK(rows_from_json(to_json(rows)) == rows);
  CHECK(rows_from_json(to_json({})).empty());
  CHECK_THROWS(rows_from_json("{\"schema\": \"other\", \"version\": 1, \"rows\": []}"));

  const std::string path = "blockham_emit_test.csv";
  emit(rows, EmitFormat::Csv, path);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == to_csv(rows));
  std::remove(path.c_str());
  CHECK_THROWS(emit(rows, EmitFormat::Csv, "/nonexistent-dir/x.csv"));
}

TEST_CASE("degree-1 count estimator") {
  ExperimentConfig cfg;
  cfg.sizes = {5, 5};
  cfg.p = 1.0;
  cfg.q = 1.0;
  cfg.trials = 20;
  const auto est = estimate_poisson_x1(cfg);
  CHECK(est.mean == 0.0);
  CHECK(est.variance == 0.0);

  ExperimentConfig window;
  window.sizes = {2000, 2000};
  window.window = {1.0};
  window.trials = 200;
  const auto w = estimate_poisson_x1(window);
  CHECK(w.predicted_mean == doctest::Approx(2 * std::exp(-1.0)).epsilon(1e-9));
  CHECK(w.mean > 0.0);
}

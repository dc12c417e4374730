#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "blockham/graph.hpp"
#include "blockham/model.hpp"
#include "blockham/solver.hpp"

namespace blockham {

enum class Regime {
  Dense,   // p = 2q, q solved for the target c
  PSmall,  // p = 1 / n, q solved
  QSmall,  // q = 3 / n, p solved
};

Regime parse_regime(const std::string& name);
const char* to_string(Regime regime);

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ExperimentConfig {
  std::vector<std::size_t> sizes;
  Regime regime = Regime::Dense;
  std::vector<double> window;  // target c values
  std::size_t trials = 100;
  std::size_t restarts = 20;
  std::uint64_t step_budget = 0;  // 0: solver default
  std::uint64_t seed = 0;
  std::string out;
  std::size_t threads = 0;  // 0: OpenMP default
  /// Explicit (p, q) bypassing the regime; the window is then ignored.
  std::optional<double> p;
  std::optional<double> q;

  /// Applies one key=value setting. Keys: sizes, regime, window, trials,
  /// restarts, step_budget, seed, out, threads, p, q.
  void set(const std::string& key, const std::string& value);
  /// Throws ConfigError on trials == 0, an empty window or empty sizes.
  void validate() const;
  /// (A2)-(A4) sanity warnings for every window point.
  std::vector<std::string> lints() const;
};

/// Line-oriented key=value text; '#' starts a comment.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// "a:b:step" or a comma list.
std::vector<double> parse_window(const std::string& spec);

/// (p, q) for one window point.
std::pair<double, double> regime_params(const BlockPartition& partition, Regime regime,
                                        double target_c);
ModelParams point_params(const ExperimentConfig& config, std::size_t point);

enum class HamVerdict {
  Found,         // verified cycle
  Disproved,     // not D2, not connected, or ruled out during reduction
  SolverFailed,  // heuristic gave up; says nothing about the graph
};

struct TrialRecord {
  std::uint64_t seed = 0;
  double c = 0.0;
  bool d2 = false;
  bool cnt = false;
  HamVerdict ham = HamVerdict::Disproved;
  std::uint64_t solver_steps = 0;
  std::size_t restarts_used = 0;

  bool d2_not_ham() const { return d2 && ham != HamVerdict::Found; }
};

/// One CSV row. ci_lo/ci_hi bound p_hat_ham.
struct ResultRow {
  double c = 0.0;
  std::size_t n = 0;
  std::size_t trials = 0;
  double p_hat_ham = 0.0;
  double p_hat_d2 = 0.0;
  double p_hat_gap = 0.0;  // D2 and solver failed
  double predicted = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;

  bool operator==(const ResultRow&) const = default;
};

struct SweepResult {
  std::vector<ResultRow> rows;
  std::vector<std::vector<TrialRecord>> records;  // per window point
};

/// Wilson score interval, z = 1.96 by default.
std::pair<double, double> wilson_interval(std::size_t successes, std::size_t trials,
                                          double z = 1.959963984540054);

/// exp(-sum_i e^{-c_i}) evaluated from (p, q) directly.
double predicted_probability(const BlockPartition& partition, double p, double q);

TrialRecord run_trial(const ModelParams& params, std::uint64_t seed, const PosaOptions& posa);

/// Trial-parallel; results do not depend on the thread count.
SweepResult run_sweep(const ExperimentConfig& config);
/// Same trials in order on one thread.
SweepResult run_sweep_serial(const ExperimentConfig& config);

ResultRow aggregate(double c, std::size_t n, double predicted,
                    const std::vector<TrialRecord>& records);

struct PoissonEstimate {
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double predicted_mean = 0.0;
  std::size_t trials = 0;
};

/// Degree-1 count over config.trials graphs at the first window point.
PoissonEstimate estimate_poisson_x1(const ExperimentConfig& config);

enum class EmitFormat { Csv, Json };

std::string to_csv(const std::vector<ResultRow>& rows);
std::string to_json(const std::vector<ResultRow>& rows);
std::vector<ResultRow> rows_from_json(const std::string& text);
/// Writes to path, or stdout when path is empty or "-".
void emit(const std::vector<ResultRow>& rows, EmitFormat format, const std::string& path);

}  // namespace blockham

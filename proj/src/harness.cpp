#include "blockham/harness.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <tuple>

#include "blockham/rng.hpp"
#include "blockham/structure.hpp"
#include "json.hpp"

namespace blockham {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double x = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("bad number for " + key + ": '" + value + "'");
  }
}

std::uint64_t to_uint(const std::string& key, const std::string& value) {
  if (value.empty() || value.find_first_not_of("0123456789") != std::string::npos) {
    throw ConfigError("bad unsigned integer for " + key + ": '" + value + "'");
  }
  try {
    return std::stoull(value);
  } catch (const std::exception&) {
    throw ConfigError("out of range for " + key + ": '" + value + "'");
  }
}

std::string fmt(const char* spec, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, x);
  return buf;
}

}  // namespace

Regime parse_regime(const std::string& name) {
  if (name == "dense") return Regime::Dense;
  if (name == "p_small") return Regime::PSmall;
  if (name == "q_small") return Regime::QSmall;
  throw ConfigError("unknown regime '" + name + "' (dense, p_small, q_small)");
}

const char* to_string(Regime regime) {
  switch (regime) {
    case Regime::Dense: return "dense";
    case Regime::PSmall: return "p_small";
    case Regime::QSmall: return "q_small";
  }
  return "?";
}

std::vector<double> parse_window(const std::string& spec) {
  std::vector<double> out;
  const std::string s = trim(spec);
  if (s.empty()) return out;
  if (s.find(':') != std::string::npos) {
    std::vector<double> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(to_double("window", trim(item)));
    if (parts.size() != 3 || parts[2] <= 0.0 || parts[1] < parts[0]) {
      throw ConfigError("window range must be lo:hi:step with step > 0");
    }
    const auto steps = static_cast<std::size_t>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
    for (std::size_t i = 0; i <= steps; ++i) out.push_back(parts[0] + parts[2] * i);
    return out;
  }
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double("window", trim(item)));
  return out;
}

void ExperimentConfig::set(const std::string& key, const std::string& raw) {
  const std::string value = trim(raw);
  if (key == "sizes") {
    sizes.clear();
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) sizes.push_back(to_uint(key, trim(item)));
  } else if (key == "regime") {
    regime = parse_regime(value);
  } else if (key == "window") {
    window = parse_window(value);
  } else if (key == "trials") {
    trials = to_uint(key, value);
  } else if (key == "restarts") {
    restarts = to_uint(key, value);
  } else if (key == "step_budget") {
    step_budget = to_uint(key, value);
  } else if (key == "seed") {
    seed = to_uint(key, value);
  } else if (key == "out") {
    out = value;
  } else if (key == "threads") {
    threads = to_uint(key, value);
  } else if (key == "p") {
    p = to_double(key, value);
  } else if (key == "q") {
    q = to_double(key, value);
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

void ExperimentConfig::validate() const {
  if (sizes.empty()) throw ConfigError("sizes must be nonempty");
  for (auto s : sizes) {
    if (s == 0) throw ConfigError("block sizes must be positive");
  }
  if (trials == 0) throw ConfigError("trials must be >= 1");
  if (p.has_value() != q.has_value()) throw ConfigError("p and q must be given together");
  if (!p && window.empty()) throw ConfigError("window must be nonempty");
}

std::vector<std::string> ExperimentConfig::lints() const {
  std::vector<std::string> out;
  const BlockPartition part(sizes);
  const double n = static_cast<double>(part.n());
  std::size_t lo = sizes.front(), hi = sizes.front();
  for (auto s : sizes) {
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  if (static_cast<double>(lo) < 0.1 * n / static_cast<double>(sizes.size())) {
    out.push_back("(A4): smallest block " + std::to_string(lo) + " is far below n/k");
  }
  const std::size_t points = p ? 1 : window.size();
  for (std::size_t i = 0; i < points; ++i) {
    double pp = 0.0, qq = 0.0;
    try {
      const auto params = point_params(*this, i);
      pp = params.p;
      qq = params.q;
    } catch (const std::exception& e) {
      out.push_back("point " + std::to_string(i) + ": " + e.what());
      continue;
    }
    if (sizes.size() > 1 && qq * n * n < 10.0) {
      out.push_back("(A2): q n^2 = " + fmt("%.3g", qq * n * n) + " is small");
    }
    if (pp * n <= 2.0 && static_cast<double>(hi) > n / 2.0) {
      out.push_back("(A3): p = O(1/n) with a block larger than n/2");
    }
  }
  return out;
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::stringstream ss(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
    }
    cfg.set(trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::pair<double, double> regime_params(const BlockPartition& partition, Regime regime,
                                        double target_c) {
  const double n = static_cast<double>(partition.n());
  double p = 0.0, q = 0.0;
  switch (regime) {
    case Regime::Dense: {
      // p = 2q; window_offset is increasing in q.
      double lo = 0.0, hi = 0.5;
      if (window_offset(partition, 2.0 * hi, hi) < target_c) {
        throw NoSolutionError("dense regime cannot reach c = " + std::to_string(target_c));
      }
      for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        (window_offset(partition, 2.0 * mid, mid) < target_c ? lo : hi) = mid;
      }
      q = hi;
      p = 2.0 * q;
      break;
    }
    case Regime::PSmall:
      p = 1.0 / n;
      q = solve_q_for_window(partition, p, target_c);
      break;
    case Regime::QSmall:
      q = std::min(1.0, 3.0 / n);
      p = solve_p_for_window(partition, q, target_c);
      break;
  }
  if (std::abs(window_offset(partition, p, q) - target_c) > 1e-6) {
    throw NoSolutionError(std::string(to_string(regime)) + " regime overshoots c = " +
                          std::to_string(target_c));
  }
  return {p, q};
}

ModelParams point_params(const ExperimentConfig& config, std::size_t point) {
  BlockPartition part(config.sizes);
  if (config.p) return ModelParams(part, *config.p, *config.q);
  const auto [p, q] = regime_params(part, config.regime, config.window.at(point));
  return ModelParams(part, p, q);
}

std::pair<double, double> wilson_interval(std::size_t successes, std::size_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double t = static_cast<double>(trials);
  const double ph = static_cast<double>(successes) / t;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / t;
  const double center = (ph + z2 / (2.0 * t)) / denom;
  const double half = z * std::sqrt(ph * (1.0 - ph) / t + z2 / (4.0 * t * t)) / denom;
  const double lo = successes == 0 ? 0.0 : std::max(0.0, center - half);
  const double hi = successes == trials ? 1.0 : std::min(1.0, center + half);
  return {lo, hi};
}

double predicted_probability(const BlockPartition& partition, double p, double q) {
  // sum_i e^{-c_i} = sum_i n_i log n e^{-phi_i}
  const double n = static_cast<double>(partition.n());
  double x1 = 0.0;
  for (std::size_t i = 0; i < partition.k(); ++i) {
    const double ni = static_cast<double>(partition.size(i));
    x1 += std::exp(std::log(ni * std::log(n)) - p * ni - q * (n - ni));
  }
  return std::exp(-x1);
}

TrialRecord run_trial(const ModelParams& params, std::uint64_t seed, const PosaOptions& posa) {
  TrialRecord rec;
  rec.seed = seed;
  rec.c = window_offset(params.partition, params.p, params.q);
  const BlockedGraph g = generate(params, stream_seed(seed, 0));
  rec.d2 = check_d2(g).holds;
  rec.cnt = check_connected(g).holds;
  if (!rec.d2 || !rec.cnt) {
    rec.ham = HamVerdict::Disproved;
    return rec;
  }
  PosaOptions opts = posa;
  opts.seed = stream_seed(seed, 1);
  const auto r = posa_solve(g, ForcedEdgeSet(std::vector<Edge>{}), opts);
  rec.solver_steps = r.steps;
  rec.restarts_used = r.restarts_used;
  switch (r.status) {
    case PosaStatus::Found: rec.ham = HamVerdict::Found; break;
    case PosaStatus::Infeasible: rec.ham = HamVerdict::Disproved; break;
    case PosaStatus::Failed: rec.ham = HamVerdict::SolverFailed; break;
  }
  return rec;
}

ResultRow aggregate(double c, std::size_t n, double predicted,
                    const std::vector<TrialRecord>& records) {
  ResultRow row;
  row.c = c;
  row.n = n;
  row.trials = records.size();
  std::size_t ham = 0, d2 = 0, gap = 0;
  for (const auto& r : records) {
    ham += r.ham == HamVerdict::Found;
    d2 += r.d2;
    gap += r.d2 && r.ham == HamVerdict::SolverFailed;
  }
  if (!records.empty()) {
    const double t = static_cast<double>(records.size());
    row.p_hat_ham = ham / t;
    row.p_hat_d2 = d2 / t;
    row.p_hat_gap = gap / t;
  }
  row.predicted = predicted;
  std::tie(row.ci_lo, row.ci_hi) = wilson_interval(ham, records.size());
  return row;
}

namespace {

SweepResult sweep(const ExperimentConfig& config, bool parallel) {
  config.validate();
  SweepResult res;
  PosaOptions posa;
  posa.restarts = config.restarts;
  posa.step_budget = config.step_budget;
  const std::size_t points = config.p ? 1 : config.window.size();
  const int threads = config.threads > 0 ? static_cast<int>(config.threads) : omp_get_max_threads();
  for (std::size_t pt = 0; pt < points; ++pt) {
    const ModelParams params = point_params(config, pt);
    std::vector<TrialRecord> recs(config.trials);
    const auto trials = static_cast<std::int64_t>(config.trials);
    if (parallel) {
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
      for (std::int64_t t = 0; t < trials; ++t) {
        recs[t] = run_trial(params, stream_seed(config.seed, pt, t), posa);
      }
    } else {
      for (std::int64_t t = 0; t < trials; ++t) {
        recs[t] = run_trial(params, stream_seed(config.seed, pt, t), posa);
      }
    }
    const double c = config.p ? window_offset(params.partition, params.p, params.q)
                              : config.window[pt];
    res.rows.push_back(aggregate(c, params.partition.n(),
                                 predicted_probability(params.partition, params.p, params.q),
                                 recs));
    res.records.push_back(std::move(recs));
  }
  return res;
}

}  // namespace

SweepResult run_sweep(const ExperimentConfig& config) { return sweep(config, true); }
SweepResult run_sweep_serial(const ExperimentConfig& config) { return sweep(config, false); }

PoissonEstimate estimate_poisson_x1(const ExperimentConfig& config) {
  config.validate();
  const ModelParams params = point_params(config, 0);
  const auto trials = static_cast<std::int64_t>(config.trials);
  std::vector<double> x1(config.trials);
  const int threads = config.threads > 0 ? static_cast<int>(config.threads) : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::int64_t t = 0; t < trials; ++t) {
    const BlockedGraph g = generate(params, stream_seed(stream_seed(config.seed, 0, t), 0));
    std::size_t count = 0;
    for (Vertex v = 0; v < g.n(); ++v) count += g.degree(v) == 1;
    x1[t] = static_cast<double>(count);
  }
  PoissonEstimate est;
  est.trials = config.trials;
  double sum = 0.0;
  for (double x : x1) sum += x;
  est.mean = sum / static_cast<double>(x1.size());
  double ss = 0.0;
  for (double x : x1) ss += (x - est.mean) * (x - est.mean);
  est.variance = x1.size() > 1 ? ss / static_cast<double>(x1.size() - 1) : 0.0;
  const double n = static_cast<double>(params.partition.n());
  for (std::size_t i = 0; i < params.partition.k(); ++i) {
    const double ni = static_cast<double>(params.partition.size(i));
    const double phi = params.p * ni + params.q * (n - ni);
    est.predicted_mean += std::exp(-(phi - std::log(ni) - std::log(std::log(n))));
  }
  return est;
}

std::string to_csv(const std::vector<ResultRow>& rows) {
  std::string out = "c,n,trials,p_hat_ham,p_hat_d2,p_hat_gap,predicted,ci_lo,ci_hi\n";
  for (const auto& r : rows) {
    out += fmt("%.6g", r.c) + "," + std::to_string(r.n) + "," + std::to_string(r.trials) + "," +
           fmt("%.6f", r.p_hat_ham) + "," + fmt("%.6f", r.p_hat_d2) + "," +
           fmt("%.6f", r.p_hat_gap) + "," + fmt("%.6f", r.predicted) + "," +
           fmt("%.6f", r.ci_lo) + "," + fmt("%.6f", r.ci_hi) + "\n";
  }
  return out;
}

std::string to_json(const std::vector<ResultRow>& rows) {
  nlohmann::ordered_json j;
  j["schema"] = "blockham.sweep";
  j["version"] = 1;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    j["rows"].push_back({{"c", r.c},
                         {"n", r.n},
                         {"trials", r.trials},
                         {"p_hat_ham", r.p_hat_ham},
                         {"p_hat_d2", r.p_hat_d2},
                         {"p_hat_gap", r.p_hat_gap},
                         {"predicted", r.predicted},
                         {"ci_lo", r.ci_lo},
                         {"ci_hi", r.ci_hi}});
  }
  return j.dump(2) + "\n";
}

std::vector<ResultRow> rows_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  if (j.value("schema", "") != "blockham.sweep" || j.value("version", 0) != 1) {
    throw std::runtime_error("unsupported sweep schema");
  }
  std::vector<ResultRow> rows;
  for (const auto& r : j.at("rows")) {
    ResultRow row;
    row.c = r.at("c").get<double>();
    row.n = r.at("n").get<std::size_t>();
    row.trials = r.at("trials").get<std::size_t>();
    row.p_hat_ham = r.at("p_hat_ham").get<double>();
    row.p_hat_d2 = r.at("p_hat_d2").get<double>();
    row.p_hat_gap = r.at("p_hat_gap").get<double>();
    row.predicted = r.at("predicted").get<double>();
    row.ci_lo = r.at("ci_lo").get<double>();
    row.ci_hi = r.at("ci_hi").get<double>();
    rows.push_back(row);
  }
  return rows;
}

void emit(const std::vector<ResultRow>& rows, EmitFormat format, const std::string& path) {
  const std::string text = format == EmitFormat::Csv ? to_csv(rows) : to_json(rows);
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace blockham

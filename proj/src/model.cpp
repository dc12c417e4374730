#include "blockham/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace blockham {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Visits the selected pairs of a rectangular or triangular region, where
// row r holds row_len(r) candidate pairs, each kept with probability prob.
template <class RowLen, class Emit>
void sample_region(CounterRng& rng, double prob, std::size_t rows, RowLen row_len,
                   Emit emit) {
  if (prob <= 0.0 || rows == 0) return;
  if (prob >= 1.0) {
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < row_len(r); ++c) emit(r, c);
    }
    return;
  }
  const double log1m = std::log1p(-prob);
  std::size_t r = 0;
  std::uint64_t col = geometric_skip(rng, log1m);
  while (r < rows) {
    const std::size_t len = row_len(r);
    if (col < len) {
      emit(r, static_cast<std::size_t>(col));
      const std::uint64_t skip = geometric_skip(rng, log1m);
      if (skip >= std::numeric_limits<std::uint64_t>::max() - col - 1) return;
      col += 1 + skip;
    } else {
      col -= len;
      ++r;
    }
  }
}

}  // namespace

ModelParams::ModelParams(BlockPartition part, double p_in, double q_in)
    : partition(std::move(part)), p(p_in), q(q_in) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0, 1]");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("q must lie in [0, 1]");
}

double Criticals::min_c() const { return *std::min_element(c.begin(), c.end()); }

std::size_t DegreeProfile::x(std::size_t block, std::size_t j) const {
  const auto& m = x_j_counts.at(block);
  const auto it = m.find(j);
  return it == m.end() ? 0 : it->second;
}

BlockedGraph generate(const ModelParams& params, std::uint64_t seed) {
  CounterRng rng(seed);
  return generate(params, rng);
}

BlockedGraph generate(const ModelParams& params, CounterRng& rng) {
  const auto& part = params.partition;
  std::vector<Edge> edges;
  const double n = static_cast<double>(part.n());
  edges.reserve(static_cast<std::size_t>(
      0.5 * n * n * std::max(params.p, params.q) * 1.1 + 16));
  for (std::size_t i = 0; i < part.k(); ++i) {
    const auto base = static_cast<Vertex>(part.offset(i));
    const std::size_t m = part.size(i);
    // Row a pairs vertex a with a+1..m-1.
    sample_region(
        rng, params.p, m > 0 ? m - 1 : 0, [m](std::size_t a) { return m - 1 - a; },
        [&](std::size_t a, std::size_t c) {
          edges.emplace_back(base + static_cast<Vertex>(a),
                             base + static_cast<Vertex>(a + 1 + c));
        });
    for (std::size_t j = i + 1; j < part.k(); ++j) {
      const auto other = static_cast<Vertex>(part.offset(j));
      const std::size_t w = part.size(j);
      sample_region(
          rng, params.q, m, [w](std::size_t) { return w; },
          [&](std::size_t a, std::size_t c) {
            edges.emplace_back(base + static_cast<Vertex>(a), other + static_cast<Vertex>(c));
          });
    }
  }
  return BlockedGraph(part, std::move(edges));
}

double window_offset(const BlockPartition& partition, double p, double q) {
  const double n = static_cast<double>(partition.n());
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < partition.k(); ++i) {
    const double ni = static_cast<double>(partition.size(i));
    best = std::min(best, p * ni + (n - ni) * q - std::log(ni));
  }
  return best - std::log(std::log(n));
}

Criticals criticals(const ModelParams& params) {
  const auto& part = params.partition;
  if (part.n() <= 3) throw std::domain_error("criticals need n > 3 (log log n)");
  const double n = static_cast<double>(part.n());
  const double loglog = std::log(std::log(n));
  Criticals out;
  double mass = 0.0;
  for (std::size_t i = 0; i < part.k(); ++i) {
    const double ni = static_cast<double>(part.size(i));
    const double phi = params.p * ni + params.q * (n - ni);
    const double c = phi - std::log(ni) - loglog;
    out.phi.push_back(phi);
    out.c.push_back(c);
    mass += std::exp(-c);
  }
  out.predicted_ham = std::exp(-mass);
  return out;
}

namespace {

template <class Offset>
double bisect_window(Offset offset, double target_c) {
  if (offset(0.0) >= target_c) return 0.0;
  if (offset(1.0) < target_c) {
    throw NoSolutionError("target c is out of reach even at probability 1");
  }
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double val = offset(mid);
    if (std::abs(val - target_c) <= 1e-11) return mid;
    (val < target_c ? lo : hi) = mid;
    if (hi - lo <= std::numeric_limits<double>::epsilon() * hi) break;
  }
  const double lo_err = std::abs(offset(lo) - target_c);
  const double hi_err = std::abs(offset(hi) - target_c);
  return lo_err <= hi_err ? lo : hi;
}

}  // namespace

double solve_q_for_window(const BlockPartition& partition, double p, double target_c) {
  return bisect_window([&](double q) { return window_offset(partition, p, q); }, target_c);
}

double solve_p_for_window(const BlockPartition& partition, double q, double target_c) {
  return bisect_window([&](double p) { return window_offset(partition, p, q); }, target_c);
}

double log_binomial_pmf(std::size_t trials, double prob, std::size_t k) {
  if (k > trials) return kNegInf;
  if (prob <= 0.0) return k == 0 ? 0.0 : kNegInf;
  if (prob >= 1.0) return k == trials ? 0.0 : kNegInf;
  const double nn = static_cast<double>(trials);
  const double kk = static_cast<double>(k);
  return std::lgamma(nn + 1.0) - std::lgamma(kk + 1.0) - std::lgamma(nn - kk + 1.0) +
         kk * std::log(prob) + (nn - kk) * std::log1p(-prob);
}

ExpectedDegreeCount expected_degree_count(const ModelParams& params, std::size_t block,
                                          std::size_t j) {
  const auto& part = params.partition;
  const std::size_t ni = part.size(block);
  const std::size_t outside = part.n() - ni;
  ExpectedDegreeCount out;

  double total = 0.0;
  for (std::size_t s = 0; s <= j; ++s) {
    const double a = log_binomial_pmf(ni - 1, params.p, s);
    if (a == kNegInf) continue;
    const double b = log_binomial_pmf(outside, params.q, j - s);
    if (b == kNegInf) continue;
    total += std::exp(a + b);
  }
  out.exact = static_cast<double>(ni) * total;

  const double phi =
      params.p * static_cast<double>(ni) + params.q * static_cast<double>(outside);
  if (phi <= 0.0) {
    out.asymptotic = j == 0 ? static_cast<double>(ni) : 0.0;
  } else {
    const double jj = static_cast<double>(j);
    out.asymptotic = std::exp(std::log(static_cast<double>(ni)) - phi + jj * std::log(phi) -
                              std::lgamma(jj + 1.0));
  }
  return out;
}

LowDegreeCensus low_degree_census(const BlockedGraph& graph, double alpha) {
  const double n = static_cast<double>(graph.n());
  const double cutoff = alpha * std::log(n);
  LowDegreeCensus out;
  for (Vertex v = 0; v < graph.n(); ++v) {
    out.count += static_cast<double>(graph.degree(v)) <= cutoff;
  }
  const double rho = alpha + alpha * std::log(1.0 / alpha);
  out.bound = std::pow(n, rho);
  return out;
}

DegreeProfile degree_profile(const BlockedGraph& graph, double small_threshold) {
  DegreeProfile out;
  const auto& part = graph.partition();
  out.small_threshold =
      small_threshold >= 0.0 ? small_threshold : std::log(static_cast<double>(graph.n())) / 10.0;
  out.degrees.resize(graph.n());
  out.x_j_counts.resize(part.k());
  for (Vertex v = 0; v < graph.n(); ++v) {
    const auto d = graph.degree(v);
    out.degrees[v] = d;
    ++out.x_j_counts[part.block_of(v)][d];
    out.n1 += d <= 1;
  }
  return out;
}

}  // namespace blockham

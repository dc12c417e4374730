#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "blockham/graph.hpp"
#include "blockham/rng.hpp"

namespace blockham {

/// Parameters of the two-level block model G(n, p, q): pairs inside a block
/// appear with probability p, pairs across blocks with probability q.
struct ModelParams {
  BlockPartition partition;
  double p = 0.0;
  double q = 0.0;

  /// Throws std::invalid_argument unless 0 <= p, q <= 1.
  ModelParams(BlockPartition part, double p_in, double q_in);
};

/// Per-block expected degrees phi_i, window offsets c_i and the limiting
/// Hamiltonicity probability exp(-sum_i e^{-c_i}).
struct Criticals {
  std::vector<double> phi;
  std::vector<double> c;
  double predicted_ham = 0.0;

  double min_c() const;
};

struct DegreeProfile {
  std::vector<std::size_t> degrees;
  double small_threshold = 0.0;
  /// x_j_counts[i][j] = number of vertices of block i with degree j.
  std::vector<std::map<std::size_t, std::size_t>> x_j_counts;
  std::size_t n1 = 0;

  std::size_t x(std::size_t block, std::size_t j) const;
};

struct ExpectedDegreeCount {
  double exact = 0.0;
  double asymptotic = 0.0;
};

struct LowDegreeCensus {
  std::size_t count = 0;
  double bound = 0.0;
};

class NoSolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Independent sample of G(n, p, q); identical (params, seed) give identical
/// graphs. Absent pairs are skipped geometrically, so cost is O(n + |E|).
BlockedGraph generate(const ModelParams& params, std::uint64_t seed);
BlockedGraph generate(const ModelParams& params, CounterRng& rng);

/// Throws std::domain_error when n <= 3.
Criticals criticals(const ModelParams& params);

/// min_i {p n_i + (n - n_i) q - log n_i} - log log n.
double window_offset(const BlockPartition& partition, double p, double q);

/// q in [0, 1] such that window_offset(partition, p, q) == target_c, by
/// bisection to 1e-9. Returns 0 when q = 0 already meets the target; throws
/// NoSolutionError when q = 1 falls short.
double solve_q_for_window(const BlockPartition& partition, double p, double target_c);
/// Same with q held fixed and p solved for.
double solve_p_for_window(const BlockPartition& partition, double q, double target_c);

/// n_i P(Bin(n_i - 1, p) + Bin(n - n_i, q) = j), exactly and through the
/// Poisson form n_i e^{-phi_i} phi_i^j / j!. Both evaluated in log space.
ExpectedDegreeCount expected_degree_count(const ModelParams& params, std::size_t block,
                                          std::size_t j);

/// Vertices of degree <= alpha log n, and the bound n^{alpha + alpha log(1/alpha)}.
LowDegreeCensus low_degree_census(const BlockedGraph& graph, double alpha);

/// small_threshold defaults to log n / 10.
DegreeProfile degree_profile(const BlockedGraph& graph, double small_threshold = -1.0);

/// log of the Binomial(trials, prob) pmf at k; -inf outside the support.
double log_binomial_pmf(std::size_t trials, double prob, std::size_t k);

}  // namespace blockham

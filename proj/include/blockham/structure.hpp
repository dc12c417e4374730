#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "blockham/exposure.hpp"
#include "blockham/graph.hpp"

namespace blockham {

enum class CheckMode { Exhaustive, Sampled, Unknown };

/// Counterexample attached to a false verdict. `kind` says how to read it:
/// "vertex", "set", "path", "cycle", "edges", or "edges+set" (F, then S).
struct Witness {
  std::string kind;
  std::vector<Vertex> vertices;
  std::vector<Edge> edges;
  /// The excluded set V the verdict was reached under (EXPN+, SSEXPN).
  std::vector<Vertex> context;
};

struct PredicateReport {
  std::string predicate;
  bool holds = true;
  std::optional<Witness> witness;
  CheckMode mode = CheckMode::Exhaustive;
  std::size_t samples = 0;
  std::string detail;

  /// One `key=value` per line.
  std::string to_text() const;
  std::string to_json() const;
};

/// Cap on |F ∩ N(v)|: 0 for small vertices (degree < log n / divisor), and
/// floor(log n / large_divisor) for large ones.
struct RemovalBudget {
  double small_divisor = 10.0;
  double large_divisor = 100.0;

  double small_threshold(std::size_t n) const;
  std::size_t large_cap(std::size_t n) const;
  bool is_small(const BlockedGraph& graph, Vertex v) const;
  std::size_t cap(const BlockedGraph& graph, Vertex v) const;
};

struct ExpnOptions {
  double epsilon0 = 0.01;
  /// V of EXPN+; empty gives plain EXPN.
  std::vector<Vertex> excluded;
  std::size_t samples = 10000;
  std::size_t adversarial_seeds = 64;
  std::uint64_t seed = 0;
  double exhaustive_cap = 1e6;
};

struct SexpnOptions {
  ExpnOptions expn;
  std::size_t f_samples = 8;
  RemovalBudget budget;
  /// SSEXPN: also draw V with |V| <= log n, no shared neighbours and no
  /// neighbour of degree <= 2.
  bool strong = false;
};

struct CPropertyOptions {
  double epsilon = 1.0 / 24.0;
  double delta = 0.05;
  std::size_t low_degree = 100;  // "extremely small" cut for (C2), (C3)
  std::size_t samples = 2000;
  std::uint64_t seed = 0;
  double exhaustive_cap = 1e6;
};

enum class TpclVariant {
  Case1,  // (T1)-(T4)
  Case2,  // (T1)-(T5)
  Case3,  // (T1') per block, (T2)-(T4)
};

struct TpclOptions {
  TpclVariant variant = TpclVariant::Case1;
  double C = 10.0;
  /// (T3) applies its block clause when p = o(log n / n) and its crossing
  /// clause when q = o(log n / n); at finite n the caller decides.
  bool p_sparse = false;
  bool q_sparse = false;
  SexpnOptions sexpn;
};

/// Minimum degree at least 2; witness is the first vertex of degree <= 1.
PredicateReport check_d2(const BlockedGraph& graph);
/// Witness is the smallest component's vertex set.
PredicateReport check_connected(const BlockedGraph& graph);
/// Vertices outside S adjacent to S, sorted.
std::vector<Vertex> neighborhood(const BlockedGraph& graph, const std::vector<Vertex>& S);
std::size_t n1(const BlockedGraph& graph);

/// EXPN, or EXPN+ when options.excluded is nonempty: |N(S) \ V| >= 2|S| for
/// all S with |S| <= epsilon0 n, vacuous when n1 > 0. Exhaustive while the
/// number of candidate sets stays within exhaustive_cap.
PredicateReport check_expn(const BlockedGraph& graph, const ExpnOptions& options);

/// SEXPN (or SSEXPN) with F drawn under the removal budget.
PredicateReport check_sexpn(const BlockedGraph& graph, const SexpnOptions& options);

/// Reports for (C1)..(C5), in order.
std::vector<PredicateReport> check_c_properties(const BlockedGraph& graph,
                                                const CPropertyOptions& options);

/// Conjunction; detail names the first failing clause.
PredicateReport check_tpcl(const BlockedGraph& graph, const TpclOptions& options);

/// COL clauses (a) and (b) for F = E(final) \ E(base). Clause (b) needs the
/// exact longest-path oracle and is reported with mode Unknown when n > 20.
std::vector<PredicateReport> check_col(const ExposedPair& pair,
                                       const RemovalBudget& budget = {});
/// |F ∩ N(v)| <= d(v) - 2 for every v of degree >= 2.
PredicateReport check_col1(const BlockedGraph& final_graph, const BlockedGraph& base);

/// Combines clause reports: holds iff every known clause holds.
PredicateReport conjunction(const std::string& name, const std::vector<PredicateReport>& parts);

}  // namespace blockham

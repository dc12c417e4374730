#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "blockham/bitset.hpp"
#include "blockham/graph.hpp"

namespace blockham {

class SizeLimitError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Vertex-disjoint pairs that a Hamilton cycle must traverse as edges. A pair
/// need not be an edge of the graph; it is then overlaid on it.
class ForcedEdgeSet {
 public:
  ForcedEdgeSet() = default;
  /// Throws std::invalid_argument if two pairs share a vertex.
  explicit ForcedEdgeSet(std::vector<Edge> pairs);

  const std::vector<Edge>& pairs() const noexcept { return pairs_; }
  bool empty() const noexcept { return pairs_.empty(); }
  std::size_t size() const noexcept { return pairs_.size(); }
  std::optional<Vertex> partner(Vertex v) const;
  bool contains(const Edge& e) const;
  /// partner[v] or -1, for v < n.
  std::vector<std::int64_t> partner_table(std::size_t n) const;
  /// counts[i][j] = |B_{i,j}| for i <= j (symmetric fill).
  std::vector<std::vector<std::size_t>> block_pair_counts(const BlockPartition& part) const;
  std::vector<Vertex> vertices() const;

 private:
  std::vector<Edge> pairs_;
  std::unordered_map<Vertex, Vertex> partner_;
};

struct PathState {
  std::vector<Vertex> path;
  VertexBitset on_path;

  PathState() = default;
  PathState(std::vector<Vertex> vertices, std::size_t n);
  Vertex fixed_end() const { return path.front(); }
  Vertex free_end() const { return path.back(); }
  std::size_t length() const { return path.empty() ? 0 : path.size() - 1; }
};

/// One Posa rotation: with the path ending at `parent_end`, add the edge
/// (pivot, parent_end) and drop the path edge after `pivot`.
struct RotationStep {
  Vertex parent_end = 0;
  Vertex pivot = 0;
};

struct RotationState {
  PathState base_path;
  /// End(v0) in discovery order; base_path.free_end() comes first.
  std::vector<Vertex> end_set;
  std::unordered_map<Vertex, RotationStep> witness;
  /// anchor[x] = the vertex next to x on its witnessed path P_x.
  std::unordered_map<Vertex, Vertex> anchor;

  bool contains(Vertex x) const { return witness.count(x) != 0 || x == base_path.free_end(); }
  /// Rebuilds P_x by replaying the rotation chain from base_path.
  std::vector<Vertex> path_to(Vertex x) const;
};

struct BoosterSet {
  std::vector<Edge> pairs;
  /// False when the path's component is not the whole graph; a booster then
  /// closes a cycle but the extension step has nothing to extend into.
  bool spans_connected_graph = true;
};

enum class SearchStatus { Cycle, None, Timeout };

struct BacktrackResult {
  SearchStatus status = SearchStatus::None;
  std::vector<Vertex> cycle;
  std::uint64_t nodes = 0;
};

struct PosaOptions {
  std::size_t restarts = 20;
  /// Rotations plus extensions per attempt; 0 means 50 n log n.
  std::uint64_t step_budget = 0;
  std::uint64_t seed = 0;
};

enum class PosaStatus {
  Found,       // verified Hamilton cycle
  Infeasible,  // a certificate of non-Hamiltonicity was found
  Failed,      // budget exhausted, no verdict
};

struct PosaResult {
  PosaStatus status = PosaStatus::Failed;
  std::vector<Vertex> cycle;
  std::size_t best_length = 0;  // longest admissible path seen, in edges
  std::size_t restarts_used = 0;
  std::uint64_t steps = 0;
  std::string reason;
};

/// Exact bitmask DP; n <= 22 else SizeLimitError.
std::optional<std::vector<Vertex>> held_karp_hamilton(const BlockedGraph& graph);

/// Exhaustive DFS for a Hamilton cycle through every forced pair. Timeout is
/// reported as such once node_budget nodes are expanded.
BacktrackResult backtrack_hamilton(const BlockedGraph& graph, const ForcedEdgeSet& forced,
                                   std::uint64_t node_budget);

/// Edges of a longest path; n <= 20 else SizeLimitError.
std::size_t longest_path_exact(const BlockedGraph& graph);
/// A longest path itself (vertex sequence).
std::vector<Vertex> longest_path_exact_path(const BlockedGraph& graph);

/// End set of `path` under (admissible) Posa rotations with the first vertex
/// fixed, explored breadth-first; each new end keeps the first path found.
RotationState rotate_closure(const BlockedGraph& graph, const PathState& path,
                             const ForcedEdgeSet& forced = {});

/// Pairs {x, y}: x in End(v0), y in End(x), that are not already edges.
BoosterSet booster_set(const BlockedGraph& graph, const RotationState& rotation,
                       const ForcedEdgeSet& forced = {});

/// Rotation-extension heuristic. Never returns an unverified cycle.
PosaResult posa_solve(const BlockedGraph& graph, const ForcedEdgeSet& forced,
                      const PosaOptions& options);

/// True iff `cycle` visits every vertex once, consecutive vertices (cyclically)
/// are edges or forced pairs, and every forced pair is traversed.
bool verify_cycle(const BlockedGraph& graph, const std::vector<Vertex>& cycle,
                  const ForcedEdgeSet& forced = {});

}  // namespace blockham

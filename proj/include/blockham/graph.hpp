#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "blockham/bitset.hpp"

namespace blockham {

using Vertex = std::uint32_t;

/// Unordered vertex pair stored with u < v.
struct Edge {
  Vertex u = 0;
  Vertex v = 0;

  Edge() = default;
  Edge(Vertex a, Vertex b) : u(a < b ? a : b), v(a < b ? b : a) {}

  auto operator<=>(const Edge&) const = default;
  bool touches(Vertex x) const noexcept { return u == x || v == x; }
  Vertex other(Vertex x) const noexcept { return x == u ? v : u; }
};

/// Partition of [0, n) into k consecutive blocks V_1..V_k.
class BlockPartition {
 public:
  /// Throws std::invalid_argument on an empty size list or a zero size.
  explicit BlockPartition(std::vector<std::size_t> sizes);

  std::size_t k() const noexcept { return sizes_.size(); }
  std::size_t n() const noexcept { return n_; }
  std::size_t size(std::size_t block) const { return sizes_[block]; }
  std::size_t offset(std::size_t block) const { return offsets_[block]; }
  const std::vector<std::size_t>& sizes() const noexcept { return sizes_; }

  /// Partition index sigma(v), 0-based.
  std::size_t block_of(Vertex v) const { return block_of_[v]; }
  bool same_block(Vertex a, Vertex b) const { return block_of_[a] == block_of_[b]; }

  bool operator==(const BlockPartition& o) const { return sizes_ == o.sizes_; }

 private:
  std::vector<std::size_t> sizes_;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> block_of_;
  std::size_t n_ = 0;
};

/// Immutable simple undirected graph over a block partition.
///
/// Adjacency is held twice: CSR neighbor lists (sorted) for iteration, and,
/// for n up to kRowLimit, one bitset row per vertex so that neighborhood
/// unions cost O(n/64) per vertex. Safe to share across threads once built.
class BlockedGraph {
 public:
  static constexpr std::size_t kRowLimit = 8192;

  explicit BlockedGraph(BlockPartition partition);
  /// Edges are normalized, sorted and deduplicated. Throws
  /// std::invalid_argument on loops or out-of-range endpoints.
  BlockedGraph(BlockPartition partition, std::vector<Edge> edges);

  const BlockPartition& partition() const noexcept { return partition_; }
  std::size_t n() const noexcept { return partition_.n(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  std::size_t degree(Vertex v) const noexcept {
    return offsets_[v + 1] - offsets_[v];
  }
  std::span<const Vertex> neighbors(Vertex v) const noexcept {
    return {nbrs_.data() + offsets_[v], degree(v)};
  }
  bool has_edge(Vertex a, Vertex b) const noexcept;

  bool has_rows() const noexcept { return !rows_.empty(); }
  std::span<const std::uint64_t> row(Vertex v) const noexcept {
    return {rows_.data() + static_cast<std::size_t>(v) * words_, words_};
  }

  bool is_block_edge(const Edge& e) const { return partition_.same_block(e.u, e.v); }
  std::size_t block_degree(Vertex v) const;
  std::size_t crossing_degree(Vertex v) const { return degree(v) - block_degree(v); }

  /// Graph on the same vertex set with `extra` edges added.
  BlockedGraph with_edges(std::span<const Edge> extra) const;
  /// Graph on the same vertex set with `removed` edges deleted.
  BlockedGraph without_edges(std::span<const Edge> removed) const;

  bool operator==(const BlockedGraph& o) const {
    return partition_ == o.partition_ && edges_ == o.edges_;
  }

 private:
  void build();

  BlockPartition partition_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<Vertex> nbrs_;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> rows_;
};

/// Sorted-vector set difference on normalized edge lists.
std::vector<Edge> edge_difference(const std::vector<Edge>& a, const std::vector<Edge>& b);
bool edge_subset(const std::vector<Edge>& a, const std::vector<Edge>& b);

/// G[vertices] as a single-block graph in which vertices[i] becomes i.
BlockedGraph induced_subgraph(const BlockedGraph& graph, const std::vector<Vertex>& vertices);

}  // namespace blockham

#include "blockham/graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace blockham {

BlockPartition::BlockPartition(std::vector<std::size_t> sizes) : sizes_(std::move(sizes)) {
  if (sizes_.empty()) throw std::invalid_argument("partition needs at least one block");
  offsets_.reserve(sizes_.size());
  for (std::size_t i = 0; i < sizes_.size(); ++i) {
    if (sizes_[i] == 0) {
      throw std::invalid_argument("block " + std::to_string(i) + " is empty");
    }
    offsets_.push_back(n_);
    n_ += sizes_[i];
  }
  block_of_.resize(n_);
  for (std::size_t i = 0; i < sizes_.size(); ++i) {
    std::fill_n(block_of_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]), sizes_[i],
                static_cast<std::uint32_t>(i));
  }
}

BlockedGraph::BlockedGraph(BlockPartition partition) : partition_(std::move(partition)) {
  build();
}

BlockedGraph::BlockedGraph(BlockPartition partition, std::vector<Edge> edges)
    : partition_(std::move(partition)), edges_(std::move(edges)) {
  const auto n = partition_.n();
  for (auto& e : edges_) {
    e = Edge(e.u, e.v);
    if (e.u == e.v) throw std::invalid_argument("loop at vertex " + std::to_string(e.u));
    if (e.v >= n) throw std::invalid_argument("vertex " + std::to_string(e.v) + " out of range");
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  build();
}

void BlockedGraph::build() {
  const auto n = partition_.n();
  offsets_.assign(n + 1, 0);
  for (const auto& e : edges_) {
    ++offsets_[e.u + 1];
    ++offsets_[e.v + 1];
  }
  for (std::size_t v = 0; v < n; ++v) offsets_[v + 1] += offsets_[v];
  nbrs_.resize(offsets_[n]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  // Edges are sorted by (u, v): every (w, x) with w < x precedes every (x, y),
  // so each list is filled in increasing order.
  for (const auto& e : edges_) {
    nbrs_[fill[e.u]++] = e.v;
    nbrs_[fill[e.v]++] = e.u;
  }
  if (n <= kRowLimit) {
    words_ = (n + 63) / 64;
    rows_.assign(n * words_, 0);
    for (const auto& e : edges_) {
      rows_[e.u * words_ + (e.v >> 6)] |= std::uint64_t{1} << (e.v & 63);
      rows_[e.v * words_ + (e.u >> 6)] |= std::uint64_t{1} << (e.u & 63);
    }
  } else {
    words_ = 0;
    rows_.clear();
  }
}

bool BlockedGraph::has_edge(Vertex a, Vertex b) const noexcept {
  if (a == b) return false;
  if (has_rows()) return (rows_[a * words_ + (b >> 6)] >> (b & 63)) & 1U;
  const auto nb = neighbors(a);
  return std::binary_search(nb.begin(), nb.end(), b);
}

std::size_t BlockedGraph::block_degree(Vertex v) const {
  std::size_t c = 0;
  const auto b = partition_.block_of(v);
  for (Vertex u : neighbors(v)) c += partition_.block_of(u) == b;
  return c;
}

BlockedGraph BlockedGraph::with_edges(std::span<const Edge> extra) const {
  std::vector<Edge> all = edges_;
  all.insert(all.end(), extra.begin(), extra.end());
  return BlockedGraph(partition_, std::move(all));
}

BlockedGraph BlockedGraph::without_edges(std::span<const Edge> removed) const {
  std::vector<Edge> drop(removed.begin(), removed.end());
  for (auto& e : drop) e = Edge(e.u, e.v);
  std::sort(drop.begin(), drop.end());
  return BlockedGraph(partition_, edge_difference(edges_, drop));
}

std::vector<Edge> edge_difference(const std::vector<Edge>& a, const std::vector<Edge>& b) {
  std::vector<Edge> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool edge_subset(const std::vector<Edge>& a, const std::vector<Edge>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

BlockedGraph induced_subgraph(const BlockedGraph& graph, const std::vector<Vertex>& vertices) {
  if (vertices.empty()) throw std::invalid_argument("induced subgraph of no vertices");
  std::vector<std::int64_t> index(graph.n(), -1);
  for (std::size_t i = 0; i < vertices.size(); ++i) index[vertices[i]] = static_cast<std::int64_t>(i);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    for (Vertex w : graph.neighbors(vertices[i])) {
      const auto j = index[w];
      if (j > static_cast<std::int64_t>(i)) edges.emplace_back(static_cast<Vertex>(i), static_cast<Vertex>(j));
    }
  }
  return BlockedGraph(BlockPartition({vertices.size()}), std::move(edges));
}

}  // namespace blockham

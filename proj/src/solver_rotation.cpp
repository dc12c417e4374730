#include <algorithm>
#include <deque>
#include <set>
#include <string>

#include "blockham/solver.hpp"

namespace blockham {

ForcedEdgeSet::ForcedEdgeSet(std::vector<Edge> pairs) : pairs_(std::move(pairs)) {
  for (auto& e : pairs_) {
    e = Edge(e.u, e.v);
    if (e.u == e.v) throw std::invalid_argument("forced pair is a loop");
    for (Vertex x : {e.u, e.v}) {
      if (!partner_.emplace(x, e.other(x)).second) {
        throw std::invalid_argument("forced pairs share vertex " + std::to_string(x));
      }
    }
  }
  std::sort(pairs_.begin(), pairs_.end());
}

std::optional<Vertex> ForcedEdgeSet::partner(Vertex v) const {
  const auto it = partner_.find(v);
  if (it == partner_.end()) return std::nullopt;
  return it->second;
}

bool ForcedEdgeSet::contains(const Edge& e) const {
  const auto it = partner_.find(e.u);
  return it != partner_.end() && it->second == e.v;
}

std::vector<std::int64_t> ForcedEdgeSet::partner_table(std::size_t n) const {
  std::vector<std::int64_t> out(n, -1);
  for (const auto& e : pairs_) {
    if (e.v >= n) throw std::invalid_argument("forced pair outside the vertex range");
    out[e.u] = e.v;
    out[e.v] = e.u;
  }
  return out;
}

std::vector<std::vector<std::size_t>> ForcedEdgeSet::block_pair_counts(
    const BlockPartition& part) const {
  std::vector<std::vector<std::size_t>> counts(part.k(), std::vector<std::size_t>(part.k(), 0));
  for (const auto& e : pairs_) {
    const auto i = part.block_of(e.u);
    const auto j = part.block_of(e.v);
    ++counts[i][j];
    if (i != j) ++counts[j][i];
  }
  return counts;
}

std::vector<Vertex> ForcedEdgeSet::vertices() const {
  std::vector<Vertex> out;
  for (const auto& e : pairs_) {
    out.push_back(e.u);
    out.push_back(e.v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

PathState::PathState(std::vector<Vertex> vertices, std::size_t n)
    : path(std::move(vertices)), on_path(n) {
  for (Vertex v : path) {
    if (on_path.test(v)) throw std::invalid_argument("path repeats a vertex");
    on_path.set(v);
  }
}

namespace {

// Replaces the edge path[h] path[h+1] by path[h] path.back().
void rotate_at(std::vector<Vertex>& path, std::size_t h) {
  std::reverse(path.begin() + static_cast<std::ptrdiff_t>(h) + 1, path.end());
}

std::size_t position(const std::vector<Vertex>& path, Vertex v) {
  return static_cast<std::size_t>(std::find(path.begin(), path.end(), v) - path.begin());
}

}  // namespace

std::vector<Vertex> RotationState::path_to(Vertex x) const {
  std::vector<RotationStep> chain;
  for (Vertex cur = x; cur != base_path.free_end();) {
    const auto& step = witness.at(cur);
    chain.push_back(step);
    cur = step.parent_end;
  }
  std::vector<Vertex> path = base_path.path;
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    if (path.back() != it->parent_end) throw std::logic_error("broken rotation witness");
    rotate_at(path, position(path, it->pivot));
  }
  return path;
}

RotationState rotate_closure(const BlockedGraph& graph, const PathState& path,
                             const ForcedEdgeSet& forced) {
  RotationState out;
  out.base_path = path;
  const std::size_t len = path.path.size();
  if (len == 0) return out;
  const Vertex first_end = path.free_end();
  out.end_set.push_back(first_end);
  if (len >= 2) out.anchor[first_end] = path.path[len - 2];
  if (len < 3) return out;

  std::deque<std::vector<Vertex>> queue{path.path};
  std::vector<std::size_t> pos(graph.n());
  while (!queue.empty()) {
    std::vector<Vertex> cur = std::move(queue.front());
    queue.pop_front();
    for (std::size_t i = 0; i < len; ++i) pos[cur[i]] = i;
    const Vertex x = cur.back();
    for (Vertex v : graph.neighbors(x)) {
      if (!path.on_path.test(v)) continue;
      const std::size_t h = pos[v];
      if (h + 2 >= len) continue;
      const Vertex y = cur[h + 1];
      if (forced.contains(Edge(cur[h], y))) continue;
      if (out.contains(y)) continue;
      std::vector<Vertex> next = cur;
      rotate_at(next, h);
      out.end_set.push_back(y);
      out.witness[y] = RotationStep{x, v};
      out.anchor[y] = next[len - 2];
      queue.push_back(std::move(next));
    }
  }
  return out;
}

BoosterSet booster_set(const BlockedGraph& graph, const RotationState& rotation,
                       const ForcedEdgeSet& forced) {
  BoosterSet out;
  std::set<Edge> pairs;
  const std::size_t n = graph.n();
  for (Vertex x : rotation.end_set) {
    std::vector<Vertex> px = rotation.path_to(x);
    std::reverse(px.begin(), px.end());
    const RotationState from_x = rotate_closure(graph, PathState(std::move(px), n), forced);
    for (Vertex y : from_x.end_set) {
      const Edge e(x, y);
      if (graph.has_edge(e.u, e.v) || forced.contains(e)) continue;
      pairs.insert(e);
    }
  }
  out.pairs.assign(pairs.begin(), pairs.end());

  if (!rotation.base_path.path.empty()) {
    std::vector<bool> seen(n, false);
    std::vector<Vertex> stack{rotation.base_path.fixed_end()};
    seen[stack.back()] = true;
    std::size_t reached = 1;
    while (!stack.empty()) {
      const Vertex v = stack.back();
      stack.pop_back();
      auto visit = [&](Vertex w) {
        if (!seen[w]) {
          seen[w] = true;
          ++reached;
          stack.push_back(w);
        }
      };
      for (Vertex w : graph.neighbors(v)) visit(w);
      if (const auto y = forced.partner(v)) visit(*y);
    }
    out.spans_connected_graph = reached == n;
  }
  return out;
}

}  // namespace blockham

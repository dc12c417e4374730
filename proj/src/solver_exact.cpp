#include <algorithm>
#include <bit>
#include <string>

#include "blockham/solver.hpp"

namespace blockham {

namespace {

std::vector<std::uint32_t> neighbor_masks(const BlockedGraph& graph) {
  std::vector<std::uint32_t> nb(graph.n(), 0);
  for (const auto& e : graph.edges()) {
    nb[e.u] |= 1U << e.v;
    nb[e.v] |= 1U << e.u;
  }
  return nb;
}

void require_size(const BlockedGraph& graph, std::size_t limit, const char* who) {
  if (graph.n() > limit) {
    throw SizeLimitError(std::string(who) + ": n = " + std::to_string(graph.n()) +
                         " exceeds " + std::to_string(limit));
  }
}

}  // namespace

std::optional<std::vector<Vertex>> held_karp_hamilton(const BlockedGraph& graph) {
  require_size(graph, 22, "held_karp_hamilton");
  const auto n = static_cast<unsigned>(graph.n());
  if (n < 3) return std::nullopt;
  const auto nb = neighbor_masks(graph);

  // Paths start at vertex 0; masks range over the other n - 1 vertices, bit
  // i standing for vertex i + 1. reach[m] = possible last vertices.
  const unsigned m = n - 1;
  const std::uint32_t full = (1U << m) - 1;
  std::vector<std::uint32_t> reach(std::size_t{1} << m, 0);
  const std::uint32_t start = nb[0] >> 1;
  for (std::uint32_t b = start; b; b &= b - 1) reach[b & -b] |= b & -b;

  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    const std::uint32_t ends = reach[mask];
    for (std::uint32_t e = ends; e; e &= e - 1) {
      const int v = std::countr_zero(e) + 1;
      std::uint32_t next = (nb[v] >> 1) & ~mask;
      for (; next; next &= next - 1) {
        const std::uint32_t bit = next & -next;
        reach[mask | bit] |= bit;
      }
    }
  }
  std::uint32_t closing = reach[full] & start;
  if (!closing) return std::nullopt;

  std::vector<Vertex> cycle{0};
  std::uint32_t mask = full;
  std::uint32_t last = closing & -closing;
  std::vector<Vertex> tail;
  while (true) {
    const int v = std::countr_zero(last) + 1;
    tail.push_back(static_cast<Vertex>(v));
    const std::uint32_t prev_mask = mask & ~last;
    if (!prev_mask) break;
    const std::uint32_t options = reach[prev_mask] & (nb[v] >> 1);
    last = options & -options;
    mask = prev_mask;
  }
  cycle.insert(cycle.end(), tail.rbegin(), tail.rend());
  return cycle;
}

BacktrackResult backtrack_hamilton(const BlockedGraph& graph, const ForcedEdgeSet& forced,
                                   std::uint64_t node_budget) {
  BacktrackResult out;
  const std::size_t n = graph.n();
  if (n < 3) return out;
  const auto partner = forced.partner_table(n);

  std::vector<std::vector<Vertex>> adj(n);
  for (Vertex v = 0; v < n; ++v) {
    adj[v].assign(graph.neighbors(v).begin(), graph.neighbors(v).end());
  }
  for (const auto& e : forced.pairs()) {
    if (!graph.has_edge(e.u, e.v)) {
      adj[e.u].push_back(e.v);
      adj[e.v].push_back(e.u);
    }
  }
  for (const auto& a : adj) {
    if (a.size() < 2) return out;
  }

  std::vector<Vertex> path{0};
  std::vector<bool> used(n, false);
  used[0] = true;
  bool timed_out = false;

  // Entering x from prev: x's partner must be prev, still unvisited (then it
  // comes next), or the start when x closes the cycle.
  auto partner_ok = [&](Vertex x, Vertex prev, bool last) {
    const auto y = partner[x];
    if (y < 0) return true;
    const auto yv = static_cast<Vertex>(y);
    return yv == prev || !used[yv] || (last && yv == 0);
  };

  auto recurse = [&](auto&& self) -> bool {
    if (++out.nodes > node_budget) {
      timed_out = true;
      return false;
    }
    const Vertex x = path.back();
    if (path.size() == n) {
      if (std::find(adj[x].begin(), adj[x].end(), Vertex{0}) == adj[x].end()) return false;
      // A forced pair at the start is traversed by the closing edge or by
      // the first step.
      const auto y0 = partner[0];
      return y0 < 0 || static_cast<Vertex>(y0) == path[1] || static_cast<Vertex>(y0) == x;
    }
    const auto px = partner[x];
    const Vertex prev = path.size() >= 2 ? path[path.size() - 2] : x;
    const bool must_follow = px >= 0 && static_cast<Vertex>(px) != prev && !used[px];
    for (Vertex w : adj[x]) {
      if (used[w]) continue;
      if (must_follow && w != static_cast<Vertex>(px)) continue;
      if (!partner_ok(w, x, path.size() + 1 == n)) continue;
      used[w] = true;
      path.push_back(w);
      if (self(self)) return true;
      path.pop_back();
      used[w] = false;
      if (timed_out) return false;
    }
    return false;
  };

  // Traverse the start's forced pair first: a cycle may be read either way.
  if (partner[0] >= 0) {
    const auto y = static_cast<Vertex>(partner[0]);
    used[y] = true;
    path.push_back(y);
    if (partner_ok(y, 0, n == 2)) {
      if (recurse(recurse)) {
        out.status = SearchStatus::Cycle;
        out.cycle = path;
        return out;
      }
    }
    out.status = timed_out ? SearchStatus::Timeout : SearchStatus::None;
    return out;
  }
  if (recurse(recurse)) {
    out.status = SearchStatus::Cycle;
    out.cycle = path;
    return out;
  }
  out.status = timed_out ? SearchStatus::Timeout : SearchStatus::None;
  return out;
}

namespace {

// ends[m] = vertices at which some path covering exactly m can end.
std::vector<std::uint32_t> path_table(const BlockedGraph& graph,
                                      const std::vector<std::uint32_t>& nb) {
  const auto n = static_cast<unsigned>(graph.n());
  std::vector<std::uint32_t> ends(std::size_t{1} << n, 0);
  for (unsigned v = 0; v < n; ++v) ends[1U << v] = 1U << v;
  const std::uint32_t full = n == 32 ? ~0U : (1U << n) - 1;
  for (std::uint32_t mask = 1; mask <= full && mask != 0; ++mask) {
    for (std::uint32_t e = ends[mask]; e; e &= e - 1) {
      const int v = std::countr_zero(e);
      for (std::uint32_t next = nb[v] & ~mask; next; next &= next - 1) {
        const std::uint32_t bit = next & -next;
        ends[mask | bit] |= bit;
      }
    }
  }
  return ends;
}

}  // namespace

std::size_t longest_path_exact(const BlockedGraph& graph) {
  return longest_path_exact_path(graph).size() - (graph.n() > 0 ? 1 : 0);
}

std::vector<Vertex> longest_path_exact_path(const BlockedGraph& graph) {
  require_size(graph, 20, "longest_path_exact");
  const auto n = static_cast<unsigned>(graph.n());
  if (n == 0) return {};
  const auto nb = neighbor_masks(graph);
  const auto ends = path_table(graph, nb);

  std::uint32_t best_mask = 1;
  int best = 1;
  for (std::uint32_t mask = 1; mask < ends.size(); ++mask) {
    if (ends[mask] && std::popcount(mask) > best) {
      best = std::popcount(mask);
      best_mask = mask;
    }
  }
  std::vector<Vertex> path;
  std::uint32_t mask = best_mask;
  std::uint32_t last = ends[mask] & -ends[mask];
  while (true) {
    const int v = std::countr_zero(last);
    path.push_back(static_cast<Vertex>(v));
    mask &= ~last;
    if (!mask) break;
    const std::uint32_t options = ends[mask] & nb[v];
    last = options & -options;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

bool verify_cycle(const BlockedGraph& graph, const std::vector<Vertex>& cycle,
                  const ForcedEdgeSet& forced) {
  const std::size_t n = graph.n();
  if (n < 3 || cycle.size() != n) return false;
  std::vector<bool> seen(n, false);
  for (Vertex v : cycle) {
    if (v >= n || seen[v]) return false;
    seen[v] = true;
  }
  std::vector<Edge> used;
  used.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Edge e(cycle[i], cycle[(i + 1) % n]);
    if (!graph.has_edge(e.u, e.v) && !forced.contains(e)) return false;
    used.push_back(e);
  }
  std::sort(used.begin(), used.end());
  for (const auto& e : forced.pairs()) {
    if (!std::binary_search(used.begin(), used.end(), e)) return false;
  }
  return true;
}

}  // namespace blockham

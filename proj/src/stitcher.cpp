#include "blockham/stitcher.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "blockham/rng.hpp"
#include "blockham/structure.hpp"

namespace blockham {

const char* to_string(StitchResult::Status s) {
  switch (s) {
    case StitchResult::Status::Found: return "found";
    case StitchResult::Status::Precondition: return "precondition";
    case StitchResult::Status::Bottom: return "bottom";
    case StitchResult::Status::AuditFailed: return "audit_failed";
    case StitchResult::Status::SolverFailed: return "solver_failed";
    case StitchResult::Status::VerifyFailed: return "verify_failed";
  }
  return "?";
}

std::vector<Vertex> find_problematic(const BlockedGraph& base) {
  std::vector<Vertex> out;
  for (Vertex v = 0; v < base.n(); ++v) {
    if (base.block_degree(v) < 2) out.push_back(v);
  }
  return out;
}

BlockedGraph supplant(const BlockedGraph& graph, const std::vector<Vertex>& path) {
  if (path.size() < 2) throw std::invalid_argument("supplant needs a path with two ends");
  std::vector<bool> inner(graph.n(), false);
  for (std::size_t i = 1; i + 1 < path.size(); ++i) inner[path[i]] = true;
  std::vector<Edge> edges;
  for (const auto& e : graph.edges()) {
    if (!inner[e.u] && !inner[e.v]) edges.push_back(e);
  }
  edges.emplace_back(path.front(), path.back());
  return BlockedGraph(graph.partition(), std::move(edges));
}

namespace {

void expand_edge(Vertex a, Vertex b, const SupplantMap& map, std::vector<Vertex>& out,
                 std::size_t depth) {
  const Edge e(a, b);
  const auto it = map.find(e);
  if (it == map.end()) return;
  if (depth > map.size()) throw std::logic_error("cyclic supplant map");
  std::vector<Vertex> seq{a};
  if (a == e.u) {
    seq.insert(seq.end(), it->second.begin(), it->second.end());
  } else {
    seq.insert(seq.end(), it->second.rbegin(), it->second.rend());
  }
  seq.push_back(b);
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    if (i > 0) out.push_back(seq[i]);
    expand_edge(seq[i], seq[i + 1], map, out, depth + 1);
  }
}

}  // namespace

std::vector<Vertex> expand_cycle(const std::vector<Vertex>& cycle, const SupplantMap& map) {
  std::vector<Vertex> out;
  const std::size_t m = cycle.size();
  for (std::size_t i = 0; i < m; ++i) {
    out.push_back(cycle[i]);
    if (m >= 2) expand_edge(cycle[i], cycle[(i + 1) % m], map, out, 0);
  }
  return out;
}

GreenCover build_green_cover(const BlockedGraph& final_graph, const BlockedGraph& base,
                             std::uint64_t seed, std::size_t max_retries) {
  if (const auto d2 = check_d2(final_graph); !d2.holds) {
    throw StitchPreconditionError(d2.witness->vertices.front(), "final graph is not D2: " + d2.detail);
  }
  if (const auto col1 = check_col1(final_graph, base); !col1.holds) {
    throw StitchPreconditionError(col1.witness->vertices.front(), "COL1 fails: " + col1.detail);
  }
  GreenCover cover;
  const std::size_t n = final_graph.n();
  cover.problematic = find_problematic(base);
  std::vector<bool> problematic(n, false);
  for (Vertex v : cover.problematic) problematic[v] = true;

  std::vector<GreenPath> paths;
  for (std::size_t attempt = 0;; ++attempt) {
    if (attempt > max_retries) {
      throw RetryExhaustedError("green paths keep overlapping after " +
                                std::to_string(max_retries) + " redraws");
    }
    CounterRng rng(stream_seed(seed, 0x67, attempt));
    paths.clear();
    std::vector<bool> used(n, false);
    bool ok = true;
    for (Vertex u : cover.problematic) {
      const auto nb = base.neighbors(u);
      if (nb.size() < 2) throw StitchPreconditionError(u, "problematic vertex with base degree < 2");
      const auto i = rng.below(nb.size());
      auto j = rng.below(nb.size() - 1);
      if (j >= i) ++j;
      GreenPath gp{u, std::min(nb[i], nb[j]), std::max(nb[i], nb[j])};
      // Paths must be vertex-disjoint; an end that is itself problematic
      // would chain two paths into one of length 3 or more.
      for (Vertex x : {gp.center, gp.a, gp.b}) {
        if (used[x]) ok = false;
        used[x] = true;
      }
      if (problematic[gp.a] || problematic[gp.b]) ok = false;
      paths.push_back(gp);
    }
    if (ok) break;
    ++cover.resamples;
  }
  cover.green_paths = paths;

  std::vector<Edge> edges;
  for (const auto& e : final_graph.edges()) {
    if (!problematic[e.u] && !problematic[e.v]) edges.push_back(e);
  }
  for (const auto& gp : paths) {
    const Edge e(gp.a, gp.b);
    cover.green_edges.push_back(e);
    cover.supplant_map[e] = {gp.center};
    cover.green_vertices.push_back(gp.a);
    cover.green_vertices.push_back(gp.b);
    edges.push_back(e);
  }
  std::sort(cover.green_edges.begin(), cover.green_edges.end());
  std::sort(cover.green_vertices.begin(), cover.green_vertices.end());
  cover.h = BlockedGraph(final_graph.partition(), std::move(edges));
  cover.in_h.assign(n, true);
  for (Vertex v : cover.problematic) cover.in_h[v] = false;
  return cover;
}

ParityFix parity_fix(const GreenCover& cover, const BlockedGraph& base, std::uint64_t seed,
                     std::size_t max_retries) {
  ParityFix fix;
  const auto& part = base.partition();
  const std::size_t k = part.k();
  if (k == 1) return fix;

  std::vector<std::vector<std::size_t>> green(k, std::vector<std::size_t>(k, 0));
  for (const auto& e : cover.green_edges) {
    const auto i = part.block_of(e.u);
    const auto j = part.block_of(e.v);
    if (i != j) ++green[std::min(i, j)][std::max(i, j)];
  }
  std::vector<std::vector<std::vector<Edge>>> pool(k, std::vector<std::vector<Edge>>(k));
  for (const auto& e : base.edges()) {
    if (!cover.in_h[e.u] || !cover.in_h[e.v]) continue;
    const auto i = part.block_of(e.u);
    const auto j = part.block_of(e.v);
    if (i != j) pool[std::min(i, j)][std::max(i, j)].push_back(e);
  }
  struct Need {
    std::size_t i, j, count;
  };
  std::vector<Need> needs;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const std::size_t g = green[i][j];
      const std::size_t count = g == 0 ? 2 : (g % 2 == 1 ? 1 : 0);
      if (count == 0) continue;
      if (pool[i][j].size() < count) {
        fix.status = ParityFix::Status::Bottom;
        fix.detail = "blocks " + std::to_string(i) + "," + std::to_string(j) + " have " +
                     std::to_string(pool[i][j].size()) + " usable blue crossing edges";
        return fix;
      }
      needs.push_back({i, j, count});
    }
  }

  std::vector<bool> u0(base.n(), false);
  for (Vertex v : cover.green_vertices) u0[v] = true;
  for (std::size_t attempt = 0;; ++attempt) {
    if (attempt > max_retries) {
      throw RetryExhaustedError("parity fix keeps violating E0 conditions after " +
                                std::to_string(max_retries) + " redraws");
    }
    CounterRng rng(stream_seed(seed, 0x9a, attempt));
    std::vector<Edge> E;
    for (const auto& need : needs) {
      const auto& cand = pool[need.i][need.j];
      const auto a = rng.below(cand.size());
      E.push_back(cand[a]);
      if (need.count == 2) {
        auto b = rng.below(cand.size() - 1);
        if (b >= a) ++b;
        E.push_back(cand[b]);
      }
    }
    // E ∩ E_0 = ∅, E a matching, U ∩ U_0 = ∅.
    bool ok = true;
    std::vector<bool> seen(base.n(), false);
    for (const auto& e : E) {
      if (std::binary_search(cover.green_edges.begin(), cover.green_edges.end(), e)) ok = false;
      for (Vertex x : {e.u, e.v}) {
        if (seen[x] || u0[x]) ok = false;
        seen[x] = true;
      }
    }
    if (ok) {
      std::sort(E.begin(), E.end());
      fix.recolored = E;
      for (const auto& e : E) {
        fix.ends.push_back(e.u);
        fix.ends.push_back(e.v);
      }
      std::sort(fix.ends.begin(), fix.ends.end());
      return fix;
    }
    ++fix.resamples;
  }
}

InductionAudit audit_induction(const BlockedGraph& h, const std::vector<bool>& in_h,
                         const std::vector<Edge>& B, std::size_t active_blocks,
                         double size_factor) {
  InductionAudit audit;
  const auto& part = h.partition();
  auto required = [&](std::string s) {
    audit.required_ok = false;
    audit.violations.push_back(std::move(s));
  };
  auto advisory = [&](std::string s) {
    audit.advisory_ok = false;
    audit.advisories.push_back(std::move(s));
  };

  std::vector<int> owner(h.n(), -1);
  std::vector<Vertex> vb;
  for (std::size_t idx = 0; idx < B.size(); ++idx) {
    for (Vertex x : {B[idx].u, B[idx].v}) {
      if (!in_h[x] || part.block_of(x) >= active_blocks) {
        required("pair end " + std::to_string(x) + " is outside the active vertex set");
      }
      if (owner[x] >= 0) required("pairs share vertex " + std::to_string(x));
      owner[x] = static_cast<int>(idx);
      vb.push_back(x);
    }
  }
  std::vector<std::vector<std::size_t>> count(active_blocks,
                                              std::vector<std::size_t>(active_blocks, 0));
  for (const auto& e : B) {
    const auto i = part.block_of(e.u);
    const auto j = part.block_of(e.v);
    if (i >= active_blocks || j >= active_blocks) continue;
    ++count[i][j];
    if (i != j) ++count[j][i];
  }
  for (std::size_t i = 0; i < active_blocks; ++i) {
    std::size_t crossing = 0;
    for (std::size_t j = 0; j < active_blocks; ++j) {
      if (j == i) continue;
      crossing += count[i][j];
      if (j > i && count[i][j] == 0) {
        required("no pair between blocks " + std::to_string(i) + " and " + std::to_string(j));
      }
    }
    if (crossing % 2 != 0) required("odd crossing pair count at block " + std::to_string(i));
  }

  const double ln = std::log(static_cast<double>(h.n()));
  if (static_cast<double>(vb.size()) > size_factor * ln) {
    advisory("|V(B)| = " + std::to_string(vb.size()) + " exceeds " + std::to_string(size_factor) +
             " log n");
  }
  std::vector<std::int64_t> claimed(h.n(), -1);
  for (Vertex x : vb) {
    for (Vertex w : h.neighbors(x)) {
      if (!in_h[w]) continue;
      if (claimed[w] >= 0 && claimed[w] != x) {
        advisory("vertices " + std::to_string(claimed[w]) + " and " + std::to_string(x) +
                 " share neighbour " + std::to_string(w));
      }
      claimed[w] = x;
      if (h.degree(w) <= 2) {
        advisory("vertex " + std::to_string(x) + " is adjacent to degree-" +
                 std::to_string(h.degree(w)) + " vertex " + std::to_string(w));
      }
    }
  }
  return audit;
}

namespace {

struct BlockSolve {
  std::optional<std::vector<Vertex>> cycle;  // global numbering
  std::string solver;
  std::string outcome;
};

BlockSolve solve_block(const BlockedGraph& h, const std::vector<Vertex>& verts,
                       const std::vector<Edge>& forced_global, const StitchOptions& options,
                       std::uint64_t seed) {
  BlockSolve out;
  if (verts.size() < 3) {
    out.solver = "none";
    out.outcome = "block_too_small";
    return out;
  }
  std::vector<std::int64_t> index(h.n(), -1);
  for (std::size_t i = 0; i < verts.size(); ++i) index[verts[i]] = static_cast<std::int64_t>(i);
  const BlockedGraph local = induced_subgraph(h, verts);
  std::vector<Edge> pairs;
  for (const auto& e : forced_global) {
    pairs.emplace_back(static_cast<Vertex>(index[e.u]), static_cast<Vertex>(index[e.v]));
  }
  const ForcedEdgeSet forced(std::move(pairs));
  std::vector<Vertex> local_cycle;
  if (verts.size() <= options.exact_limit) {
    out.solver = "backtrack";
    const auto r = backtrack_hamilton(local, forced, options.backtrack_budget);
    out.outcome = r.status == SearchStatus::Cycle ? "found"
                  : r.status == SearchStatus::None ? "none"
                                                   : "timeout";
    if (r.status == SearchStatus::Cycle) local_cycle = r.cycle;
  } else {
    out.solver = "posa";
    PosaOptions po = options.posa;
    po.seed = seed;
    const auto r = posa_solve(local, forced, po);
    out.outcome = r.status == PosaStatus::Found        ? "found"
                  : r.status == PosaStatus::Infeasible ? "infeasible"
                                                       : "failed";
    if (r.status == PosaStatus::Found) local_cycle = r.cycle;
  }
  if (!local_cycle.empty()) {
    std::vector<Vertex> cycle;
    for (Vertex v : local_cycle) cycle.push_back(verts[v]);
    out.cycle = std::move(cycle);
  }
  return out;
}

std::vector<Vertex> block_vertices(const BlockedGraph& h, const std::vector<bool>& in_h,
                                   std::size_t block) {
  const auto& part = h.partition();
  std::vector<Vertex> out;
  for (std::size_t v = part.offset(block); v < part.offset(block) + part.size(block); ++v) {
    if (in_h[v]) out.push_back(static_cast<Vertex>(v));
  }
  return out;
}

}  // namespace

StitchResult stitch(const BlockedGraph& final_graph, const GreenCover& cover,
                    const ParityFix& fix, const StitchOptions& options) {
  StitchResult res;
  if (fix.status == ParityFix::Status::Bottom) {
    res.status = StitchResult::Status::Bottom;
    res.violation = fix.detail;
    return res;
  }
  const BlockedGraph& h = cover.h;
  const auto& part = h.partition();
  const std::size_t k = part.k();

  std::vector<Edge> B = cover.green_edges;
  B.insert(B.end(), fix.recolored.begin(), fix.recolored.end());
  std::sort(B.begin(), B.end());
  res.audit = audit_induction(h, cover.in_h, B, k, options.size_factor);
  if (!res.audit.required_ok) {
    res.status = StitchResult::Status::AuditFailed;
    res.violation = res.audit.violations.front();
    return res;
  }

  SupplantMap map = cover.supplant_map;
  for (std::size_t t = k; t-- > 1;) {
    const auto verts = block_vertices(h, cover.in_h, t);
    std::vector<Edge> inside;             // B'_t
    std::vector<Edge> rest;               // pairs not touching block t
    std::map<Vertex, Vertex> outer;       // V_t(B''_t) end -> its other end
    for (const auto& e : B) {
      const bool u_in = part.block_of(e.u) == t;
      const bool v_in = part.block_of(e.v) == t;
      if (u_in && v_in) {
        inside.push_back(e);
      } else if (u_in) {
        outer[e.u] = e.v;
      } else if (v_in) {
        outer[e.v] = e.u;
      } else {
        rest.push_back(e);
      }
    }
    // Sorted pairing A'_t of V_t(B''_t).
    std::vector<Vertex> ends;
    for (const auto& [x, _] : outer) ends.push_back(x);
    if (ends.empty() || ends.size() % 2 != 0) {
      res.status = StitchResult::Status::AuditFailed;
      res.violation = "block " + std::to_string(t) + " has " + std::to_string(ends.size()) +
                      " crossing pair ends";
      return res;
    }
    std::vector<Edge> pairing;
    for (std::size_t i = 0; i < ends.size(); i += 2) pairing.emplace_back(ends[i], ends[i + 1]);
    std::vector<Edge> forced = inside;
    forced.insert(forced.end(), pairing.begin(), pairing.end());

    const auto solved = solve_block(h, verts, forced, options, stream_seed(options.seed, t));
    res.trace.push_back("level=" + std::to_string(t + 1) + " block=" + std::to_string(t) +
                        " |A|=" + std::to_string(forced.size()) + " solver=" + solved.solver +
                        " outcome=" + solved.outcome);
    if (!solved.cycle) {
      res.status = StitchResult::Status::SolverFailed;
      res.failed_block = static_cast<std::int64_t>(t);
      res.violation = "block " + std::to_string(t) + ": " + solved.outcome;
      return res;
    }

    // Cut the cycle at every A'_t pair, leaving paths between pairing ends.
    const auto& c = *solved.cycle;
    const std::size_t m = c.size();
    std::set<Edge> cut(pairing.begin(), pairing.end());
    std::size_t start = 0;
    while (!cut.count(Edge(c[start], c[(start + 1) % m]))) ++start;
    std::vector<std::vector<Vertex>> paths(1);
    for (std::size_t s = 1; s <= m; ++s) {
      const Vertex v = c[(start + s) % m];
      paths.back().push_back(v);
      if (s < m && cut.count(Edge(v, c[(start + s + 1) % m]))) paths.emplace_back();
    }
    for (const auto& p : paths) {
      const Vertex x = p.front();
      const Vertex y = p.back();
      const Edge ej(outer.at(x), outer.at(y));
      std::vector<Vertex> inner = p;  // from outer(x)'s side
      if (ej.u != outer.at(x)) std::reverse(inner.begin(), inner.end());
      map[ej] = std::move(inner);
      rest.push_back(ej);
    }
    std::sort(rest.begin(), rest.end());
    B = std::move(rest);
    const auto level = audit_induction(h, cover.in_h, B, t, options.size_factor);
    if (!level.required_ok) {
      res.status = StitchResult::Status::AuditFailed;
      res.violation = "after block " + std::to_string(t) + ": " + level.violations.front();
      return res;
    }
  }

  const auto verts = block_vertices(h, cover.in_h, 0);
  const auto solved = solve_block(h, verts, B, options, stream_seed(options.seed, 0));
  res.trace.push_back("level=1 block=0 |A|=" + std::to_string(B.size()) + " solver=" +
                      solved.solver + " outcome=" + solved.outcome);
  if (!solved.cycle) {
    res.status = StitchResult::Status::SolverFailed;
    res.failed_block = 0;
    res.violation = "block 0: " + solved.outcome;
    return res;
  }

  auto cycle = expand_cycle(*solved.cycle, map);
  if (!verify_cycle(final_graph, cycle)) {
    res.status = StitchResult::Status::VerifyFailed;
    res.violation = "expanded cycle is not a Hamilton cycle of the final graph";
    return res;
  }
  // Every green 2-path must appear with both edges.
  std::vector<std::size_t> pos(final_graph.n());
  for (std::size_t i = 0; i < cycle.size(); ++i) pos[cycle[i]] = i;
  const std::size_t n = cycle.size();
  for (const auto& gp : cover.green_paths) {
    auto next_to = [&](Vertex a, Vertex b) {
      const std::size_t d = (pos[a] + n - pos[b]) % n;
      return d == 1 || d == n - 1;
    };
    if (!next_to(gp.center, gp.a) || !next_to(gp.center, gp.b)) {
      res.status = StitchResult::Status::VerifyFailed;
      res.violation = "green 2-path at " + std::to_string(gp.center) + " not on the cycle";
      return res;
    }
  }
  res.status = StitchResult::Status::Found;
  res.cycle = std::move(cycle);
  return res;
}

StitchResult stitch_pipeline(const BlockedGraph& final_graph, const BlockedGraph& base,
                             const StitchOptions& options) {
  StitchResult res;
  GreenCover cover;
  ParityFix fix;
  try {
    cover = build_green_cover(final_graph, base, stream_seed(options.seed, 1), options.max_retries);
    fix = parity_fix(cover, base, stream_seed(options.seed, 2), options.max_retries);
  } catch (const StitchPreconditionError& e) {
    res.status = StitchResult::Status::Precondition;
    res.violation = e.what();
    return res;
  } catch (const RetryExhaustedError& e) {
    res.status = StitchResult::Status::Precondition;
    res.violation = e.what();
    return res;
  }
  return stitch(final_graph, cover, fix, options);
}

}  // namespace blockham

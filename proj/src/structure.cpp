#include "blockham/structure.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "blockham/rng.hpp"
#include "blockham/solver.hpp"
#include "json.hpp"

namespace blockham {

namespace {

// Set membership with O(1) reset.
class Marker {
 public:
  explicit Marker(std::size_t n) : stamp_(n, 0) {}
  void next() { ++epoch_; }
  void mark(Vertex v) { stamp_[v] = epoch_; }
  bool marked(Vertex v) const { return stamp_[v] == epoch_; }

 private:
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 1;
};

const char* mode_name(CheckMode m) {
  switch (m) {
    case CheckMode::Exhaustive: return "exhaustive";
    case CheckMode::Sampled: return "sampled";
    case CheckMode::Unknown: return "unknown";
  }
  return "?";
}

PredicateReport fail_with(PredicateReport r, Witness w, std::string detail = {}) {
  r.holds = false;
  r.witness = std::move(w);
  if (!detail.empty()) r.detail = std::move(detail);
  return r;
}

double log_n(const BlockedGraph& g) { return std::log(static_cast<double>(g.n())); }

std::vector<std::vector<Vertex>> components(const BlockedGraph& graph) {
  std::vector<std::vector<Vertex>> out;
  std::vector<bool> seen(graph.n(), false);
  for (Vertex s = 0; s < graph.n(); ++s) {
    if (seen[s]) continue;
    out.emplace_back();
    std::vector<Vertex> stack{s};
    seen[s] = true;
    while (!stack.empty()) {
      const Vertex v = stack.back();
      stack.pop_back();
      out.back().push_back(v);
      for (Vertex w : graph.neighbors(v)) {
        if (!seen[w]) {
          seen[w] = true;
          stack.push_back(w);
        }
      }
    }
    std::sort(out.back().begin(), out.back().end());
  }
  return out;
}

// Sum of C(n, s) for s = 1..smax, saturating above `cap`.
double subset_count(std::size_t n, std::size_t smax, double cap) {
  double total = 0.0;
  double c = 1.0;
  for (std::size_t s = 1; s <= smax; ++s) {
    c = c * static_cast<double>(n - s + 1) / static_cast<double>(s);
    total += c;
    if (total > cap) return total;
  }
  return total;
}

// Visits every subset of [0, n) with 1 <= |S| <= smax until f returns false.
template <class F>
bool for_each_subset(std::size_t n, std::size_t smax, F&& f) {
  std::vector<Vertex> S;
  for (std::size_t s = 1; s <= std::min(smax, n); ++s) {
    S.resize(s);
    std::iota(S.begin(), S.end(), Vertex{0});
    while (true) {
      if (!f(S)) return false;
      std::size_t i = s;
      while (i > 0 && S[i - 1] == n - s + i - 1) --i;
      if (i == 0) break;
      ++S[i - 1];
      for (std::size_t j = i; j < s; ++j) S[j] = S[j - 1] + 1;
    }
  }
  return true;
}

std::vector<Vertex> random_subset(CounterRng& rng, std::size_t n, std::size_t s, Marker& mark) {
  mark.next();
  std::vector<Vertex> out;
  while (out.size() < s) {
    const auto v = static_cast<Vertex>(rng.below(n));
    if (!mark.marked(v)) {
      mark.mark(v);
      out.push_back(v);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// |N(S) \ V| via marking; `inS` is left marking S.
std::size_t outer_size(const BlockedGraph& g, const std::vector<Vertex>& S,
                       const std::vector<bool>& excluded, Marker& inS, Marker& seen) {
  inS.next();
  for (Vertex v : S) inS.mark(v);
  seen.next();
  std::size_t count = 0;
  for (Vertex v : S) {
    for (Vertex w : g.neighbors(v)) {
      if (inS.marked(w) || seen.marked(w)) continue;
      seen.mark(w);
      count += !excluded[w];
    }
  }
  return count;
}

std::size_t induced_edges(const BlockedGraph& g, const std::vector<Vertex>& S, Marker& inS) {
  inS.next();
  for (Vertex v : S) inS.mark(v);
  std::size_t twice = 0;
  for (Vertex v : S) {
    for (Vertex w : g.neighbors(v)) twice += inS.marked(w);
  }
  return twice / 2;
}

std::vector<Vertex> by_degree(const BlockedGraph& g, bool ascending) {
  std::vector<Vertex> order(g.n());
  std::iota(order.begin(), order.end(), Vertex{0});
  std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) {
    return ascending ? g.degree(a) < g.degree(b) : g.degree(a) > g.degree(b);
  });
  return order;
}

}  // namespace

std::string PredicateReport::to_text() const {
  std::ostringstream os;
  os << "predicate=" << predicate << '\n'
     << "holds=" << (holds ? "true" : "false") << '\n'
     << "mode=" << mode_name(mode) << '\n'
     << "samples=" << samples << '\n';
  if (!detail.empty()) os << "detail=" << detail << '\n';
  if (witness) {
    os << "witness_kind=" << witness->kind << '\n';
    os << "witness_vertices=";
    for (std::size_t i = 0; i < witness->vertices.size(); ++i) {
      os << (i ? "," : "") << witness->vertices[i];
    }
    os << '\n' << "witness_edges=";
    for (std::size_t i = 0; i < witness->edges.size(); ++i) {
      os << (i ? "," : "") << witness->edges[i].u << '-' << witness->edges[i].v;
    }
    os << '\n';
    if (!witness->context.empty()) {
      os << "witness_context=";
      for (std::size_t i = 0; i < witness->context.size(); ++i) {
        os << (i ? "," : "") << witness->context[i];
      }
      os << '\n';
    }
  }
  return os.str();
}

std::string PredicateReport::to_json() const {
  nlohmann::json j;
  j["predicate"] = predicate;
  j["holds"] = holds;
  j["mode"] = mode_name(mode);
  j["samples"] = samples;
  j["detail"] = detail;
  if (witness) {
    nlohmann::json w;
    w["kind"] = witness->kind;
    w["vertices"] = witness->vertices;
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : witness->edges) edges.push_back({e.u, e.v});
    w["edges"] = edges;
    w["context"] = witness->context;
    j["witness"] = w;
  } else {
    j["witness"] = nullptr;
  }
  return j.dump();
}

double RemovalBudget::small_threshold(std::size_t n) const {
  return std::log(static_cast<double>(n)) / small_divisor;
}

std::size_t RemovalBudget::large_cap(std::size_t n) const {
  return static_cast<std::size_t>(std::floor(std::log(static_cast<double>(n)) / large_divisor));
}

bool RemovalBudget::is_small(const BlockedGraph& graph, Vertex v) const {
  return static_cast<double>(graph.degree(v)) < small_threshold(graph.n());
}

std::size_t RemovalBudget::cap(const BlockedGraph& graph, Vertex v) const {
  return is_small(graph, v) ? 0 : large_cap(graph.n());
}

PredicateReport check_d2(const BlockedGraph& graph) {
  PredicateReport r{.predicate = "D2"};
  for (Vertex v = 0; v < graph.n(); ++v) {
    if (graph.degree(v) < 2) {
      return fail_with(r, Witness{.kind = "vertex", .vertices = {v}},
                       "vertex " + std::to_string(v) + " has degree " +
                           std::to_string(graph.degree(v)));
    }
  }
  return r;
}

PredicateReport check_connected(const BlockedGraph& graph) {
  PredicateReport r{.predicate = "CNT"};
  auto comps = components(graph);
  if (comps.size() <= 1) return r;
  const auto smallest = std::min_element(
      comps.begin(), comps.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });
  return fail_with(r, Witness{.kind = "set", .vertices = *smallest},
                   std::to_string(comps.size()) + " components");
}

std::vector<Vertex> neighborhood(const BlockedGraph& graph, const std::vector<Vertex>& S) {
  std::vector<Vertex> out;
  if (graph.has_rows()) {
    VertexBitset acc(graph.n());
    VertexBitset self(graph.n());
    for (Vertex v : S) {
      acc.merge(graph.row(v));
      self.set(v);
    }
    acc.subtract(self);
    acc.for_each([&](std::size_t v) { out.push_back(static_cast<Vertex>(v)); });
    return out;
  }
  std::vector<bool> inS(graph.n(), false);
  std::vector<bool> seen(graph.n(), false);
  for (Vertex v : S) inS[v] = true;
  for (Vertex v : S) {
    for (Vertex w : graph.neighbors(v)) {
      if (!inS[w] && !seen[w]) {
        seen[w] = true;
        out.push_back(w);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t n1(const BlockedGraph& graph) {
  std::size_t c = 0;
  for (Vertex v = 0; v < graph.n(); ++v) c += graph.degree(v) <= 1;
  return c;
}

PredicateReport check_expn(const BlockedGraph& graph, const ExpnOptions& options) {
  PredicateReport r{.predicate = options.excluded.empty() ? "EXPN" : "EXPN+"};
  const std::size_t n = graph.n();
  if (n1(graph) > 0) {
    r.detail = "vacuous: n1 > 0";
    return r;
  }
  const auto smax = static_cast<std::size_t>(std::floor(options.epsilon0 * static_cast<double>(n)));
  if (smax == 0) {
    r.detail = "vacuous: epsilon0 n < 1";
    return r;
  }
  std::vector<bool> excluded(n, false);
  for (Vertex v : options.excluded) excluded[v] = true;
  Marker inS(n);
  Marker seen(n);
  auto violated = [&](const std::vector<Vertex>& S) {
    return outer_size(graph, S, excluded, inS, seen) < 2 * S.size();
  };
  auto witness = [&](std::vector<Vertex> S) {
    std::sort(S.begin(), S.end());
    return Witness{.kind = "set", .vertices = std::move(S), .context = options.excluded};
  };

  if (subset_count(n, smax, options.exhaustive_cap) <= options.exhaustive_cap) {
    r.mode = CheckMode::Exhaustive;
    std::optional<std::vector<Vertex>> bad;
    for_each_subset(n, smax, [&](const std::vector<Vertex>& S) {
      ++r.samples;
      if (violated(S)) {
        bad = S;
        return false;
      }
      return true;
    });
    if (bad) return fail_with(r, witness(*bad));
    return r;
  }

  r.mode = CheckMode::Sampled;
  // Adversarial: grow S greedily from the lowest-degree vertices, adding the
  // neighbour that keeps |N(S) \ V| smallest.
  const auto order = by_degree(graph, true);
  Marker cand(n);
  for (std::size_t s = 0; s < std::min(options.adversarial_seeds, n); ++s) {
    std::vector<Vertex> S{order[s]};
    while (true) {
      ++r.samples;
      if (violated(S)) return fail_with(r, witness(S));
      if (S.size() >= smax) break;
      // inS/seen now mark S and N(S) from the last violated() call.
      std::int64_t best = -1;
      std::int64_t best_delta = 0;
      cand.next();
      for (Vertex v : S) {
        for (Vertex u : graph.neighbors(v)) {
          if (inS.marked(u) || cand.marked(u)) continue;
          cand.mark(u);
          std::int64_t delta = excluded[u] ? 0 : -1;
          for (Vertex w : graph.neighbors(u)) {
            if (!inS.marked(w) && !seen.marked(w) && !excluded[w]) ++delta;
          }
          if (best < 0 || delta < best_delta ||
              (delta == best_delta && graph.degree(u) < graph.degree(static_cast<Vertex>(best)))) {
            best = u;
            best_delta = delta;
          }
        }
      }
      if (best < 0) break;
      S.push_back(static_cast<Vertex>(best));
    }
  }
  for (std::size_t i = 0; i < options.samples; ++i) {
    CounterRng rng(stream_seed(options.seed, i));
    const std::size_t s = 1 + static_cast<std::size_t>(rng.below(smax));
    auto S = random_subset(rng, n, s, cand);
    ++r.samples;
    if (violated(S)) return fail_with(r, witness(std::move(S)));
  }
  return r;
}

namespace {

std::vector<Edge> draw_removal(const BlockedGraph& g, const RemovalBudget& budget,
                               std::size_t round, CounterRng& rng) {
  std::vector<Edge> F;
  if (round == 0 || budget.large_cap(g.n()) == 0) return F;
  std::vector<std::size_t> left(g.n());
  for (Vertex v = 0; v < g.n(); ++v) left[v] = budget.cap(g, v);
  auto take = [&](const Edge& e) {
    if (left[e.u] > 0 && left[e.v] > 0) {
      --left[e.u];
      --left[e.v];
      F.push_back(e);
    }
  };
  if (round % 2 == 1) {
    for (Vertex v : by_degree(g, false)) {
      for (Vertex w : g.neighbors(v)) take(Edge(v, w));
    }
  } else {
    std::vector<Edge> edges = g.edges();
    std::shuffle(edges.begin(), edges.end(), rng);
    for (const auto& e : edges) take(e);
  }
  std::sort(F.begin(), F.end());
  return F;
}

// V with |V| <= log n, pairwise without common neighbours, none adjacent to
// a vertex of degree <= 2.
std::vector<Vertex> draw_excluded(const BlockedGraph& g, CounterRng& rng) {
  const auto limit = static_cast<std::size_t>(std::floor(log_n(g)));
  std::vector<Vertex> order(g.n());
  std::iota(order.begin(), order.end(), Vertex{0});
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<bool> claimed(g.n(), false);  // neighbours of chosen vertices
  std::vector<Vertex> V;
  for (Vertex v : order) {
    if (V.size() >= limit) break;
    bool ok = true;
    for (Vertex w : g.neighbors(v)) {
      if (claimed[w] || g.degree(w) <= 2) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    for (Vertex w : g.neighbors(v)) claimed[w] = true;
    V.push_back(v);
  }
  std::sort(V.begin(), V.end());
  return V;
}

}  // namespace

PredicateReport check_sexpn(const BlockedGraph& graph, const SexpnOptions& options) {
  PredicateReport r{.predicate = options.strong ? "SSEXPN" : "SEXPN"};
  r.mode = CheckMode::Sampled;
  const bool trivial_budget = options.budget.large_cap(graph.n()) == 0;
  const std::size_t rounds = trivial_budget && !options.strong ? 1 : options.f_samples;
  if (trivial_budget) r.detail = "removal budget is 0 at this n";
  for (std::size_t t = 0; t < rounds; ++t) {
    CounterRng rng(stream_seed(options.expn.seed, 0x5e3, t));
    const auto F = draw_removal(graph, options.budget, t, rng);
    const BlockedGraph reduced = F.empty() ? graph : graph.without_edges(F);
    ++r.samples;
    const auto cnt = check_connected(reduced);
    if (!cnt.holds) {
      return fail_with(r, Witness{.kind = "edges+set", .vertices = cnt.witness->vertices, .edges = F},
                       "G - F is disconnected");
    }
    ExpnOptions eo = options.expn;
    eo.seed = stream_seed(options.expn.seed, t);
    if (options.strong) eo.excluded = draw_excluded(graph, rng);
    const auto ex = check_expn(reduced, eo);
    r.samples += ex.samples;
    if (!ex.holds) {
      return fail_with(r,
                       Witness{.kind = "edges+set", .vertices = ex.witness->vertices, .edges = F,
                               .context = eo.excluded},
                       "G - F fails " + ex.predicate);
    }
    if (ex.mode == CheckMode::Exhaustive && rounds == 1) r.mode = CheckMode::Exhaustive;
  }
  return r;
}

namespace {

PredicateReport check_c1(const BlockedGraph& g) {
  PredicateReport r{.predicate = "C1"};
  const double cut = 0.5 * log_n(g);
  const double bound = std::pow(static_cast<double>(g.n()), 0.9);
  const auto& part = g.partition();
  for (std::size_t i = 0; i < part.k(); ++i) {
    std::vector<Vertex> low;
    for (std::size_t v = part.offset(i); v < part.offset(i) + part.size(i); ++v) {
      if (static_cast<double>(g.degree(static_cast<Vertex>(v))) < cut) {
        low.push_back(static_cast<Vertex>(v));
      }
    }
    if (static_cast<double>(low.size()) > bound) {
      return fail_with(r, Witness{.kind = "set", .vertices = std::move(low)},
                       "block " + std::to_string(i));
    }
  }
  return r;
}

std::vector<Vertex> trace_back(const std::vector<std::int64_t>& parent, Vertex to) {
  std::vector<Vertex> path{to};
  while (parent[path.back()] >= 0) path.push_back(static_cast<Vertex>(parent[path.back()]));
  std::reverse(path.begin(), path.end());
  return path;
}

PredicateReport check_c2(const BlockedGraph& g, std::size_t low_degree) {
  PredicateReport r{.predicate = "C2"};
  const std::size_t n = g.n();
  std::vector<std::int64_t> parent(n, -1);
  std::vector<int> dist(n, -1);
  std::vector<Vertex> touched;
  for (Vertex s = 0; s < n; ++s) {
    if (g.degree(s) >= low_degree) continue;
    for (Vertex v : touched) {
      dist[v] = -1;
      parent[v] = -1;
    }
    touched.assign({s});
    dist[s] = 0;
    for (std::size_t head = 0; head < touched.size(); ++head) {
      const Vertex v = touched[head];
      if (dist[v] == 5) continue;
      for (Vertex w : g.neighbors(v)) {
        if (dist[w] >= 0) continue;
        dist[w] = dist[v] + 1;
        parent[w] = v;
        touched.push_back(w);
        if (g.degree(w) < low_degree) {
          return fail_with(r, Witness{.kind = "path", .vertices = trace_back(parent, w)},
                           "distance " + std::to_string(dist[w]));
        }
      }
    }
  }
  return r;
}

PredicateReport check_c3(const BlockedGraph& g, std::size_t low_degree) {
  PredicateReport r{.predicate = "C3"};
  const std::size_t n = g.n();
  std::vector<std::int64_t> parent(n, -1);
  std::vector<int> dist(n, -1);
  std::vector<Vertex> touched;
  for (Vertex s = 0; s < n; ++s) {
    if (g.degree(s) >= low_degree) continue;
    const auto nb = g.neighbors(s);
    for (std::size_t ai = 0; ai < nb.size(); ++ai) {
      // Shortest a-b path avoiding s, for the other neighbours b, up to 3 edges.
      for (Vertex v : touched) {
        dist[v] = -1;
        parent[v] = -1;
      }
      touched.assign({nb[ai]});
      dist[nb[ai]] = 0;
      dist[s] = 0;  // blocks s
      touched.push_back(s);
      for (std::size_t head = 0; head < touched.size(); ++head) {
        const Vertex v = touched[head];
        if (v == s || dist[v] == 3) continue;
        for (Vertex w : g.neighbors(v)) {
          if (dist[w] >= 0) continue;
          dist[w] = dist[v] + 1;
          parent[w] = v;
          touched.push_back(w);
          if (std::find(nb.begin() + static_cast<std::ptrdiff_t>(ai) + 1, nb.end(), w) != nb.end()) {
            auto cycle = trace_back(parent, w);
            cycle.insert(cycle.begin(), s);
            return fail_with(r, Witness{.kind = "cycle", .vertices = std::move(cycle)},
                             "cycle of length " + std::to_string(dist[w] + 2));
          }
        }
      }
    }
  }
  return r;
}

// Greedy densest growth: repeatedly add the neighbour with the most edges
// into S. Calls visit(S, e(S)) at every size; stops when visit returns true.
template <class Visit>
bool grow_dense(const BlockedGraph& g, Vertex seed, std::size_t max_size, Marker& inS,
                Visit&& visit) {
  std::vector<Vertex> S{seed};
  std::vector<std::size_t> into(g.n(), 0);
  std::vector<Vertex> frontier;
  std::size_t edges = 0;
  inS.next();
  inS.mark(seed);
  for (Vertex w : g.neighbors(seed)) {
    if (into[w]++ == 0) frontier.push_back(w);
  }
  while (true) {
    if (visit(S, edges)) return true;
    if (S.size() >= max_size) return false;
    std::int64_t best = -1;
    for (Vertex u : frontier) {
      if (inS.marked(u)) continue;
      if (best < 0 || into[u] > into[best]) best = u;
    }
    if (best < 0) return false;
    const auto b = static_cast<Vertex>(best);
    S.push_back(b);
    inS.mark(b);
    edges += into[b];
    for (Vertex w : g.neighbors(b)) {
      if (!inS.marked(w) && into[w]++ == 0) frontier.push_back(w);
    }
  }
}

PredicateReport check_density(const BlockedGraph& g, const std::string& name, std::size_t lo,
                              std::size_t hi, const std::function<bool(std::size_t, std::size_t)>& ok,
                              const CPropertyOptions& options) {
  PredicateReport r{.predicate = name};
  const std::size_t n = g.n();
  if (lo < 1) lo = 1;
  hi = std::min(hi, n);
  if (lo > hi) {
    r.detail = "vacuous: empty size range";
    return r;
  }
  Marker inS(n);
  std::optional<std::vector<Vertex>> bad;
  if (lo == 1 && subset_count(n, hi, options.exhaustive_cap) <= options.exhaustive_cap) {
    r.mode = CheckMode::Exhaustive;
    for_each_subset(n, hi, [&](const std::vector<Vertex>& S) {
      ++r.samples;
      if (!ok(S.size(), induced_edges(g, S, inS))) {
        bad = S;
        return false;
      }
      return true;
    });
  } else {
    r.mode = CheckMode::Sampled;
    const auto order = by_degree(g, false);
    const std::size_t seeds = std::min<std::size_t>(64, n);
    for (std::size_t s = 0; s < seeds && !bad; ++s) {
      ++r.samples;
      grow_dense(g, order[s], hi, inS, [&](const std::vector<Vertex>& S, std::size_t e) {
        if (S.size() >= lo && !ok(S.size(), e)) {
          bad = S;
          return true;
        }
        return false;
      });
    }
    for (std::size_t i = 0; i < options.samples && !bad; ++i) {
      CounterRng rng(stream_seed(options.seed, 0xc4, i));
      const std::size_t s = lo + static_cast<std::size_t>(rng.below(hi - lo + 1));
      auto S = random_subset(rng, n, s, inS);
      ++r.samples;
      if (!ok(S.size(), induced_edges(g, S, inS))) bad = std::move(S);
    }
  }
  if (bad) {
    std::sort(bad->begin(), bad->end());
    const auto e = induced_edges(g, *bad, inS);
    const std::string detail =
        "|S| = " + std::to_string(bad->size()) + ", e(S) = " + std::to_string(e);
    return fail_with(r, Witness{.kind = "set", .vertices = std::move(*bad)}, detail);
  }
  return r;
}

}  // namespace

std::vector<PredicateReport> check_c_properties(const BlockedGraph& graph,
                                                const CPropertyOptions& options) {
  const double n = static_cast<double>(graph.n());
  const double ln = std::log(n);
  const double small_set = n / (ln * ln);
  std::vector<PredicateReport> out;
  out.push_back(check_c1(graph));
  out.push_back(check_c2(graph, options.low_degree));
  out.push_back(check_c3(graph, options.low_degree));
  // (C4): |S| < n / log^2 n.
  const auto c4_hi = static_cast<std::size_t>(std::ceil(small_set)) - 1;
  out.push_back(check_density(
      graph, "C4", 1, c4_hi, [](std::size_t s, std::size_t e) { return e <= 3 * s; }, options));
  // (C5): n / log^2 n <= |S| <= delta n.
  const auto c5_lo = static_cast<std::size_t>(std::ceil(small_set));
  const auto c5_hi = static_cast<std::size_t>(std::floor(options.delta * n));
  const double eps_log = options.epsilon * ln;
  out.push_back(check_density(
      graph, "C5", c5_lo, c5_hi,
      [eps_log](std::size_t s, std::size_t e) {
        return static_cast<double>(e) < eps_log * static_cast<double>(s);
      },
      options));
  return out;
}

PredicateReport check_tpcl(const BlockedGraph& graph, const TpclOptions& options) {
  std::vector<PredicateReport> parts;
  const double ln = log_n(graph);
  const std::size_t n = graph.n();
  const auto& part = graph.partition();

  if (options.variant == TpclVariant::Case3) {
    PredicateReport t1{.predicate = "T1'", .mode = CheckMode::Sampled};
    for (std::size_t i = 0; i < part.k() && t1.holds; ++i) {
      std::vector<Vertex> vs(part.size(i));
      std::iota(vs.begin(), vs.end(), static_cast<Vertex>(part.offset(i)));
      const BlockedGraph hi = induced_subgraph(graph, vs);
      SexpnOptions so = options.sexpn;
      so.strong = true;
      so.expn.seed = stream_seed(options.sexpn.expn.seed, i);
      auto rep = check_sexpn(hi, so);
      t1.samples += rep.samples;
      if (!rep.holds) {
        // Back to global vertex numbers.
        auto w = *rep.witness;
        for (auto& v : w.vertices) v = vs[v];
        for (auto& v : w.context) v = vs[v];
        for (auto& e : w.edges) e = Edge(vs[e.u], vs[e.v]);
        t1 = fail_with(t1, std::move(w), "block " + std::to_string(i) + ": " + rep.detail);
      }
    }
    parts.push_back(std::move(t1));
  } else {
    auto t1 = check_sexpn(graph, options.sexpn);
    t1.predicate = "T1";
    parts.push_back(std::move(t1));
  }

  {
    PredicateReport t2{.predicate = "T2"};
    std::vector<Vertex> small;
    for (Vertex v = 0; v < n; ++v) {
      if (options.sexpn.budget.is_small(graph, v)) small.push_back(v);
    }
    if (static_cast<double>(small.size()) > std::pow(static_cast<double>(n), 0.4)) {
      t2 = fail_with(t2, Witness{.kind = "set", .vertices = std::move(small)});
    }
    parts.push_back(std::move(t2));
  }
  {
    PredicateReport t3{.predicate = "T3"};
    const double cap = ln / 200.0;
    for (Vertex v = 0; v < n && t3.holds; ++v) {
      if (options.p_sparse && static_cast<double>(graph.block_degree(v)) > cap) {
        t3 = fail_with(t3, Witness{.kind = "vertex", .vertices = {v}}, "block edges");
      } else if (options.q_sparse && static_cast<double>(graph.crossing_degree(v)) > cap) {
        t3 = fail_with(t3, Witness{.kind = "vertex", .vertices = {v}}, "crossing edges");
      }
    }
    if (!options.p_sparse && !options.q_sparse) t3.detail = "not applicable";
    parts.push_back(std::move(t3));
  }
  {
    PredicateReport t4{.predicate = "T4"};
    for (Vertex v = 0; v < n; ++v) {
      if (static_cast<double>(graph.degree(v)) > options.C * ln) {
        t4 = fail_with(t4, Witness{.kind = "vertex", .vertices = {v}});
        break;
      }
    }
    parts.push_back(std::move(t4));
  }
  if (options.variant == TpclVariant::Case2) {
    PredicateReport t5{.predicate = "T5"};
    std::vector<Vertex> few;
    for (Vertex v = 0; v < n; ++v) {
      if (graph.crossing_degree(v) < 2) few.push_back(v);
    }
    if (static_cast<double>(few.size()) >= ln) {
      t5 = fail_with(t5, Witness{.kind = "set", .vertices = std::move(few)});
    }
    parts.push_back(std::move(t5));
  }
  return conjunction("TPCL", parts);
}

namespace {

std::vector<std::vector<Edge>> incident(const BlockedGraph& g, const std::vector<Edge>& F) {
  std::vector<std::vector<Edge>> out(g.n());
  for (const auto& e : F) {
    out[e.u].push_back(e);
    out[e.v].push_back(e);
  }
  return out;
}

}  // namespace

std::vector<PredicateReport> check_col(const ExposedPair& pair, const RemovalBudget& budget) {
  const BlockedGraph& G = pair.final_graph;
  const BlockedGraph& Gb = pair.base;
  const auto F = edge_difference(G.edges(), Gb.edges());
  const auto at = incident(G, F);
  std::vector<PredicateReport> out;

  PredicateReport a{.predicate = "COL(a)"};
  for (Vertex v = 0; v < G.n(); ++v) {
    if (at[v].size() > budget.cap(G, v)) {
      a = fail_with(a, Witness{.kind = "vertex", .vertices = {v}, .edges = at[v]},
                    std::string(budget.is_small(G, v) ? "small" : "large") + " vertex " +
                        std::to_string(v) + " meets " + std::to_string(at[v].size()) +
                        " added edges");
      break;
    }
  }
  out.push_back(std::move(a));

  PredicateReport b{.predicate = "COL(b)"};
  if (G.n() > 20) {
    b.mode = CheckMode::Unknown;
    b.detail = "unknown: needs n <= 20";
  } else {
    const std::size_t n = G.n();
    const std::size_t lb = longest_path_exact(Gb);
    if (n >= 1 && lb + 1 < n) {
      const auto path = longest_path_exact_path(G);
      if (path.size() - 1 != lb) {
        b = fail_with(b, Witness{.kind = "path", .vertices = path},
                      "L(G) = " + std::to_string(path.size() - 1) + " > L(G') = " +
                          std::to_string(lb));
      }
    } else if (n >= 3) {
      if (auto cycle = held_karp_hamilton(G)) {
        b = fail_with(b, Witness{.kind = "cycle", .vertices = *cycle}, "G is Hamiltonian");
      }
    }
  }
  out.push_back(std::move(b));
  return out;
}

PredicateReport check_col1(const BlockedGraph& final_graph, const BlockedGraph& base) {
  PredicateReport r{.predicate = "COL1"};
  const auto F = edge_difference(final_graph.edges(), base.edges());
  const auto at = incident(final_graph, F);
  for (Vertex v = 0; v < final_graph.n(); ++v) {
    const std::size_t d = final_graph.degree(v);
    if (d >= 2 && at[v].size() + 2 > d) {
      return fail_with(r, Witness{.kind = "vertex", .vertices = {v}, .edges = at[v]},
                       "vertex " + std::to_string(v) + " keeps fewer than 2 base edges");
    }
  }
  return r;
}

PredicateReport conjunction(const std::string& name, const std::vector<PredicateReport>& parts) {
  PredicateReport r{.predicate = name};
  bool sampled = false;
  bool known = false;
  for (const auto& p : parts) {
    r.samples += p.samples;
    sampled = sampled || p.mode == CheckMode::Sampled;
    if (p.mode == CheckMode::Unknown) continue;
    known = true;
    if (!p.holds && r.holds) {
      r.holds = false;
      r.witness = p.witness;
      r.detail = p.predicate + (p.detail.empty() ? "" : ": " + p.detail);
    }
  }
  r.mode = sampled ? CheckMode::Sampled : (known ? CheckMode::Exhaustive : CheckMode::Unknown);
  return r;
}

}  // namespace blockham

#include <algorithm>
#include <cmath>
#include <numeric>

#include "blockham/rng.hpp"
#include "blockham/solver.hpp"

namespace blockham {

namespace {

constexpr std::int64_t kNone = -1;

// Union-find over required edges, to spot a required cycle as it closes.
class Components {
 public:
  explicit Components(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  std::size_t unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return size_[a];
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return size_[a];
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

// Outcome of degree-two propagation on the working graph (graph plus forced
// pairs): either a certificate, a finished cycle, or a contracted instance
// in which every maximal required path became one forced pair.
struct Reduction {
  enum class Kind { Open, Infeasible, Cycle } kind = Kind::Open;
  std::string reason;
  std::vector<Vertex> cycle;

  std::vector<Vertex> keep;                 // reduced index -> original vertex
  std::vector<std::vector<Vertex>> adj;     // reduced adjacency, forced overlay included
  std::vector<std::int64_t> partner;        // reduced forced pairs
  // Original internal vertices of each contracted pair, keyed by the pair's
  // first end (orig): chain from that end to the other.
  std::vector<std::vector<Vertex>> chain;   // indexed by reduced vertex, empty if none
};

bool connected(const std::vector<std::vector<Vertex>>& adj) {
  if (adj.empty()) return true;
  std::vector<bool> seen(adj.size(), false);
  std::vector<Vertex> stack{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const Vertex v = stack.back();
    stack.pop_back();
    for (Vertex w : adj[v]) {
      if (!seen[w]) {
        seen[w] = true;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  return reached == adj.size();
}

Reduction reduce(const BlockedGraph& graph, const ForcedEdgeSet& forced) {
  Reduction red;
  const std::size_t n = graph.n();
  auto fail = [&](std::string why) {
    red.kind = Reduction::Kind::Infeasible;
    red.reason = std::move(why);
    return red;
  };
  if (n < 3) return fail("fewer than 3 vertices");

  std::vector<std::vector<Vertex>> adj(n);
  for (Vertex v = 0; v < n; ++v) adj[v].assign(graph.neighbors(v).begin(), graph.neighbors(v).end());
  for (const auto& e : forced.pairs()) {
    if (!graph.has_edge(e.u, e.v)) {
      adj[e.u].push_back(e.v);
      adj[e.v].push_back(e.u);
    }
  }
  if (!connected(adj)) return fail("working graph is disconnected");

  std::vector<std::vector<Vertex>> req(n);
  Components comps(n);
  std::vector<Vertex> queue;
  std::vector<bool> queued(n, false);
  auto enqueue = [&](Vertex v) {
    if (!queued[v]) {
      queued[v] = true;
      queue.push_back(v);
    }
  };
  bool closed = false;
  auto is_required = [&](Vertex a, Vertex b) {
    return std::find(req[a].begin(), req[a].end(), b) != req[a].end();
  };
  // Returns false on a contradiction.
  auto require = [&](Vertex a, Vertex b) -> bool {
    if (is_required(a, b)) return true;
    if (req[a].size() >= 2 || req[b].size() >= 2) return false;
    if (comps.find(a) == comps.find(b)) {
      if (closed) return false;
      // Closing a required cycle: fine only if it is Hamiltonian.
      if (comps.unite(a, b) != n) return false;
      closed = true;
    } else {
      comps.unite(a, b);
    }
    req[a].push_back(b);
    req[b].push_back(a);
    enqueue(a);
    enqueue(b);
    return true;
  };
  auto drop_edge = [&](Vertex a, Vertex b) {
    adj[a].erase(std::find(adj[a].begin(), adj[a].end(), b));
    adj[b].erase(std::find(adj[b].begin(), adj[b].end(), a));
    enqueue(a);
    enqueue(b);
  };

  for (const auto& e : forced.pairs()) {
    if (!require(e.u, e.v)) return fail("forced pairs close a short cycle");
  }
  for (Vertex v = 0; v < n; ++v) enqueue(v);
  while (!queue.empty()) {
    const Vertex v = queue.back();
    queue.pop_back();
    queued[v] = false;
    if (adj[v].size() < 2) return fail("vertex " + std::to_string(v) + " has degree below 2");
    if (adj[v].size() == 2) {
      const Vertex a = adj[v][0];
      const Vertex b = adj[v][1];
      if (!require(v, a) || !require(v, b)) {
        return fail("degree-2 vertex " + std::to_string(v) + " cannot be threaded");
      }
    }
    if (req[v].size() == 2 && adj[v].size() > 2) {
      std::vector<Vertex> extra;
      for (Vertex w : adj[v]) {
        if (!is_required(v, w)) extra.push_back(w);
      }
      for (Vertex w : extra) drop_edge(v, w);
    }
  }

  if (closed) {
    red.kind = Reduction::Kind::Cycle;
    Vertex prev = 0;
    Vertex cur = 0;
    do {
      red.cycle.push_back(cur);
      const Vertex next = req[cur][0] == prev && red.cycle.size() > 1 ? req[cur][1] : req[cur][0];
      prev = cur;
      cur = next;
    } while (cur != 0);
    return red;
  }

  // Contract each required path with at least one internal vertex into a
  // forced pair between its ends.
  std::vector<std::int64_t> index(n, kNone);
  for (Vertex v = 0; v < n; ++v) {
    if (req[v].size() < 2) {
      index[v] = static_cast<std::int64_t>(red.keep.size());
      red.keep.push_back(v);
    }
  }
  const std::size_t m = red.keep.size();
  red.adj.assign(m, {});
  red.partner.assign(m, kNone);
  red.chain.assign(m, {});
  for (std::size_t r = 0; r < m; ++r) {
    const Vertex v = red.keep[r];
    for (Vertex w : adj[v]) {
      if (index[w] != kNone && !is_required(v, w)) {
        red.adj[r].push_back(static_cast<Vertex>(index[w]));
      }
    }
    if (req[v].size() == 1 && red.partner[r] == kNone) {
      std::vector<Vertex> inner;
      Vertex prev = v;
      Vertex cur = req[v][0];
      while (req[cur].size() == 2) {
        inner.push_back(cur);
        const Vertex next = req[cur][0] == prev ? req[cur][1] : req[cur][0];
        prev = cur;
        cur = next;
      }
      const auto other = static_cast<std::size_t>(index[cur]);
      red.partner[r] = static_cast<std::int64_t>(other);
      red.partner[other] = static_cast<std::int64_t>(r);
      red.chain[r] = inner;
      std::reverse(inner.begin(), inner.end());
      red.chain[other] = std::move(inner);
    }
  }
  for (std::size_t r = 0; r < m; ++r) {
    const auto y = red.partner[r];
    if (y != kNone) {
      auto& a = red.adj[r];
      if (std::find(a.begin(), a.end(), static_cast<Vertex>(y)) == a.end()) {
        a.push_back(static_cast<Vertex>(y));
      }
    }
  }
  if (m == 2) {
    // One required path covers everything; it closes through an edge of
    // the graph between its ends.
    const Vertex a = red.keep[0];
    const Vertex b = red.keep[1];
    if (red.partner[0] != 1 || !graph.has_edge(a, b)) {
      return fail("spanning required path cannot be closed");
    }
    red.kind = Reduction::Kind::Cycle;
    red.cycle.push_back(a);
    red.cycle.insert(red.cycle.end(), red.chain[0].begin(), red.chain[0].end());
    red.cycle.push_back(b);
    return red;
  }
  for (const auto& a : red.adj) {
    if (a.size() < 2) return fail("contraction leaves a vertex of degree below 2");
  }
  // A Hamilton cycle lives in what is left, so that must stay connected.
  if (!connected(red.adj)) return fail("edges that cannot lie on a Hamilton cycle disconnect the graph");
  return red;
}

enum class Goal { Extend, Cycle, None, Budget };

// Admissible rotation-extension search on a reduced instance. Forced pairs
// stay atomic: a pair enters the path together and no rotation or cycle
// opening removes it.
class Engine {
 public:
  Engine(const Reduction& red, std::uint64_t budget)
      : adj_(red.adj), partner_(red.partner), n_(red.adj.size()), budget_(budget),
        hidden_(n_, 0),
        pos_(n_, -1), stamp_{std::vector<std::uint32_t>(n_, 0), std::vector<std::uint32_t>(n_, 0)} {
    for (std::size_t v = 0; v < n_; ++v) hidden_[v] = red.chain[v].size();
  }

  std::uint64_t steps() const { return steps_; }
  std::size_t best() const { return best_; }
  const std::vector<Vertex>& path() const { return path_; }

  Goal attempt(CounterRng& rng) {
    for (auto& a : adj_) std::shuffle(a.begin(), a.end(), rng);
    for (Vertex v : path_) pos_[v] = -1;
    path_.clear();
    append(static_cast<Vertex>(rng.below(n_)));
    while (true) {
      extend_tail(rng);
      if (first_off(path_.front()) >= 0) {
        reverse_all();
        continue;
      }
      record_best();
      if (steps_ > budget_) return Goal::Budget;
      const Goal g = search(1);
      if (g != Goal::Extend) return g;
    }
  }

 private:
  void place(Vertex v) {
    pos_[v] = static_cast<std::int64_t>(path_.size());
    path_.push_back(v);
  }
  void append(Vertex v) {
    place(v);
    if (partner_[v] != kNone) place(static_cast<Vertex>(partner_[v]));
  }
  void reverse_range(std::size_t from) {
    std::reverse(path_.begin() + static_cast<std::ptrdiff_t>(from), path_.end());
    for (std::size_t i = from; i < path_.size(); ++i) pos_[path_[i]] = static_cast<std::int64_t>(i);
  }
  void reverse_all() { reverse_range(0); }

  // Length in the original graph: each contracted pair on the path hides
  // its chain (counted once from each end).
  void record_best() {
    std::size_t inner = 0;
    for (Vertex v : path_) inner += hidden_[v];
    best_ = std::max(best_, path_.size() - 1 + inner / 2);
  }

  std::int64_t first_off(Vertex x) const {
    for (Vertex w : adj_[x]) {
      if (pos_[w] < 0) return w;
    }
    return -1;
  }
  std::size_t off_degree(Vertex x) const {
    std::size_t c = 0;
    for (Vertex w : adj_[x]) c += pos_[w] < 0;
    return c;
  }

  // Greedy growth, preferring the candidate with the fewest remaining
  // options (ties broken at random).
  void extend_tail(CounterRng& rng) {
    while (true) {
      const Vertex x = path_.back();
      std::int64_t pick = -1;
      std::size_t best_deg = 0;
      std::uint64_t ties = 0;
      for (Vertex w : adj_[x]) {
        if (pos_[w] >= 0) continue;
        const Vertex end = partner_[w] != kNone ? static_cast<Vertex>(partner_[w]) : w;
        const std::size_t d = off_degree(end);
        if (pick < 0 || d < best_deg) {
          pick = w;
          best_deg = d;
          ties = 1;
        } else if (d == best_deg && rng.below(++ties) == 0) {
          pick = w;
        }
      }
      if (pick < 0) return;
      append(static_cast<Vertex>(pick));
      ++steps_;
    }
  }

  // Checks the state with the current path; may rewrite the path.
  Goal goal_at_tail() {
    const Vertex x = path_.back();
    if (first_off(x) >= 0) return Goal::Extend;
    const Vertex head = path_.front();
    if (path_.size() < 3 || std::find(adj_[x].begin(), adj_[x].end(), head) == adj_[x].end()) {
      return Goal::None;
    }
    if (partner_[x] == static_cast<std::int64_t>(head)) return Goal::None;
    if (path_.size() == n_) return Goal::Cycle;
    open_cycle();
    return Goal::Extend;
  }

  // The path closes into a cycle; reopen it at the first cycle vertex that
  // has a neighbor off the cycle, so that vertex becomes the tail.
  void open_cycle() {
    const std::size_t m = path_.size();
    std::size_t i = 0;
    while (i + 1 < m && first_off(path_[i]) < 0) ++i;
    const Vertex u = path_[i];
    const Vertex succ = path_[(i + 1) % m];
    std::vector<Vertex> next;
    next.reserve(m);
    if (partner_[u] != static_cast<std::int64_t>(succ)) {
      for (std::size_t s = 1; s <= m; ++s) next.push_back(path_[(i + s) % m]);
    } else {
      for (std::size_t s = 1; s <= m; ++s) next.push_back(path_[(i + m - s) % m]);
      // next now runs from the predecessor of u backwards round to u.
    }
    path_ = std::move(next);
    for (std::size_t j = 0; j < m; ++j) pos_[path_[j]] = static_cast<std::int64_t>(j);
  }

  struct Frame {
    std::size_t next = 0;
    std::int64_t pivot = -1;  // rotation to undo on pop
  };

  // Depth-first rotation closure with the head fixed, stopping at the first
  // goal. With depth 1, each end reached also gets a closure of its own
  // with that end fixed (the booster pairs of the path).
  Goal search(int depth) {
    const std::uint32_t epoch = ++epoch_[depth];
    auto& stamp = stamp_[depth];
    {
      const Goal g = goal_at_tail();
      if (g != Goal::None) return g;
    }
    stamp[path_.back()] = epoch;
    std::vector<Frame> stack{Frame{}};
    while (!stack.empty()) {
      Frame& f = stack.back();
      const Vertex x = path_.back();
      const std::size_t len = path_.size();
      if (f.next < adj_[x].size()) {
        const Vertex v = adj_[x][f.next++];
        const std::int64_t h = pos_[v];
        if (h < 0 || static_cast<std::size_t>(h) + 2 >= len) continue;
        const Vertex y = path_[h + 1];
        if (partner_[v] == static_cast<std::int64_t>(y) || stamp[y] == epoch) continue;
        stamp[y] = epoch;
        if (++steps_ > budget_) return Goal::Budget;
        reverse_range(static_cast<std::size_t>(h) + 1);
        const Goal g = goal_at_tail();
        if (g != Goal::None) return g;
        if (depth > 0) {
          reverse_all();
          const Goal inner = search(depth - 1);
          if (inner != Goal::None) return inner;
          reverse_all();
        }
        stack.push_back(Frame{0, h});
      } else {
        const std::int64_t h = f.pivot;
        stack.pop_back();
        if (h >= 0) reverse_range(static_cast<std::size_t>(h) + 1);
      }
    }
    if (depth > 0) {
      // The root's own fixed-tail closure.
      reverse_all();
      const Goal inner = search(depth - 1);
      if (inner != Goal::None) return inner;
      reverse_all();
    }
    return Goal::None;
  }

  std::vector<std::vector<Vertex>> adj_;
  std::vector<std::int64_t> partner_;
  std::size_t n_;
  std::uint64_t budget_;
  std::vector<std::size_t> hidden_;
  std::uint64_t steps_ = 0;
  std::size_t best_ = 0;
  std::vector<Vertex> path_;
  std::vector<std::int64_t> pos_;
  std::vector<std::uint32_t> stamp_[2];
  std::uint32_t epoch_[2] = {0, 0};
};

std::vector<Vertex> expand(const Reduction& red, const std::vector<Vertex>& reduced) {
  std::vector<Vertex> out;
  const std::size_t m = reduced.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Vertex a = reduced[i];
    const Vertex b = reduced[(i + 1) % m];
    out.push_back(red.keep[a]);
    if (red.partner[a] == static_cast<std::int64_t>(b)) {
      out.insert(out.end(), red.chain[a].begin(), red.chain[a].end());
    }
  }
  return out;
}

}  // namespace

PosaResult posa_solve(const BlockedGraph& graph, const ForcedEdgeSet& forced,
                      const PosaOptions& options) {
  PosaResult out;
  const Reduction red = reduce(graph, forced);
  if (red.kind == Reduction::Kind::Infeasible) {
    out.status = PosaStatus::Infeasible;
    out.reason = red.reason;
    return out;
  }
  if (red.kind == Reduction::Kind::Cycle) {
    out.best_length = graph.n() - 1;
    if (verify_cycle(graph, red.cycle, forced)) {
      out.status = PosaStatus::Found;
      out.cycle = red.cycle;
    } else {
      out.reason = "forced cycle failed verification";
    }
    return out;
  }

  const double n = static_cast<double>(graph.n());
  const std::uint64_t budget = options.step_budget > 0
                                   ? options.step_budget
                                   : static_cast<std::uint64_t>(50.0 * n * std::log(n)) + 1;
  const std::size_t attempts = std::max<std::size_t>(options.restarts, 1);
  for (std::size_t a = 0; a < attempts; ++a) {
    CounterRng rng(stream_seed(options.seed, a));
    Engine engine(red, budget);
    const Goal g = engine.attempt(rng);
    out.steps += engine.steps();
    out.restarts_used = a;
    out.best_length = std::max(out.best_length, engine.best());
    if (g == Goal::Cycle) {
      auto cycle = expand(red, engine.path());
      if (verify_cycle(graph, cycle, forced)) {
        out.status = PosaStatus::Found;
        out.cycle = std::move(cycle);
        out.best_length = graph.n() - 1;
        out.reason.clear();
        return out;
      }
      out.reason = "candidate cycle failed verification";
      continue;
    }
    out.reason = g == Goal::Budget ? "step budget exhausted" : "rotations stagnated";
  }
  return out;
}

}  // namespace blockham

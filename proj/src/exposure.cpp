#include "blockham/exposure.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "blockham/rng.hpp"

namespace blockham {

namespace {

void require_identity(double lhs, double rhs, const char* name) {
  if (std::abs(lhs - rhs) > 1e-12) {
    throw std::logic_error(std::string("coupling identity violated: ") + name);
  }
}

// Deletion probability x* with target * (1 - x*) = first_round.
double deletion_probability(double target, double bar, double first_round, bool closed_form) {
  if (target <= 0.0) return 0.0;
  if (closed_form) return bar * (1.0 - target) / ((1.0 - bar) * target);
  return 1.0 - first_round / target;
}

std::vector<std::pair<Edge, EdgeColor>> colorize(
    std::initializer_list<std::pair<const std::vector<Edge>*, EdgeColor>> layers) {
  std::vector<std::pair<Edge, EdgeColor>> out;
  for (const auto& [edges, color] : layers) {
    for (const auto& e : *edges) out.emplace_back(e, color);
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

std::vector<Edge> merge_edges(const std::vector<Edge>& a, const std::vector<Edge>& b) {
  std::vector<Edge> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

std::vector<Edge> ExposedPair::added() const {
  return edge_difference(final_graph.edges(), base.edges());
}

std::vector<Edge> ExposedPair::with_color(EdgeColor color) const {
  std::vector<Edge> out;
  for (const auto& [e, c] : colored) {
    if (c == color) out.push_back(e);
  }
  return out;
}

double sprinkle_probability(const BlockPartition& partition, double a) {
  const double n = static_cast<double>(partition.n());
  return a / (n * std::log(n));
}

double default_exposure_a(ExposureVariant variant, const BlockPartition& partition) {
  if (variant == ExposureVariant::ThreeStage) {
    return std::sqrt(std::log(static_cast<double>(partition.n())));
  }
  return 1.0;
}

ExposureSchedule schedule(ExposureVariant variant, const ModelParams& params, double a) {
  ExposureSchedule s = schedule_from_bar(variant, params, sprinkle_probability(params.partition, a));
  s.a = a;
  return s;
}

ExposureSchedule schedule_from_bar(ExposureVariant variant, const ModelParams& params,
                                   double bar) {
  if (!(bar >= 0.0 && bar < 1.0)) {
    throw InfeasibleScheduleError("sprinkling probability must lie in [0, 1)");
  }
  const double p = params.p;
  const double q = params.q;
  const double n = static_cast<double>(params.partition.n());
  ExposureSchedule s{.variant = variant, .params = params, .a = bar * n * std::log(n)};

  switch (variant) {
    case ExposureVariant::TwoStage:
      s.p_bar = bar;
      s.q_bar = bar;
      s.p1 = 1.0 - (1.0 - p) / (1.0 - bar);
      s.q1 = 1.0 - (1.0 - q) / (1.0 - bar);
      s.p_star = deletion_probability(p, bar, s.p1, true);
      s.q_star = deletion_probability(q, bar, s.q1, true);
      break;
    case ExposureVariant::ThreeStage:
      s.p_bar = 0.0;
      s.q_bar = bar;
      s.p1 = p;
      s.q1 = 1.0 - (1.0 - q) / ((1.0 - bar) * (1.0 - bar));
      s.p_star = 0.0;
      s.q_star = deletion_probability(q, bar, s.q1, false);
      break;
    case ExposureVariant::Case3:
      s.p_bar = bar;
      s.q_bar = 0.0;
      s.p1 = 1.0 - (1.0 - p) / (1.0 - bar);
      s.q1 = q;
      s.p_star = deletion_probability(p, bar, s.p1, true);
      s.q_star = 0.0;
      break;
  }
  // Rounding can leave -1e-17 at the p == bar boundary.
  if (s.p1 < 0.0 && s.p1 > -1e-15) s.p1 = 0.0;
  if (s.q1 < 0.0 && s.q1 > -1e-15) s.q1 = 0.0;
  if (s.p1 < 0.0) throw InfeasibleScheduleError("p is below the sprinkling probability");
  if (s.q1 < 0.0) throw InfeasibleScheduleError("q is below the sprinkling probability");

  require_identity(1.0 - (1.0 - s.p1) * (1.0 - s.p_bar), p, "block rounds");
  const double later = (1.0 - s.q_bar) * (variant == ExposureVariant::ThreeStage ? 1.0 - s.q_bar : 1.0);
  require_identity(1.0 - (1.0 - s.q1) * later, q, "crossing rounds");
  if (p > 0.0) require_identity(p * (1.0 - s.p_star), s.p1, "block deletion");
  if (q > 0.0) require_identity(q * (1.0 - s.q_star), s.q1, "crossing deletion");
  return s;
}

ExposedPair two_stage_generate(const ExposureSchedule& sched, std::uint64_t seed) {
  if (sched.variant == ExposureVariant::ThreeStage) {
    throw std::invalid_argument("two_stage_generate needs a TwoStage or Case3 schedule");
  }
  CounterRng rng(seed);
  const auto& part = sched.params.partition;
  BlockedGraph base = generate(ModelParams(part, sched.p1, sched.q1), rng);
  // Sprinkling over all pairs and keeping the new ones has the same law as
  // sprinkling over non-edges only.
  const BlockedGraph overlay = generate(ModelParams(part, sched.p_bar, sched.q_bar), rng);
  const auto red = edge_difference(overlay.edges(), base.edges());
  auto colored = colorize({{&base.edges(), EdgeColor::Blue}, {&red, EdgeColor::Red}});
  BlockedGraph final_graph(part, merge_edges(base.edges(), red));
  return ExposedPair{std::move(base), std::nullopt, std::move(final_graph), std::move(colored)};
}

ExposedPair three_stage_generate(const ExposureSchedule& sched, std::uint64_t seed) {
  if (sched.variant != ExposureVariant::ThreeStage) {
    throw std::invalid_argument("three_stage_generate needs a ThreeStage schedule");
  }
  CounterRng rng(seed);
  const auto& part = sched.params.partition;
  const BlockedGraph crossing_only = generate(ModelParams(part, 0.0, sched.q1), rng);

  std::vector<bool> low(part.n(), false);
  for (Vertex v = 0; v < part.n(); ++v) low[v] = crossing_only.degree(v) <= 1;

  std::vector<Edge> block_edges;
  for (Vertex u = 0; u < part.n(); ++u) {
    if (!low[u]) continue;
    const auto b = part.block_of(u);
    const auto first = static_cast<Vertex>(part.offset(b));
    const auto last = static_cast<Vertex>(part.offset(b) + part.size(b));
    for (Vertex v = first; v < last; ++v) {
      if (v == u || (low[v] && v < u)) continue;
      if (rng.bernoulli(sched.p1)) block_edges.emplace_back(u, v);
    }
  }
  std::sort(block_edges.begin(), block_edges.end());
  BlockedGraph base(part, merge_edges(crossing_only.edges(), block_edges));

  const BlockedGraph round2 = generate(ModelParams(part, 0.0, sched.q_bar), rng);
  const auto yellow = edge_difference(round2.edges(), base.edges());
  BlockedGraph middle(part, merge_edges(base.edges(), yellow));

  const BlockedGraph round3 = generate(ModelParams(part, 0.0, sched.q_bar), rng);
  const auto red = edge_difference(round3.edges(), middle.edges());
  BlockedGraph final_graph(part, merge_edges(middle.edges(), red));

  auto colored = colorize({{&base.edges(), EdgeColor::Blue},
                           {&yellow, EdgeColor::Yellow},
                           {&red, EdgeColor::Red}});
  return ExposedPair{std::move(base), std::move(middle), std::move(final_graph),
                     std::move(colored)};
}

ExposedPair reverse_two_stage(const BlockedGraph& final_graph, const ExposureSchedule& sched,
                              std::uint64_t seed) {
  CounterRng rng(seed);
  std::vector<Edge> kept;
  std::vector<Edge> deleted;
  for (const auto& e : final_graph.edges()) {
    const double drop = final_graph.is_block_edge(e) ? sched.p_star : sched.q_star;
    (rng.bernoulli(drop) ? deleted : kept).push_back(e);
  }
  auto colored = colorize({{&kept, EdgeColor::Blue}, {&deleted, EdgeColor::Red}});
  BlockedGraph base(final_graph.partition(), std::move(kept));
  return ExposedPair{std::move(base), std::nullopt, final_graph, std::move(colored)};
}

}  // namespace blockham

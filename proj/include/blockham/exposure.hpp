#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "blockham/graph.hpp"
#include "blockham/model.hpp"

namespace blockham {

// Multi-round exposure: the final graph is distributed as G(n, p, q) but is
// built as a base graph plus independently sprinkled later-round edges.
enum class ExposureVariant {
  TwoStage,    // base ~ G(n, p1, q1), then every non-edge w.p. p_bar
  ThreeStage,  // crossing-only base plus repaired low-degree vertices, then two
               // crossing rounds w.p. q_bar each
  Case3,       // base ~ G(n, p1, q), then block non-edges w.p. p_bar
};

enum class EdgeColor : std::uint8_t { Blue, Yellow, Red };

class InfeasibleScheduleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ExposureSchedule {
  ExposureVariant variant = ExposureVariant::TwoStage;
  ModelParams params;
  double a = 0.0;
  double p_bar = 0.0;  // block sprinkling probability per later round
  double q_bar = 0.0;  // crossing sprinkling probability per later round
  double p1 = 0.0;     // first-round block probability
  double q1 = 0.0;     // first-round crossing probability
  double p_star = 0.0; // reverse form: block deletion probability
  double q_star = 0.0; // reverse form: crossing deletion probability
};

struct ExposedPair {
  BlockedGraph base;
  std::optional<BlockedGraph> middle;
  BlockedGraph final_graph;
  /// Every edge of final_graph exactly once, sorted by edge.
  std::vector<std::pair<Edge, EdgeColor>> colored;

  /// E(final) \ E(base).
  std::vector<Edge> added() const;
  std::vector<Edge> with_color(EdgeColor color) const;
};

/// a / (n log n).
double sprinkle_probability(const BlockPartition& partition, double a);

/// Default a: 1 for TwoStage and Case3, sqrt(log n) for ThreeStage.
double default_exposure_a(ExposureVariant variant, const BlockPartition& partition);

/// Throws InfeasibleScheduleError when a first-round probability would be
/// negative (p < p_bar or q < q_bar).
ExposureSchedule schedule(ExposureVariant variant, const ModelParams& params, double a);
/// Same, with the per-round sprinkling probability given directly.
ExposureSchedule schedule_from_bar(ExposureVariant variant, const ModelParams& params,
                                   double bar);

/// TwoStage or Case3 schedule.
ExposedPair two_stage_generate(const ExposureSchedule& sched, std::uint64_t seed);
ExposedPair three_stage_generate(const ExposureSchedule& sched, std::uint64_t seed);
/// Thins final_graph: block edges deleted w.p. p_star, crossing w.p. q_star.
ExposedPair reverse_two_stage(const BlockedGraph& final_graph, const ExposureSchedule& sched,
                              std::uint64_t seed);

}  // namespace blockham

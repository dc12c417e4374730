#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "blockham/graph.hpp"
#include "blockham/solver.hpp"

namespace blockham {

class StitchPreconditionError : public std::runtime_error {
 public:
  StitchPreconditionError(Vertex v, const std::string& what)
      : std::runtime_error(what), vertex_(v) {}
  Vertex vertex() const noexcept { return vertex_; }

 private:
  Vertex vertex_;
};

class RetryExhaustedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Green 2-path a - center - b through a problematic vertex.
struct GreenPath {
  Vertex center = 0;
  Vertex a = 0;
  Vertex b = 0;
};

/// Interior vertices of supplanted paths, keyed by the replacing edge and
/// listed from key.u towards key.v.
using SupplantMap = std::map<Edge, std::vector<Vertex>>;

struct GreenCover {
  std::vector<Vertex> problematic;
  std::vector<GreenPath> green_paths;
  std::vector<Vertex> green_vertices;  // U_0
  std::vector<Edge> green_edges;       // E_0
  SupplantMap supplant_map;
  /// H on the original vertex numbering; problematic vertices are isolated
  /// and marked absent in in_h.
  BlockedGraph h{BlockPartition({1})};
  std::vector<bool> in_h;
  std::size_t resamples = 0;
};

struct ParityFix {
  enum class Status { Ok, Bottom };
  Status status = Status::Ok;
  std::vector<Edge> recolored;  // E
  std::vector<Vertex> ends;     // U
  std::size_t resamples = 0;
  std::string detail;
};

/// Induction preconditions. The required clauses are what the induction needs
/// to be well defined; the advisory ones only make success likely.
struct InductionAudit {
  bool required_ok = true;
  bool advisory_ok = true;
  std::vector<std::string> violations;
  std::vector<std::string> advisories;
};

struct StitchOptions {
  std::uint64_t seed = 0;
  PosaOptions posa;
  std::uint64_t backtrack_budget = 2000000;
  std::size_t exact_limit = 22;
  double size_factor = 4.0;  // |V(B)| <= size_factor * log n
  std::size_t max_retries = 100;
};

struct StitchResult {
  enum class Status { Found, Precondition, Bottom, AuditFailed, SolverFailed, VerifyFailed };
  Status status = Status::SolverFailed;
  std::optional<std::vector<Vertex>> cycle;
  std::vector<std::string> trace;
  std::string violation;
  std::int64_t failed_block = -1;
  InductionAudit audit;
};

const char* to_string(StitchResult::Status s);

/// Vertices with fewer than 2 block edges in base.
std::vector<Vertex> find_problematic(const BlockedGraph& base);

/// Graph with the interior of `path` deleted and its ends joined.
BlockedGraph supplant(const BlockedGraph& graph, const std::vector<Vertex>& path);
/// Replaces every supplanted edge of a closed walk by its path, recursively.
std::vector<Vertex> expand_cycle(const std::vector<Vertex>& cycle, const SupplantMap& map);

/// Requires final in D2 and COL1 (StitchPreconditionError otherwise). Draws
/// two base edges at each problematic vertex; draws whose 2-paths share a
/// vertex are redrawn, up to max_retries (RetryExhaustedError).
GreenCover build_green_cover(const BlockedGraph& final_graph, const BlockedGraph& base,
                             std::uint64_t seed, std::size_t max_retries = 100);

/// Recolours blue crossing edges so every block pair carries an even,
/// positive number of green edges.
ParityFix parity_fix(const GreenCover& cover, const BlockedGraph& base, std::uint64_t seed,
                     std::size_t max_retries = 100);

/// Audits B over the H-vertices of blocks [0, active_blocks).
InductionAudit audit_induction(const BlockedGraph& h, const std::vector<bool>& in_h,
                         const std::vector<Edge>& B, std::size_t active_blocks,
                         double size_factor);

/// Induction on k; the returned cycle (if any) passed verify_cycle against
/// final_graph and contains every green 2-path.
StitchResult stitch(const BlockedGraph& final_graph, const GreenCover& cover,
                    const ParityFix& fix, const StitchOptions& options);

/// D2 and COL1 check, cover, parity fix and stitch in one call.
StitchResult stitch_pipeline(const BlockedGraph& final_graph, const BlockedGraph& base,
                             const StitchOptions& options);

}  // namespace blockham

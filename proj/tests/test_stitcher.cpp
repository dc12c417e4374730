#include "doctest.h"

#include <cmath>
#include <random>

#include "blockham/exposure.hpp"
#include "blockham/harness.hpp"
#include "blockham/solver.hpp"
#include "blockham/stitcher.hpp"
#include "blockham/structure.hpp"
#include "oracles.hpp"

using namespace blockham;

namespace {

ExposedPair case3_pair(std::vector<std::size_t> sizes, double c, std::uint64_t seed) {
  const BlockPartition part(std::move(sizes));
  const auto [p, q] = regime_params(part, Regime::QSmall, c);
  const ModelParams params(part, p, q);
  const auto sched =
      schedule(ExposureVariant::Case3, params, default_exposure_a(ExposureVariant::Case3, part));
  return two_stage_generate(sched, seed);
}

// Sum over j != i of |B_ij|, for every block i.
std::vector<std::size_t> crossing_totals(const BlockPartition& part, const std::vector<Edge>& B) {
  std::vector<std::size_t> t(part.k(), 0);
  for (const auto& e : B) {
    const auto i = part.block_of(e.u), j = part.block_of(e.v);
    if (i != j) {
      ++t[i];
      ++t[j];
    }
  }
  return t;
}

}  // namespace

TEST_CASE("problematic vertices") {
  const ModelParams params(BlockPartition({6, 6}), 0.0, 0.6);
  const auto g = generate(params, 3);
  CHECK(find_problematic(g).size() == 12);
  CHECK(find_problematic(oracle::complete(4)).empty());
}

TEST_CASE("problematic census at Case-3 parameters") {
  const double bound = std::pow(std::log(400.0), 2);
  std::size_t ok = 0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    const auto pair = case3_pair({200, 200}, 2.0, s);
    ok += static_cast<double>(find_problematic(pair.base).size()) <= bound;
  }
  CHECK(ok >= 190);
}

TEST_CASE("a degree-2 problematic vertex forces both edges") {
  // Blocks {0..5}, {6..10}; K5 on 0..4 and on 6..10; vertex 5 joins 0 and 6,
  // and 1-7 closes the way back.
  std::vector<Edge> e{{0, 5}, {5, 6}, {1, 7}};
  for (Vertex u = 0; u < 5; ++u) {
    for (Vertex v = u + 1; v < 5; ++v) {
      e.emplace_back(u, v);
      e.emplace_back(u + 6, v + 6);
    }
  }
  const auto g = oracle::from_edges({6, 5}, e);
  const auto cover = build_green_cover(g, g, 1);
  REQUIRE(cover.problematic == std::vector<Vertex>{5});
  REQUIRE(cover.green_paths.size() == 1);
  CHECK(cover.green_paths[0].center == 5);
  CHECK(cover.green_paths[0].a == 0);
  CHECK(cover.green_paths[0].b == 6);
  CHECK(cover.green_edges == std::vector<Edge>{{0, 6}});
  CHECK_FALSE(cover.in_h[5]);
  CHECK(cover.h.degree(5) == 0);
  CHECK(cover.h.has_edge(0, 6));

  StitchOptions o;
  const auto res = stitch_pipeline(g, g, o);
  REQUIRE(res.status == StitchResult::Status::Found);
  CHECK(oracle::is_hamilton_cycle(oracle::adjacency(g), *res.cycle));
}

TEST_CASE("no problematic vertices leaves H = G") {
  const auto g = oracle::complete(10, {5, 5});
  const auto cover = build_green_cover(g, g, 2);
  CHECK(cover.problematic.empty());
  CHECK(cover.green_edges.empty());
  CHECK(cover.h == g);
}

TEST_CASE("preconditions are enforced") {
  const auto p = oracle::path(6);
  try {
    build_green_cover(p, p, 1);
    FAIL("expected StitchPreconditionError");
  } catch (const StitchPreconditionError& e) {
    CHECK(e.vertex() == 0);
  }
  StitchOptions o;
  CHECK(stitch_pipeline(p, p, o).status == StitchResult::Status::Precondition);
}

TEST_CASE("expand inverts supplant") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 6 + rng() % 15;
    auto g = oracle::cycle(n);
    std::vector<Edge> chords;
    for (int i = 0; i < 5; ++i) {
      const Vertex a = rng() % n, b = rng() % n;
      if (a != b) chords.emplace_back(a, b);
    }
    g = g.with_edges(chords);
    // Supplant the cycle segment start..start+len.
    const std::size_t start = rng() % n, len = 2 + rng() % (n - 3);
    std::vector<Vertex> seg;
    for (std::size_t i = 0; i <= len; ++i) seg.push_back(static_cast<Vertex>((start + i) % n));
    const auto h = supplant(g, seg);
    const Edge key(seg.front(), seg.back());
    CHECK(h.has_edge(key.u, key.v));
    for (std::size_t i = 1; i + 1 < seg.size(); ++i) CHECK(h.degree(seg[i]) == 0);

    std::vector<Vertex> inner(seg.begin() + 1, seg.end() - 1);
    if (key.u != seg.front()) std::reverse(inner.begin(), inner.end());
    SupplantMap map{{key, inner}};
    std::vector<Vertex> short_cycle{seg.back()};
    for (std::size_t i = len + 1; i < n; ++i) short_cycle.push_back(static_cast<Vertex>((start + i) % n));
    short_cycle.push_back(seg.front());
    // Walk the short cycle starting at a random offset and direction.
    std::rotate(short_cycle.begin(),
                short_cycle.begin() + static_cast<std::ptrdiff_t>(rng() % short_cycle.size()),
                short_cycle.end());
    if (rng() % 2) std::reverse(short_cycle.begin(), short_cycle.end());
    const auto full = expand_cycle(short_cycle, map);
    CHECK(oracle::is_hamilton_cycle(oracle::adjacency(oracle::cycle(n)), full));
  }
}

TEST_CASE("parity fix") {
  SUBCASE("one block needs nothing") {
    const auto g = oracle::complete(8);
    const auto cover = build_green_cover(g, g, 1);
    const auto fix = parity_fix(cover, g, 1);
    CHECK(fix.status == ParityFix::Status::Ok);
    CHECK(fix.recolored.empty());
  }
  SUBCASE("no green crossing edge recolours two") {
    auto g = oracle::complete(12, {6, 6});
    std::vector<Edge> keep;
    for (const auto& e : g.edges()) {
      if (g.is_block_edge(e) || (e.u < 3 && e.v >= 6 && e.v < 9)) keep.push_back(e);
    }
    g = oracle::from_edges({6, 6}, keep);
    const auto cover = build_green_cover(g, g, 1);
    const auto fix = parity_fix(cover, g, 1);
    REQUIRE(fix.status == ParityFix::Status::Ok);
    CHECK(fix.recolored.size() == 2);
    CHECK(fix.ends.size() == 4);
  }
  SUBCASE("one blue crossing edge is bottom") {
    auto g = oracle::complete(8, {4, 4});
    std::vector<Edge> keep;
    for (const auto& e : g.edges()) {
      if (g.is_block_edge(e) || e == Edge(0, 4)) keep.push_back(e);
    }
    g = oracle::from_edges({4, 4}, keep);
    const auto cover = build_green_cover(g, g, 1);
    CHECK(parity_fix(cover, g, 1).status == ParityFix::Status::Bottom);
  }
}

TEST_CASE("parity holds after the fix on random runs") {
  std::size_t checked = 0;
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const auto pair = case3_pair({30, 30, 30}, 2.0, s);
    GreenCover cover;
    try {
      cover = build_green_cover(pair.final_graph, pair.base, s);
    } catch (const std::exception&) {
      continue;
    }
    const auto fix = parity_fix(cover, pair.base, s);
    if (fix.status == ParityFix::Status::Bottom) continue;
    ++checked;
    std::vector<Edge> B = cover.green_edges;
    B.insert(B.end(), fix.recolored.begin(), fix.recolored.end());
    const auto& part = pair.base.partition();
    for (auto total : crossing_totals(part, B)) CHECK(total % 2 == 0);
    for (const auto& e : fix.recolored) {
      CHECK(pair.base.has_edge(e.u, e.v));
      CHECK_FALSE(part.same_block(e.u, e.v));
    }
    const auto audit = audit_induction(cover.h, cover.in_h, B, part.k(), 4.0);
    CHECK(audit.required_ok);
  }
  CHECK(checked > 100);
}

TEST_CASE("one block, no problematic vertices, exact cross-check") {
  std::size_t hamiltonian = 0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    const auto g = oracle::random_graph(8 + s % 7, 0.45, 300 + s);
    if (!check_d2(g).holds) continue;
    const bool truth = held_karp_hamilton(g).has_value();
    const auto res = stitch_pipeline(g, g, StitchOptions{});
    CHECK((res.status == StitchResult::Status::Found) == truth);
    if (res.cycle) CHECK(oracle::is_hamilton_cycle(oracle::adjacency(g), *res.cycle));
    hamiltonian += truth;
  }
  CHECK(hamiltonian > 20);
}

TEST_CASE("two 6-cycles joined by two crossing edges") {
  std::vector<Edge> e{{0, 6}, {1, 7}};
  for (Vertex v = 0; v < 6; ++v) {
    e.emplace_back(v, (v + 1) % 6);
    e.emplace_back(v + 6, (v + 1) % 6 + 6);
  }
  const auto g = oracle::from_edges({6, 6}, e);
  const auto all = oracle::all_hamilton_cycles(g);
  REQUIRE(all.size() == 1);
  const auto res = stitch_pipeline(g, g, StitchOptions{});
  REQUIRE(res.status == StitchResult::Status::Found);
  std::vector<Edge> got;
  for (std::size_t i = 0; i < res.cycle->size(); ++i) {
    got.emplace_back((*res.cycle)[i], (*res.cycle)[(i + 1) % res.cycle->size()]);
  }
  std::sort(got.begin(), got.end());
  CHECK(got == *all.begin());
  CHECK(res.trace.size() == 2);
}

TEST_CASE("returned cycles always verify") {
  std::size_t found = 0;
  for (std::uint64_t s = 0; s < 40; ++s) {
    const auto pair = case3_pair({100, 100}, 2.0, s);
    StitchOptions o;
    o.seed = s;
    const auto res = stitch_pipeline(pair.final_graph, pair.base, o);
    if (!res.cycle) continue;
    ++found;
    CHECK(res.status == StitchResult::Status::Found);
    CHECK(verify_cycle(pair.final_graph, *res.cycle));
    CHECK(oracle::is_hamilton_cycle(oracle::adjacency(pair.final_graph), *res.cycle));
  }
  CHECK(found > 10);
}

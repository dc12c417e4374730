#include "doctest.h"

#include <cmath>
#include <sstream>

#include "blockham/edge_list.hpp"
#include "blockham/graph.hpp"
#include "blockham/model.hpp"
#include "blockham/rng.hpp"
#include "oracles.hpp"

using namespace blockham;

TEST_CASE("stream seeds are deterministic and distinct") {
  CHECK(stream_seed(7, 3) == stream_seed(7, 3));
  CHECK(stream_seed(7, 3) != stream_seed(7, 4));
  CHECK(stream_seed(7, 1, 2) != stream_seed(7, 2, 1));
  CounterRng a(11), b(11);
  for (int i = 0; i < 100; ++i) CHECK(a() == b());
}

TEST_CASE("uniform and below stay in range") {
  CounterRng rng(5);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
    REQUIRE(rng.below(7) < 7);
    REQUIRE(rng.uniform_pos() > 0.0);
  }
  // Mean 1/2, sd of the mean sqrt(1/12/1e5).
  CHECK(std::abs(sum / 100000 - 0.5) < 4 * std::sqrt(1.0 / 12 / 100000));
}

TEST_CASE("geometric skip has mean (1-p)/p") {
  for (double p : {0.01, 0.2, 0.7}) {
    CounterRng rng(99);
    const int reps = 200000;
    double sum = 0.0;
    for (int i = 0; i < reps; ++i) sum += static_cast<double>(geometric_skip(rng, std::log1p(-p)));
    const double mean = (1 - p) / p;
    const double sd = std::sqrt(1 - p) / p / std::sqrt(reps);
    CHECK(std::abs(sum / reps - mean) < 4 * sd);
  }
}

TEST_CASE("edges are normalized and graphs deduplicate") {
  const Edge e(5, 2);
  CHECK(e.u == 2);
  CHECK(e.v == 5);
  const auto g = oracle::from_edges({3, 2}, {{0, 1}, {1, 0}, {4, 2}, {2, 3}});
  CHECK(g.edge_count() == 3);
  CHECK(g.has_edge(1, 0));
  CHECK(g.has_edge(2, 4));
  CHECK_FALSE(g.has_edge(0, 4));
  CHECK(g.block_degree(2) == 0);
  CHECK(g.crossing_degree(2) == 2);
  CHECK(g.partition().block_of(4) == 1);
  CHECK_THROWS_AS(oracle::from_edges({3}, {{1, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(oracle::from_edges({3}, {{1, 3}}), std::invalid_argument);
  CHECK_THROWS_AS(BlockPartition({}), std::invalid_argument);
  CHECK_THROWS_AS(BlockPartition({2, 0}), std::invalid_argument);
}

TEST_CASE("neighbour lists and bitset rows agree with the edge list") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto g = oracle::random_graph(40, 0.15, s, {15, 25});
    const auto a = oracle::adjacency(g);
    for (Vertex v = 0; v < g.n(); ++v) {
      CHECK(g.degree(v) == oracle::degree(g, v));
      for (Vertex w : g.neighbors(v)) CHECK(a[v][w]);
      for (Vertex w = 0; w < g.n(); ++w) {
        const bool bit = (g.row(v)[w / 64] >> (w % 64)) & 1;
        CHECK(bit == static_cast<bool>(a[v][w]));
        CHECK(g.has_edge(v, w) == static_cast<bool>(a[v][w]));
      }
    }
  }
}

TEST_CASE("with_edges, without_edges and edge set helpers") {
  const auto g = oracle::cycle(6);
  const std::vector<Edge> chord{{0, 3}};
  const auto h = g.with_edges(chord);
  CHECK(h.edge_count() == 7);
  CHECK(h.without_edges(chord) == g);
  CHECK(edge_difference(h.edges(), g.edges()) == chord);
  CHECK(edge_subset(g.edges(), h.edges()));
  CHECK_FALSE(edge_subset(h.edges(), g.edges()));
}

TEST_CASE("induced subgraph relabels in list order") {
  const auto g = oracle::complete(5);
  const auto h = induced_subgraph(g, {4, 1, 2});
  CHECK(h.n() == 3);
  CHECK(h.edge_count() == 3);
  const auto p = oracle::path(5);
  const auto q = induced_subgraph(p, {3, 0, 4});
  CHECK(q.edge_count() == 1);
  CHECK(q.has_edge(0, 2));
  CHECK_THROWS(induced_subgraph(g, {}));
}

TEST_CASE("edge list round trips") {
  const auto k4 = oracle::complete(4, {2, 2});
  CHECK(deserialize(serialize(k4)) == k4);
  const BlockedGraph empty(BlockPartition({3, 1}));
  CHECK(deserialize(serialize(empty)) == empty);
  for (std::uint64_t s = 0; s < 100; ++s) {
    const ModelParams params(BlockPartition({20, 30}), 0.1, 0.05);
    const auto g = generate(params, s);
    CHECK(deserialize(serialize(g)) == g);
  }
}

TEST_CASE("edge list parse errors carry the line") {
  const std::string bad = "blockham v1 k=1 sizes=4\n0 1\n2 9\n";
  try {
    deserialize(bad);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(deserialize("nonsense\n"), ParseError);
  std::istringstream pairs("# forced\n0 3\n4 2\n");
  const auto list = read_pair_list(pairs);
  REQUIRE(list.size() == 2);
  CHECK(list[1] == Edge(2, 4));
}

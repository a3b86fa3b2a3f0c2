#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "qg/generators.hpp"
#include "qg/geodesics.hpp"

using namespace qg;

TEST_CASE("vertex distances on small families") {
  auto p = distance_field(path_graph(3));
  CHECK(p.vertex_dist == std::vector<double>{0, 1, 2, 3});
  for (const auto& e : p.edges) CHECK(e.kind == EdgeCase::Rising);

  auto s = distance_field(star_graph(3));
  for (std::size_t v = 1; v <= 3; ++v) CHECK(s.vertex(v) == 1.0);

  auto g = parallel_chain(1);
  auto df = distance_field(g);
  CHECK(df.vertex(1) == 1.0);
  CHECK(df.edge(0).kind == EdgeCase::Rising);
  CHECK(df.edge(1).kind == EdgeCase::Peak);
  CHECK(df.edge(1).q == 2.0);
}

TEST_CASE("point distance") {
  auto g = path_graph(2);
  auto df = distance_field(g);
  CHECK(point_distance(g, df, interior_point(g, 0, 0.25)) == 0.25);
  CHECK(point_distance(g, df, VertexPoint{2}) == 2.0);
  CHECK_THROWS(point_distance(g, df, EdgePoint{0, 1.0}));

  auto pg = parallel_chain(1);
  auto pdf = distance_field(pg);
  CHECK(point_distance(pg, pdf, EdgePoint{1, 2.0}) == 2.0);
  CHECK(point_distance(pg, pdf, EdgePoint{1, 2.5}) == 1.5);
}

TEST_CASE("disconnected graph is an error") {
  auto g = MetricGraph::Builder().vertex("a").vertex("b").vertex("c").edge("e", "a", "b").base("a").build();
  CHECK_THROWS_AS(vertex_distances(g), std::runtime_error);
}

TEST_CASE("ties are monotone, not peaks") {
  // Triangle a-b-c with lengths making b->c exactly tight.
  auto g = MetricGraph::Builder()
               .vertex("a").vertex("b").vertex("c")
               .edge("ab", "a", "b", 1.0)
               .edge("ac", "a", "c", 3.0)
               .edge("bc", "b", "c", 2.0)
               .base("a")
               .build();
  auto df = distance_field(g);
  CHECK(df.vertex(2) == 3.0);
  CHECK(df.edge(1).kind == EdgeCase::Rising);
  CHECK(df.edge(2).kind == EdgeCase::Rising);
}

TEST_CASE("Dijkstra agrees with exhaustive simple paths") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 2 + trial % 5;
    auto g = oracle::random_graph(rng, n, trial % 6);
    auto df = distance_field(g);
    auto ref = oracle::simple_path_distances(g);
    for (std::size_t v = 0; v < n; ++v) CHECK(df.vertex(v) == ref[v]);
  }
}

TEST_CASE("edge structure: peak equation, Lipschitz, slopes") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    auto g = oracle::random_graph(rng, 3 + trial % 4, 3);
    auto df = distance_field(g);
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
      const auto& p = df.edge(e);
      CHECK(std::abs(p.d_j - p.d_i) <= p.length + 1e-12);
      if (p.kind == EdgeCase::Peak) {
        CHECK(p.q > 0.0);
        CHECK(p.q < p.length);
        CHECK(std::abs((p.d_i + p.q) - (p.d_j + p.length - p.q)) <= 1e-12);
        const double h = 1e-6;
        if (p.q > 2 * h && p.q < p.length - 2 * h) {
          CHECK(std::abs((p.at(p.q) - p.at(p.q - h)) / h - 1.0) <= 1e-4);
          CHECK(std::abs((p.at(p.q + h) - p.at(p.q)) / h + 1.0) <= 1e-4);
        }
      }
      for (int k = 0; k < 20; ++k) {
        double a = u(rng) * p.length, b = u(rng) * p.length;
        CHECK(std::abs(p.at(a) - p.at(b)) <= std::abs(a - b) + 1e-12);
      }
    }
  }
}

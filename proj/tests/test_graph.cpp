#include <cmath>

#include "doctest.h"
#include "qg/generators.hpp"
#include "qg/geodesics.hpp"
#include "qg/graph.hpp"

using namespace qg;

TEST_CASE("parse a two-vertex graph") {
  auto g = build_graph(
      "# a single edge\n"
      "vertex a mu=1\n"
      "vertex b mu=2.5\n"
      "edge e a b length=1 omega=1   # trailing comment\n"
      "base a\n");
  CHECK(g.num_vertices() == 2);
  CHECK(g.num_edges() == 1);
  CHECK(g.vertex(1).mu == 2.5);
  auto h = validate_hypotheses(g);
  CHECK(h.j_sup == 1.0);
  CHECK(h.r_inf == 1.0);
  CHECK(h.connected);
}

TEST_CASE("parse errors") {
  SUBCASE("unknown vertex is named") {
    try {
      build_graph("vertex a mu=1\nedge e a z length=1 omega=1\nbase a\n");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("'z'") != std::string::npos);
      CHECK(e.line() == 2);
    }
  }
  CHECK_THROWS_AS(build_graph("vertex a mu=1\nvertex a mu=1\nbase a\n"), ParseError);
  CHECK_THROWS_AS(build_graph("vertex a mu=0\nbase a\n"), ParseError);
  CHECK_THROWS_AS(build_graph("vertex a mu=1\nvertex b mu=1\nedge e a b length=-1 omega=1\nbase a\n"),
                  ParseError);
  CHECK_THROWS_AS(build_graph("vertex a mu=1\nvertex b mu=1\nedge e a b length=1 omega=0\nbase a\n"),
                  ParseError);
  CHECK_THROWS_AS(build_graph("vertex a mu=1\nedge e a a length=1 omega=1\nbase a\n"), ParseError);
  CHECK_THROWS_AS(build_graph("vertex a\nbase a\n"), ParseError);
  CHECK_THROWS_AS(build_graph("vertex a mu=1\n"), ParseError);
  CHECK_THROWS_AS(build_graph("vertex a mu=1\nbase q\n"), ParseError);
  CHECK_THROWS_AS(build_graph("vertx a mu=1\nbase a\n"), ParseError);
  CHECK_THROWS_AS(build_graph("vertex a mu=1x\nbase a\n"), ParseError);
}

TEST_CASE("builder rejects loops and duplicate edges") {
  CHECK_THROWS(MetricGraph::Builder().vertex("a").edge("e", "a", "a").base("a").build());
  CHECK_THROWS(
      MetricGraph::Builder().vertex("a").vertex("b").edge("e", "a", "b").edge("e", "b", "a").base("a").build());
}

TEST_CASE("round trip through the text format") {
  for (const auto& g : {path_graph(4), star_graph(5, 0.75), tree_graph(3, 3), parallel_chain(1),
                        parallel_chain(3, {1.0, 2.5, 0.1}), ladder_graph(4, 1.0 / 3.0)}) {
    auto h = build_graph(to_spec_text(g));
    CHECK(h == g);
  }
}

TEST_CASE("generators") {
  auto p = path_graph(7);
  CHECK(p.num_vertices() == 8);
  CHECK(p.num_edges() == 7);
  auto t = tree_graph(2, 4);
  CHECK(t.num_vertices() == 31);
  CHECK(t.num_edges() == 30);
  auto pc = parallel_chain(1);
  CHECK(pc.num_vertices() == 2);
  CHECK(pc.num_edges() == 2);
  auto l = ladder_graph(3);
  CHECK(l.num_vertices() == 8);
  CHECK(l.num_edges() == 10);
  for (const auto& g : {p, t, pc, l}) CHECK(validate_hypotheses(g).ok());
}

TEST_CASE("family truncation covers the requested radius") {
  for (auto name : {"path", "tree:2", "star:3", "parallel", "ladder", "path:0.5"}) {
    Family f = parse_family(name);
    for (double R : {0.5, 2.0, 3.7}) {
      auto g = f.truncate(R);
      auto df = distance_field(g);
      double far = 0.0;
      for (double d : df.vertex_dist) far = std::max(far, d);
      CHECK(far >= R);
    }
  }
  CHECK_THROWS(parse_family("moebius"));
}

TEST_CASE("hypothesis report") {
  auto h = validate_hypotheses(path_graph(3));
  CHECK(h.connected);
  CHECK(h.j_sup == 1.0);
  CHECK(h.r_inf == 1.0);
  CHECK(h.R0 == 2.0);
  CHECK(validate_hypotheses(star_graph(4)).weight_ratio_sup == 4.0);
  CHECK(validate_hypotheses(path_graph(2, 0.25)).R0 == 1.0);

  auto d = MetricGraph::Builder().vertex("a").vertex("b").vertex("c").edge("e", "a", "b").base("a").build();
  CHECK_FALSE(validate_hypotheses(d).connected);
}

TEST_CASE("interior points") {
  auto g = path_graph(2);
  CHECK_NOTHROW(interior_point(g, 0, 0.5));
  CHECK_THROWS(interior_point(g, 0, 0.0));
  CHECK_THROWS(interior_point(g, 0, 1.0));
  CHECK_THROWS(interior_point(g, 0, -0.1));
}

TEST_CASE("ball and annulus on a path") {
  auto g = path_graph(5);
  auto df = distance_field(g);
  auto ba = ball_and_annulus(g, df, 2.5);
  CHECK(ba.ball.vertices == std::vector<std::size_t>{0, 1, 2});
  REQUIRE(ba.ball.intervals.size() == 3);
  CHECK(ba.ball.intervals[2].edge == 2);
  CHECK(ba.ball.intervals[2].lo == 0.0);
  CHECK(ba.ball.intervals[2].hi == doctest::Approx(0.5));
  CHECK(ba.annulus.vertices == std::vector<std::size_t>{3, 4, 5});
  CHECK(ba.annulus.edge_measure() == doctest::Approx(2.5));

  auto whole = ball_and_annulus(g, df, 100.0);
  CHECK(whole.ball.vertices.size() == 6);
  CHECK(whole.annulus.vertices.empty());
  CHECK(whole.annulus.intervals.empty());
  CHECK_THROWS(ball_and_annulus(g, df, 0.0));
}

TEST_CASE("annulus splits at the peak of the long parallel edge") {
  auto g = parallel_chain(1);
  auto df = distance_field(g);
  auto ba = ball_and_annulus(g, df, 1.5);
  std::vector<EdgeInterval> on_long;
  for (const auto& iv : ba.annulus.intervals)
    if (iv.edge == 1) on_long.push_back(iv);
  REQUIRE(on_long.size() == 2);
  CHECK(on_long[0].lo == doctest::Approx(1.5));
  CHECK(on_long[0].hi == doctest::Approx(2.0));
  CHECK(on_long[1].lo == doctest::Approx(2.0));
  CHECK(on_long[1].hi == doctest::Approx(2.5));
}

TEST_CASE("ball partition and annulus endpoints") {
  for (const auto& g : {path_graph(6), tree_graph(2, 4), parallel_chain(3), ladder_graph(4, 0.7),
                        parallel_chain(2, {0.3, 1.1, 2.0})}) {
    auto df = distance_field(g);
    for (double R : {0.3, 0.9, 1.5, 2.0, 3.3}) {
      auto ba = ball_and_annulus(g, df, R);
      auto outside = level_set(g, df, R, 1e300);
      for (std::size_t e = 0; e < g.num_edges(); ++e) {
        double in = 0.0, out = 0.0;
        for (const auto& iv : ba.ball.intervals)
          if (iv.edge == e) in += iv.hi - iv.lo;
        for (const auto& iv : outside.intervals)
          if (iv.edge == e) out += iv.hi - iv.lo;
        CHECK(std::abs(in + out - g.edge(e).length) <= 1e-12);
      }
      for (const auto& iv : ba.annulus.intervals)
        for (double x : {iv.lo, iv.hi}) {
          double d = df.edge(iv.edge).at(x);
          CHECK(d >= R - 1e-9);
          CHECK(d <= 2 * R + 1e-9);
        }
    }
  }
}

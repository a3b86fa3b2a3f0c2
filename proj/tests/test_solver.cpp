#include <cmath>
#include <numbers>

#include "doctest.h"
#include "qg/generators.hpp"
#include "qg/solver.hpp"

using namespace qg;

namespace {

constexpr double kPi = std::numbers::pi;

// eps sin(pi x / l) on a single edge.
GraphFunction sine_bump(const MetricGraph& g, double eps) {
  const double l = g.edge(0).length, k = kPi / l;
  return GraphFunction::from_edges(
      g, {{[=](double x) {
             return Jet{eps * std::sin(k * x), eps * k * std::cos(k * x), -eps * k * k * std::sin(k * x)};
           },
           2}});
}

// eps cos(pi t / 2L) along the whole path, t the distance from v0.
GraphFunction path_cosine(const MetricGraph& g, double eps) {
  const double L = double(g.num_edges()), k = kPi / (2 * L);
  std::vector<EdgeFunction> ef;
  for (std::size_t e = 0; e < g.num_edges(); ++e)
    ef.push_back({[=](double x) {
                    const double t = double(e) + x;
                    return Jet{eps * std::cos(k * t), -eps * k * std::sin(k * t), -eps * k * k * std::cos(k * t)};
                  },
                  2});
  return GraphFunction::from_edges(g, ef);
}

// Shooting oracle for u'' = -u^2, u'(0) = 0, u(1) = eps on [0,1]: returns u(0).
double shoot(double eps) {
  auto end_value = [](double a) {
    const int n = 20000;
    const double h = 1.0 / n;
    double u = a, p = 0.0;
    for (int i = 0; i < n; ++i) {
      auto f = [](double uu) { return -uu * uu; };
      const double k1u = p, k1p = f(u);
      const double k2u = p + 0.5 * h * k1p, k2p = f(u + 0.5 * h * k1u);
      const double k3u = p + 0.5 * h * k2p, k3p = f(u + 0.5 * h * k2u);
      const double k4u = p + h * k3p, k4p = f(u + h * k3u);
      u += h / 6 * (k1u + 2 * k2u + 2 * k3u + k4u);
      p += h / 6 * (k1p + 2 * k2p + 2 * k3p + k4p);
    }
    return u;
  };
  double lo = eps, hi = 2 * eps;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (end_value(mid) < eps ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("mesh counts") {
  CHECK(discretize(path_graph(2), 8).size() == 19);
  auto one = discretize(path_graph(1, 3.4), 16);
  CHECK(one.h[0] == doctest::Approx(3.4 / 17).epsilon(1e-15));
  CHECK(one.size() == 18);
  CHECK(discretize(star_graph(3), 8).size() == 28);
  CHECK_THROWS_AS(discretize(path_graph(2), 7), std::invalid_argument);

  auto g = tree_graph(2, 3);
  auto m = discretize(g, 9);
  std::vector<int> seen(m.size(), 0);
  for (std::size_t v = 0; v < g.num_vertices(); ++v) seen[v]++;
  for (std::size_t e = 0; e < g.num_edges(); ++e)
    for (std::size_t k = 0; k < m.nodes[e]; ++k) {
      seen[m.node(e, k)]++;
      CHECK(m.coord(e, k) > 0.0);
      CHECK(m.coord(e, k) < g.edge(e).length);
    }
  for (int s : seen) CHECK(s == 1);
}

TEST_CASE("supersolution certificates") {
  auto g = star_graph(3);
  auto mesh = discretize(g, 8);
  auto V = GraphFunction::constant(g, 1.0);

  auto zero = check_supersolution(g, mesh, V, 2.5, GraphFunction::constant(g, 0.0), 0.0);
  CHECK(zero.edge_residual == 0.0);
  CHECK(zero.vertex_residual == 0.0);
  CHECK(zero.kirchhoff == 0.0);
  CHECK(zero.supersolution());

  auto c = check_supersolution(g, mesh, V, 2.0, GraphFunction::constant(g, 0.3), 1e-12);
  CHECK(c.edge_residual == doctest::Approx(0.09).epsilon(1e-12));
  CHECK(c.vertex_residual == doctest::Approx(0.09).epsilon(1e-12));
  CHECK_FALSE(c.supersolution());
  CHECK(c.verdict() == "FAIL");
}

TEST_CASE("sine certificate flips at eps = (pi/l)^2") {
  const double l = 2.0;
  auto g = path_graph(1, l);
  auto mesh = discretize(g, 9);  // node 4 sits at the midpoint
  auto V = GraphFunction::constant(g, 1.0);
  const double crit = (kPi / l) * (kPi / l);
  const std::vector<std::size_t> caps{0, 1};
  auto below = check_supersolution(g, mesh, V, 2.0, sine_bump(g, crit * (1 - 1e-6)), 0.0, caps);
  auto above = check_supersolution(g, mesh, V, 2.0, sine_bump(g, crit * (1 + 1e-6)), 0.0, caps);
  CHECK(below.supersolution());
  CHECK_FALSE(above.supersolution());
  CHECK(above.edge_ok == false);
  CHECK(below.vertices_checked == 0);

  // Residual equals -eps (pi/l)^2 sin + eps^2 sin^2 at every node.
  const double eps = 0.7;
  auto r = check_supersolution(g, mesh, V, 2.0, sine_bump(g, eps), 0.0, caps);
  double expect = -1e300;
  for (std::size_t k = 0; k < 9; ++k) {
    const double s = std::sin(kPi * mesh.coord(0, k) / l);
    expect = std::max(expect, -eps * crit * s + eps * eps * s * s);
  }
  CHECK(r.edge_residual == doctest::Approx(expect).epsilon(1e-12));

  // Without caps the Dirichlet ends violate Kirchhoff.
  auto open = check_supersolution(g, mesh, V, 2.0, sine_bump(g, 0.5), 1e-8);
  CHECK_FALSE(open.kirchhoff_ok);
  CHECK(open.kirchhoff == doctest::Approx(0.5 * kPi / l).epsilon(1e-9));
}

TEST_CASE("ball truncation") {
  auto g = path_graph(10);
  auto b = truncate_ball(g, distance_field(g), 3.5);
  CHECK(b.graph.num_vertices() == 5);  // v0..v3 and one cut point
  CHECK(b.graph.num_edges() == 4);
  CHECK(b.graph.edge(3).length == doctest::Approx(0.5));
  CHECK(b.dirichlet.back());
  CHECK_FALSE(b.dirichlet[0]);

  auto exact = truncate_ball(g, distance_field(g), 3.0);
  CHECK(exact.graph.num_vertices() == 4);
  CHECK(exact.dirichlet[3]);

  // Peak edge of length 3 between distances 0 and 1 splits into two pieces.
  auto p = parallel_chain(1);
  auto pb = truncate_ball(p, distance_field(p), 1.5);
  CHECK(pb.graph.num_edges() == 3);
  int cuts = 0;
  for (std::size_t v = 0; v < pb.graph.num_vertices(); ++v) cuts += pb.parent_vertex[v] == BallDomain::npos;
  CHECK(cuts == 2);
  double total = 0;
  for (const auto& e : pb.graph.edges()) total += e.length;
  CHECK(total == doctest::Approx(1.0 + 1.5 + 0.5));
}

TEST_CASE("solve with zero data is exactly zero") {
  auto g = tree_graph(2, 4);
  auto r = solve_truncated(g, 3.0, GraphFunction::constant(g, 1.0), 2.0, 0.0, 8);
  CHECK(r.converged);
  CHECK(r.iterations == 0);
  for (double v : r.values) CHECK(v == 0.0);
}

TEST_CASE("single edge with small data: minimum principle and concavity") {
  auto g = path_graph(1);
  const double eps = 0.1;
  auto r = solve_truncated(g, 1.0, GraphFunction::constant(g, 1.0), 2.0, eps, 63);
  REQUIRE(r.converged);
  CHECK(r.residual <= 1e-10);
  const auto& G = r.domain.graph;
  std::vector<double> line;
  for (std::size_t k = 0; k <= r.mesh.nodes[0] + 1; ++k) line.push_back(r.values[r.mesh.along(G, 0, k)]);
  for (double u : line) CHECK(u >= eps - 1e-12);
  for (std::size_t k = 1; k + 1 < line.size(); ++k) CHECK(line[k - 1] - 2 * line[k] + line[k + 1] <= 0.0);
  CHECK(line.front() == doctest::Approx(shoot(eps)).epsilon(1e-5));
}

TEST_CASE("solver input errors and failure reports") {
  auto g = path_graph(4);
  auto V = GraphFunction::constant(g, 1.0);
  CHECK_THROWS_AS(solve_truncated(g, 2.0, V, 2.0, -1.0, 8), std::invalid_argument);
  CHECK_THROWS_AS(solve_truncated(g, 2.0, V, 1.0, 1.0, 8), std::invalid_argument);
  CHECK_THROWS_AS(solve_truncated(g, 2.0, GraphFunction::constant(g, 0.0), 2.0, 1.0, 8), std::invalid_argument);

  // Path with a free base and data 1 at distance 4: no solution exists, Newton must say so.
  NewtonOptions opts;
  opts.max_iter = 20;
  auto r = solve_truncated(g, 4.0, V, 2.0, 1.0, 8, opts);
  CHECK_FALSE(r.converged);
  CHECK(r.fallback);
  CHECK(r.residual > 1e-10);
  CHECK_FALSE(r.message.empty());
}

TEST_CASE("manufactured solution converges at second order") {
  auto rep = manufactured_convergence(3, 1.0, 1.0, 2.0);
  REQUIRE(rep.rows.size() == 4);
  CHECK(rep.second_order());
  for (double q : rep.ratios) {
    CHECK(q >= 3.5);
    CHECK(q <= 4.5);
  }
  for (std::size_t i = 1; i < rep.rows.size(); ++i) {
    CHECK(rep.rows[i].residual <= 1e-10);
    CHECK(rep.rows[i].kirchhoff_defect < 0.6 * rep.rows[i - 1].kirchhoff_defect);
  }
  // Non-integer exponent and a longer edge.
  auto other = manufactured_convergence(4, 1.5, 0.5, 1.5, 16, 2);
  CHECK(other.second_order());
  CHECK_THROWS_AS(manufactured_convergence(4, 2.5, 0.5, 1.5), std::invalid_argument);
}

TEST_CASE("positive branch on the path matches the closed form") {
  // u'' + u^2 = 0, u'(0) = 0, u(R) = 0: u(0) = X^2 / R^2 with X = sqrt(3/2) B(1/3,1/2)/3.
  const double B = std::tgamma(1.0 / 3) * std::tgamma(0.5) / std::tgamma(5.0 / 6);
  const double X = std::sqrt(1.5) * B / 3.0;
  for (double R : {4.0, 8.0}) {
    auto g = path_graph(std::size_t(R) + 2);
    auto r = solve_positive_branch(g, R, GraphFunction::constant(g, 1.0), 2.0, 31);
    REQUIRE(r.converged);
    CHECK(r.residual <= 1e-10);
    CHECK(r.min_value >= -1e-12);
    CHECK(r.vertex_value(g.base()) == doctest::Approx(X * X / (R * R)).epsilon(1e-3));
  }
}

TEST_CASE("Liouville probe signatures") {
  auto path = liouville_probe(parse_family("path"), Potential::constant(), 2.0, {4, 8, 16, 32}, 1.0);
  REQUIRE(path.rows.size() == 4);
  for (const auto& row : path.rows) {
    CHECK(row.converged);
    CHECK(row.residual <= 1e-10);
  }
  CHECK(path.strictly_decreasing());
  CHECK(path.final_ratio() < 0.5);

  auto tree = liouville_probe(parse_family("tree:2"), Potential::constant(), 2.0, {4, 8}, 1.0);
  CHECK(tree.rows[1].core_sup > 0.5 * tree.rows[0].core_sup);
  CHECK(tree.rows[1].core_sup > 0.1);

  auto zero = liouville_probe(parse_family("path"), Potential::constant(), 2.0, {4, 8}, 0.0);
  for (const auto& row : zero.rows) {
    CHECK(row.core_sup == 0.0);
    CHECK(row.mass == 0.0);
  }

  // A cap below the branch maximum scales the branch down to the cap.
  auto capped = liouville_probe(parse_family("path"), Potential::constant(), 2.0, {4}, 0.1);
  CHECK(capped.rows[0].core_sup == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(capped.rows[0].scale < 1.0);
}

TEST_CASE("a priori chains on the single-edge fixture") {
  auto g = path_graph(1);
  auto mdf = modified_distance(g, distance_field(g), Mollifier::quintic());
  auto V = GraphFunction::constant(g, 1.0);
  auto u = sine_bump(g, 0.5);
  auto mesh = discretize(g, 9);
  REQUIRE(check_supersolution(g, mesh, V, 2.0, u, 0.0, {0, 1}).supersolution());

  auto a = apriori_check_lemma41(g, mdf, u, V, 2.0, 2.0, 3.0);
  auto b = apriori_check_lemma45(g, mdf, u, V, 2.0, 2.0, 1.0);
  auto c = theorem_chain_check(g, mdf, u, V, 2.0, 2.0, 3.0, ChainMode::Compact);
  auto d = theorem_chain_check(g, mdf, u, V, 2.0, 2.0, 1.0, ChainMode::Weighted);
  for (const auto* r : {&a, &b, &c, &d}) {
    CHECK(r->precondition_ok);
    CHECK(r->min_slack() >= -1e-8);
    // The Dirichlet ends carry the flux -2 eps pi.
    CHECK(r->flux == doctest::Approx(-kPi).epsilon(1e-12));
  }
  CHECK(a.lines.size() == 9);
  CHECK(b.lines.size() == 10);
}

TEST_CASE("a priori chains vanish for u = 0") {
  auto g = path_graph(10);
  auto mdf = modified_distance(g, distance_field(g), Mollifier::quintic());
  auto V = Potential::power_law(0.5).on(g, mdf.distance());
  auto u = GraphFunction::constant(g, 0.0);
  for (const auto& r : {apriori_check_lemma41(g, mdf, u, V, 2.0, 2.0, 3.0),
                        apriori_check_lemma45(g, mdf, u, V, 2.0, 2.0, 1.0),
                        theorem_chain_check(g, mdf, u, V, 3.0, 2.0, 3.0, ChainMode::Compact),
                        theorem_chain_check(g, mdf, u, V, 2.0, 2.0, 0.5, ChainMode::Weighted)}) {
    for (const auto& line : r.lines) {
      CHECK(line.lhs == 0.0);
      CHECK(line.rhs - line.u_free == 0.0);
      CHECK(line.slack() >= 0.0);
    }
    CHECK(r.flux == 0.0);
  }
}

TEST_CASE("a priori chains on a path supersolution with active cutoffs") {
  // eps cos(pi t / 24) on P_12 is a supersolution for eps below (pi/24)^2 / 2.
  auto g = path_graph(12);
  auto mdf = modified_distance(g, distance_field(g), Mollifier::quintic());
  auto V = GraphFunction::constant(g, 1.0);
  auto u = path_cosine(g, 0.005);
  REQUIRE(check_supersolution(g, discretize(g, 16), V, 2.0, u, 0.0, {12}).supersolution());
  for (double R : {2.0, 3.0, 5.0}) {
    auto a = apriori_check_lemma41(g, mdf, u, V, 2.0, R, 3.0);
    CHECK(a.precondition_ok);
    CHECK(a.min_slack() >= -1e-8);
    CHECK(a.edge_constant > 0.0);
    CHECK(std::abs(a.flux) < 1e-12);  // the cut end is outside the support
    auto t = theorem_chain_check(g, mdf, u, V, 2.0, R, 3.0, ChainMode::Compact);
    CHECK(t.min_slack() >= -1e-8);
  }
  auto w = apriori_check_lemma45(g, mdf, u, V, 2.0, 3.0, 1.0);
  CHECK(w.min_slack() >= -1e-8);
  CHECK(w.edge_constant > 0.0);
}

TEST_CASE("negative control: a constant violates the first line") {
  auto g = path_graph(6);
  auto mdf = modified_distance(g, distance_field(g), Mollifier::quintic());
  auto V = GraphFunction::constant(g, 1.0);
  auto u = GraphFunction::constant(g, 1.0);
  auto a = apriori_check_lemma41(g, mdf, u, V, 2.0, 2.0, 3.0);
  CHECK_FALSE(a.precondition_ok);
  CHECK(a.lines.front().slack() < -0.1);
  CHECK(a.lines.size() == 9);
  auto b = apriori_check_lemma45(g, mdf, u, V, 2.0, 2.0, 1.0);
  CHECK(b.lines.front().slack() < -0.1);
  CHECK_THROWS_AS(apriori_check_lemma41(g, mdf, u, V, 2.0, 2.0, 2.0), std::invalid_argument);
}

TEST_CASE("tail mass shrinks along an R sweep") {
  auto g = path_graph(200);
  auto mdf = modified_distance(g, distance_field(g), Mollifier::quintic());
  auto V = GraphFunction::constant(g, 1.0);
  std::vector<EdgeFunction> ef;
  for (std::size_t e = 0; e < g.num_edges(); ++e)
    ef.push_back({[e](double x) {
                    const double t = 1.0 + double(e) + x;
                    return Jet{1 / t, -1 / (t * t), 2 / (t * t * t)};
                  },
                  2});
  auto u = GraphFunction::from_edges(g, ef);
  double prev = 1e300;
  for (double R : {2.0, 4.0, 8.0, 16.0, 32.0}) {
    auto r = theorem_chain_check(g, mdf, u, V, 2.0, R, 3.0, ChainMode::Compact, QuadratureRule::simpson(16));
    CHECK(r.tail_mass < prev);
    prev = r.tail_mass;
  }
  CHECK(prev < 0.05);
}

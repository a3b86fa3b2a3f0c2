#include <cmath>

#include "doctest.h"
#include "qg/generators.hpp"
#include "qg/mollify.hpp"

using namespace qg;

namespace {

// Direct per-case formulas for the quintic-built modified distance.
double direct_formula(const EdgeProfile& p, double x) {
  auto eta = [](double t) { return 10 * t * t * t - 15 * t * t * t * t + 6 * t * t * t * t * t; };
  const double l = p.length;
  switch (p.kind) {
    case EdgeCase::Rising:
      return p.d_i + l * eta(x / l);
    case EdgeCase::Falling:
      return p.d_j + l - l * eta(x / l);
    case EdgeCase::Peak:
      if (x <= l / 2) return p.d_i + p.q * eta(2 * x / l);
      return p.d_i + p.q + (p.q - l) * eta((2 * x - l) / l);
  }
  return NAN;
}

}  // namespace

TEST_CASE("quintic values") {
  auto m = Mollifier::quintic();
  auto a = m.eval(0.0), b = m.eval(1.0), c = m.eval(0.5);
  CHECK(a.v == 0.0);
  CHECK(a.d1 == 0.0);
  CHECK(a.d2 == 0.0);
  CHECK(b.v == 1.0);
  CHECK(b.d1 == 0.0);
  CHECK(b.d2 == 0.0);
  CHECK(c.v == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(c.d1 == doctest::Approx(1.875).epsilon(1e-15));
  CHECK_THROWS_AS(m.eval(-1e-9), std::domain_error);
  CHECK_THROWS_AS(m.eval(1.0 + 1e-9), std::domain_error);
}

TEST_CASE("mollifier verification") {
  CHECK(verify_mollifier(Mollifier::quintic()).passed());
  auto bump = verify_mollifier(Mollifier::bump(), 512);
  for (const auto& f : bump.failures) MESSAGE(f);
  CHECK(bump.passed());

  auto norm = bump_normalization();
  CHECK(std::abs(norm.table_total / norm.c0 - 1.0) <= 1e-10);
  CHECK(Mollifier::bump().eval(1.0).v == 1.0);
  CHECK(Mollifier::bump().eval(0.5).v == doctest::Approx(0.5).epsilon(1e-12));

  auto linear = Mollifier::user("linear", [](double t) { return Jet{t, 1.0, 0.0}; });
  auto r = verify_mollifier(linear);
  CHECK_FALSE(r.passed());
  CHECK_FALSE(r.flat_first);

  auto tau = verify_step(StepFunctionTau::smoothstep());
  CHECK(tau.passed());
  CHECK_FALSE(tau.flat_second);
  CHECK_THROWS(verify_mollifier(Mollifier::quintic(), 8));
}

TEST_CASE("adaptive Simpson") {
  CHECK(adaptive_simpson([](double x) { return std::sin(x); }, 0.0, M_PI, 1e-12) ==
        doctest::Approx(2.0).epsilon(1e-12));
  // Known value of the bump normalisation constant.
  CHECK(bump_normalization().c0 == doctest::Approx(0.007029858406609).epsilon(1e-10));
}

TEST_CASE("coordinate transform") {
  auto m = Mollifier::quintic();
  EdgeProfile rising{2.0, 0.0, 2.0, EdgeCase::Rising, 2.0};
  CHECK(coordinate_transform(rising, m, 0.0).v == 0.0);
  CHECK(coordinate_transform(rising, m, 2.0).v == 2.0);
  EdgeProfile peak{3.0, 0.0, 1.0, EdgeCase::Peak, 2.0};
  CHECK(coordinate_transform(peak, m, 1.5).v == 2.0);
  for (double x : {0.0, 1.5, 3.0}) CHECK(coordinate_transform(peak, m, x).d1 == 0.0);
  CHECK_THROWS(coordinate_transform(peak, m, 3.5));
}

TEST_CASE("modified distance examples") {
  auto g = path_graph(2);
  auto mdf = modified_distance(g, distance_field(g), Mollifier::quintic());
  CHECK(mdf.eval(0, 0.5).v == doctest::Approx(0.5).epsilon(1e-15));

  auto pg = parallel_chain(1);
  auto pm = modified_distance(pg, distance_field(pg), Mollifier::quintic());
  CHECK(pm.eval(1, 1.5).v == 2.0);
  CHECK(pm.has_segment_point(1));
  CHECK_FALSE(pm.has_segment_point(0));
}

TEST_CASE("pipeline equals the direct case formulas") {
  for (const auto& g : {path_graph(4), parallel_chain(2), tree_graph(2, 3), ladder_graph(3),
                        parallel_chain(1, {1.0, 3.0, 0.5, 2.2})}) {
    auto df = distance_field(g);
    auto mdf = modified_distance(g, df, Mollifier::quintic());
    for (std::size_t e = 0; e < g.num_edges(); ++e)
      for (int k = 0; k <= 40; ++k) {
        double x = df.edge(e).length * k / 40.0;
        CHECK(std::abs(mdf.eval(e, x).v - direct_formula(df.edge(e), x)) <= 1e-12);
      }
  }
}

TEST_CASE("vertex values, range, monotonicity, chain rule") {
  for (auto m : {Mollifier::quintic(), Mollifier::bump()}) {
    for (const auto& g : {path_graph(3), parallel_chain(3), tree_graph(2, 3), ladder_graph(2, 0.5)}) {
      auto df = distance_field(g);
      auto mdf = modified_distance(g, df, m);
      for (std::size_t e = 0; e < g.num_edges(); ++e) {
        const auto& p = df.edge(e);
        CHECK(mdf.eval(e, 0.0).v == df.vertex(g.edge(e).from));
        CHECK(mdf.eval_side(e, p.length, true).v == df.vertex(g.edge(e).to));
        if (p.kind == EdgeCase::Peak)
          CHECK(std::abs(mdf.eval(e, p.length / 2).v - (p.d_i + p.q)) <= 1e-12);
        double prev = -1e300;
        const double h = 1e-5;
        for (int k = 1; k <= 64; ++k) {
          double x = p.length * k / 65.0;
          auto j = mdf.eval(e, x);
          CHECK(j.v >= std::min(p.d_i, p.d_j) - 1e-12);
          CHECK(j.v <= p.peak_value() + 1e-12);
          if (p.kind == EdgeCase::Rising) {
            CHECK(j.v >= prev - 1e-15);
            prev = j.v;
          }
          if (std::abs(x - p.length / 2) < 2 * h && p.kind == EdgeCase::Peak) continue;
          auto lo = mdf.eval(e, x - h), hi = mdf.eval(e, x + h);
          double fd1 = (hi.v - lo.v) / (2 * h), fd2 = (hi.d1 - lo.d1) / (2 * h);
          CHECK(std::abs(fd1 - j.d1) <= 1e-4 * std::max(1.0, std::abs(j.d1)));
          CHECK(std::abs(fd2 - j.d2) <= 1e-4 * std::max(1.0, std::abs(j.d2)));
        }
      }
    }
  }
}

TEST_CASE("verification of the modified distance") {
  for (const auto& g : {parallel_chain(1), path_graph(3), star_graph(4), tree_graph(2, 4)}) {
    auto df = distance_field(g);
    auto r = verify_prop41(modified_distance(g, df, Mollifier::quintic()));
    CHECK(r.passed());
    CHECK(r.max_deviation <= r.j_sup + 1e-4);
    auto rb = verify_prop41(modified_distance(g, df, Mollifier::bump()));
    CHECK(rb.passed());
  }
  auto g = parallel_chain(1);
  auto t = verify_prop41(c1_modified_distance(g, distance_field(g), StepFunctionTau::smoothstep()));
  CHECK(t.first_order_ok);
  CHECK(t.c1_continuity_ok);
  CHECK_FALSE(t.c2_continuity_ok);
  CHECK(t.max_jump_d2 > 1.0);
  CHECK(t.passed());
}

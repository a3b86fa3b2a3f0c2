#include "qg/testfn.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "qg/parallel.hpp"

namespace qg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Jet quintic_eta(double t) {
  const double t2 = t * t;
  return {t2 * t * (10.0 + t * (-15.0 + 6.0 * t)), 30.0 * t2 * (1.0 - t) * (1.0 - t),
          60.0 * t * (1.0 - t) * (1.0 - 2.0 * t)};
}

Jet poly_jet(const double* c, double t) {
  double v = 0, d1 = 0, d2 = 0;
  for (int k = 5; k >= 0; --k) {
    d2 = d2 * t + 2.0 * d1;
    d1 = d1 * t + v;
    v = v * t + c[k];
  }
  return {v, d1, d2};
}

// f(d(x)) for a profile jet d and outer jet (f, f', f'').
Jet compose(const Jet& outer, const Jet& inner) {
  return {outer.v, outer.d1 * inner.d1, outer.d2 * inner.d1 * inner.d1 + outer.d1 * inner.d2};
}

Jet power(const Jet& p, double s) {
  if (p.v == 0.0) return {0.0, 0.0, 0.0};
  if (p.v == 1.0 && p.d1 == 0.0 && p.d2 == 0.0) return {1.0, 0.0, 0.0};
  const double a = std::pow(p.v, s - 2.0);
  const double b = a * p.v;
  return {b * p.v, s * b * p.d1, s * (s - 1.0) * a * p.d1 * p.d1 + s * b * p.d2};
}

Jet phi_power(const CutoffPhi& phi, const Jet& dt, double R, double s) {
  const Jet r{dt.v / R, dt.d1 / R, dt.d2 / R};
  const Jet c = compose(phi.eval(r.v), r);
  return power(c, s);
}

Jet psi_of(const ExpPsi& psi, const Jet& dt, double R, double j) {
  const Jet r{(dt.v - j) / R, dt.d1 / R, dt.d2 / R};
  return compose(psi.eval(r.v), r);
}

void require_radius(const MetricGraph& g, double R) {
  const double R0 = base_radius(g);
  if (!(R >= R0 * (1.0 - 1e-12)))
    throw std::invalid_argument("R = " + std::to_string(R) + " is below R0 = " + std::to_string(R0));
}

struct Segment {
  double a, b;
  bool right;       // use the right branch at a segment point
  bool increasing;  // d~ increasing from a to b
};

std::vector<Segment> monotone_segments(const ModifiedDistanceField& mdf, std::size_t e) {
  const EdgeProfile& p = mdf.distance().edge(e);
  if (p.kind == EdgeCase::Peak) {
    const double s = mdf.segment_point(e);
    return {{0.0, s, false, true}, {s, p.length, true, false}};
  }
  return {{0.0, p.length, false, p.kind == EdgeCase::Rising}};
}

// On a monotone segment, the point where d~ crosses `level`, taking the side where d~ >= level.
double bisect(const ModifiedDistanceField& mdf, std::size_t e, const Segment& sg, double level) {
  auto f = [&](double x) { return mdf.eval_side(e, x, sg.right).v; };
  double below = sg.increasing ? sg.a : sg.b;
  double above = sg.increasing ? sg.b : sg.a;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (below + above);
    if (mid == below || mid == above) break;
    (f(mid) >= level ? above : below) = mid;
  }
  return above;
}

}  // namespace

std::vector<double> quintic_hermite(double v0, double d0, double s0, double v1, double d1, double s1) {
  const double c0 = v0, c1 = d0, c2 = 0.5 * s0;
  const double A = v1 - (c0 + c1 + c2);
  const double B = d1 - (c1 + 2.0 * c2);
  const double C = s1 - 2.0 * c2;
  return {c0, c1, c2, 10.0 * A - 4.0 * B + 0.5 * C, -15.0 * A + 7.0 * B - C, 6.0 * A - 3.0 * B + 0.5 * C};
}

CutoffPhi CutoffPhi::make() {
  CutoffPhi p;
  for (int k = 0; k <= 4096; ++k) {
    const Jet j = quintic_eta(k / 4096.0);
    p.bound_ = std::max({p.bound_, std::abs(j.d1), std::abs(j.d2)});
  }
  return p;
}

Jet CutoffPhi::eval(double r) const {
  if (r <= 1.0) return {1.0, 0.0, 0.0};
  if (r >= 2.0) return {0.0, 0.0, 0.0};
  const Jet e = quintic_eta(r - 1.0);
  return {1.0 - e.v, -e.d1, -e.d2};
}

ExpPsi ExpPsi::make(double delta, double R, double j_sup) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  if (!(R > 0.0)) throw std::invalid_argument("R must be positive");
  if (!(j_sup >= 0.0)) throw std::invalid_argument("edge-length bound must be nonnegative");
  ExpPsi p;
  p.delta_ = delta;
  p.lower_ = -j_sup / R;
  const double e2 = std::exp(-2.0 * delta);
  const auto c = quintic_hermite(1.0, 0.0, 0.0, e2, -delta * e2, delta * delta * e2);
  std::copy(c.begin(), c.end(), p.b_);

  p.max_slope_ = -kInf;
  const int n = 4000;
  for (int k = 0; k <= n; ++k) p.max_slope_ = std::max(p.max_slope_, p.eval(1.0 + double(k) / n).d1);
  if (p.max_slope_ > 1e-14)
    throw std::domain_error("psi bridge is not monotone for delta = " + std::to_string(delta) +
                            "; use a smaller delta");

  // Beyond r = 2 the ratios are exactly 1, delta and delta^2.
  double c1 = std::max({1.0, delta, delta * delta}), c2 = 1.0;
  const double span = 2.0 - p.lower_;
  for (int k = 0; k <= n; ++k) {
    const double r = p.lower_ + span * k / n;
    const Jet j = p.eval(r);
    const double w = std::exp(delta * r);
    c1 = std::max({c1, j.v * w, std::abs(j.d1) * w, std::abs(j.d2) * w});
    c2 = std::min(c2, j.v * w);
  }
  p.c1_ = c1;
  p.c2_ = c2;
  return p;
}

Jet ExpPsi::eval(double r) const {
  if (r < lower_ - 1e-12) throw std::domain_error("psi evaluated below -j/R");
  if (r <= 1.0) return {1.0, 0.0, 0.0};
  if (r >= 2.0) {
    const double v = std::exp(-delta_ * r);
    return {v, -delta_ * v, delta_ * delta_ * v};
  }
  return poly_jet(b_, r - 1.0);
}

GraphFunction compact_testfn(const MetricGraph& g, const ModifiedDistanceField& mdf, double R,
                             const CutoffPhi& phi, double s) {
  require_radius(g, R);
  if (!(s >= 1.0)) throw std::invalid_argument("power s must be at least 1");
  std::vector<double> vals(g.num_vertices());
  for (std::size_t v = 0; v < vals.size(); ++v) vals[v] = phi_power(phi, {mdf.vertex(v), 0, 0}, R, s).v;
  std::vector<EdgeFunction> edges;
  for (std::size_t e = 0; e < g.num_edges(); ++e)
    edges.push_back({[&mdf, phi, R, s, e](double x) { return phi_power(phi, mdf.eval(e, x), R, s); }, 2});
  return GraphFunction(std::move(vals), std::move(edges));
}

GraphFunction exp_testfn(const MetricGraph& g, const ModifiedDistanceField& mdf, double R,
                         const ExpPsi& psi) {
  require_radius(g, R);
  const double j = mdf.j_sup();
  std::vector<double> vals(g.num_vertices());
  for (std::size_t v = 0; v < vals.size(); ++v) vals[v] = psi_of(psi, {mdf.vertex(v), 0, 0}, R, j).v;
  std::vector<EdgeFunction> edges;
  for (std::size_t e = 0; e < g.num_edges(); ++e)
    edges.push_back({[&mdf, psi, R, j, e](double x) { return psi_of(psi, mdf.eval(e, x), R, j); }, 2});
  return GraphFunction(std::move(vals), std::move(edges));
}

std::vector<EdgeInterval> modified_level_intervals(const ModifiedDistanceField& mdf, std::size_t e,
                                                   double lo, double hi) {
  std::vector<EdgeInterval> out;
  for (const Segment& sg : monotone_segments(mdf, e)) {
    const double fa = mdf.eval_side(e, sg.a, sg.right).v;
    const double fb = mdf.eval_side(e, sg.b, sg.right).v;
    const double fmin = std::min(fa, fb), fmax = std::max(fa, fb);
    if (fmax < lo || fmin > hi) continue;
    // Coordinates where d~ = lo and d~ = hi, clipped to the segment.
    double x_lo = fmin >= lo ? (sg.increasing ? sg.a : sg.b) : bisect(mdf, e, sg, lo);
    double x_hi = fmax <= hi ? (sg.increasing ? sg.b : sg.a) : bisect(mdf, e, sg, hi);
    double a = std::min(x_lo, x_hi), b = std::max(x_lo, x_hi);
    if (!out.empty() && out.back().hi == a)
      out.back().hi = b;
    else
      out.push_back({e, a, b});
  }
  return out;
}

std::vector<CutPoint> modified_crossings(const ModifiedDistanceField& mdf, std::size_t e, double level) {
  std::vector<CutPoint> out;
  const double l = mdf.length(e);
  for (const Segment& sg : monotone_segments(mdf, e)) {
    const double f_in = mdf.eval_side(e, sg.increasing ? sg.a : sg.b, sg.right).v;
    const double f_out = mdf.eval_side(e, sg.increasing ? sg.b : sg.a, sg.right).v;
    if (!(f_in < level && f_out >= level)) continue;
    const double x = bisect(mdf, e, sg, level);
    if (!(x > 0.0 && x < l)) continue;
    if (!out.empty() && std::abs(out.back().x - x) <= 1e-12 * l) continue;
    out.push_back({e, x});
  }
  return out;
}

SupportPartition support_partition(const MetricGraph& g, const ModifiedDistanceField& mdf, double R) {
  if (!(R > 0.0)) throw std::invalid_argument("R must be positive");
  SupportPartition sp;
  sp.R = R;
  const double two_r = 2.0 * R, tol = 1e-12 * std::max(1.0, R);
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    const double d = mdf.vertex(v);
    if (d > two_r + tol) continue;
    sp.v1.push_back(v);
    if (d >= two_r - tol) sp.v1_boundary.push_back(v);
  }
  sp.vc_vertices = sp.v1_boundary;
  sp.vprime = sp.v1;

  sp.breaks.assign(g.num_edges(), {});
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    for (const EdgeInterval& iv : modified_level_intervals(mdf, e, -kInf, two_r))
      if (iv.hi > iv.lo) sp.intervals.push_back(iv);
    for (const CutPoint& c : modified_crossings(mdf, e, two_r)) sp.v2.push_back(c);
    for (const CutPoint& c : modified_crossings(mdf, e, R)) {
      sp.v3.push_back(c);
      sp.breaks[e].push_back(c.x);
    }
    if (mdf.has_segment_point(e)) {
      const double s = mdf.segment_point(e);
      sp.breaks[e].push_back(s);
      if (mdf.eval(e, s).v < two_r) sp.v4.push_back({e, s});
    }
  }
  return sp;
}

namespace {

struct EdgeSweep {
  double inside = 0.0;   // weighted sup inside the active region
  double outside = 0.0;  // sup |f''| outside it
  double seg_jump = 0.0;
  bool containment = true;
  std::size_t samples = 0;
};

void add_failure(BoundReport& r, bool bad, const std::string& what) {
  if (bad) r.failures.push_back(what);
}

}  // namespace

BoundReport verify_lemma42(const MetricGraph& g, const ModifiedDistanceField& mdf, double R,
                           const CutoffPhi& phi, double s, int grid, double tol) {
  if (grid < 2) throw std::invalid_argument("grid must be at least 2");
  const GraphFunction f = compact_testfn(g, mdf, R, phi, s);
  const SupportPartition sp = support_partition(g, mdf, R);
  const double j = mdf.j_sup(), eps = 1e-9 * std::max(1.0, R);
  BoundReport r;
  r.R = R;

  auto in_d = [&](double d) { return d >= R - j - eps && d <= 2 * R + j + eps; };
  auto in_e123 = [&](double d) { return d >= 0.5 * R - eps && d <= 3 * R + eps; };

  std::vector<EdgeSweep> per(g.num_edges());
  parallel_for(g.num_edges(), [&](std::size_t e) {
    EdgeSweep& w = per[e];
    const EdgeProfile& p = mdf.distance().edge(e);
    for (int k = 0; k <= grid; ++k) {
      const double x = p.length * k / grid;
      const double dt = mdf.eval(e, x).v, d = p.at(x);
      const double f2 = f.edge(e).jet(x).d2;
      const bool in_a = dt >= R && dt <= 2 * R;
      if (in_a)
        w.inside = std::max(w.inside, R * std::abs(f2));
      else
        w.outside = std::max(w.outside, std::abs(f2));
      if (in_a && !in_d(d)) w.containment = false;
      if (in_d(d) && !in_e123(d)) w.containment = false;
      ++w.samples;
    }
    if (mdf.has_segment_point(e)) {
      const double sx = mdf.segment_point(e);
      const Jet left = phi_power(phi, mdf.eval_side(e, sx, false), R, s);
      const Jet right = phi_power(phi, mdf.eval_side(e, sx, true), R, s);
      w.seg_jump = std::abs(left.d1 - right.d1);
    }
  });

  double outside = 0.0;
  for (const EdgeSweep& w : per) {
    r.edge_constant = std::max(r.edge_constant, w.inside);
    outside = std::max(outside, w.outside);
    r.max_segment_jump_d1 = std::max(r.max_segment_jump_d1, w.seg_jump);
    r.containment_ok = r.containment_ok && w.containment;
    r.samples += w.samples;
  }

  double v_outside = 0.0;
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    const double d = mdf.vertex(v), lap = std::abs(vertex_laplacian(g, f, v));
    if (in_d(d)) {
      r.vertex_constant = std::max(r.vertex_constant, R * lap);
      if (!in_e123(d)) r.containment_ok = false;
    } else {
      v_outside = std::max(v_outside, lap);
    }
    if (d >= R && d <= 2 * R && !in_d(d)) r.containment_ok = false;
  }
  for (std::size_t v : sp.vprime) r.max_kirchhoff = std::max(r.max_kirchhoff, std::abs(kirchhoff(g, f, v)));

  for (std::size_t v = 0; v < g.num_vertices(); ++v)
    if (mdf.vertex(v) >= R && mdf.vertex(v) <= 2 * R) r.a_r.vertices.push_back(v);
  for (std::size_t e = 0; e < g.num_edges(); ++e)
    for (const EdgeInterval& iv : modified_level_intervals(mdf, e, R, 2 * R)) r.a_r.intervals.push_back(iv);
  r.d_r = level_set(g, mdf.distance(), R - j, 2 * R + j);

  r.regions = {{"edge_in_A", r.edge_constant},          {"edge_outside_A", outside},
               {"vertex_in_D", r.vertex_constant},       {"vertex_outside_D", v_outside},
               {"kirchhoff_vprime", r.max_kirchhoff},   {"segment_jump_d1", r.max_segment_jump_d1}};
  add_failure(r, outside > tol, "second derivative nonzero outside A_R");
  add_failure(r, v_outside > tol, "vertex Laplacian nonzero outside D_R");
  add_failure(r, r.max_kirchhoff > tol, "Kirchhoff functional nonzero on V'");
  add_failure(r, r.max_segment_jump_d1 > 1e-9, "first derivative jumps at a segment point");
  add_failure(r, !r.containment_ok, "A_R, D_R, E containment violated");
  add_failure(r, !std::isfinite(r.constant()), "empirical constant not finite");
  return r;
}

BoundReport verify_lemma43(const MetricGraph& g, const ModifiedDistanceField& mdf, double R,
                           const ExpPsi& psi, int grid, double tol) {
  if (grid < 2) throw std::invalid_argument("grid must be at least 2");
  const GraphFunction f = exp_testfn(g, mdf, R, psi);
  const double j = mdf.j_sup(), delta = psi.delta();
  BoundReport r;
  r.R = R;

  std::vector<EdgeSweep> per(g.num_edges());
  parallel_for(g.num_edges(), [&](std::size_t e) {
    EdgeSweep& w = per[e];
    const double l = mdf.length(e);
    for (int k = 0; k <= grid; ++k) {
      const double x = l * k / grid;
      const double dt = mdf.eval(e, x).v;
      const double f2 = f.edge(e).jet(x).d2;
      if (dt >= R + j)
        w.inside = std::max(w.inside, R * std::abs(f2) * std::exp(delta * dt / R));
      else
        w.outside = std::max(w.outside, std::abs(f2));
      ++w.samples;
    }
    if (mdf.has_segment_point(e)) {
      const double sx = mdf.segment_point(e);
      w.seg_jump = std::abs(psi_of(psi, mdf.eval_side(e, sx, false), R, j).d1 -
                            psi_of(psi, mdf.eval_side(e, sx, true), R, j).d1);
    }
  });
  double outside = 0.0;
  for (const EdgeSweep& w : per) {
    r.edge_constant = std::max(r.edge_constant, w.inside);
    outside = std::max(outside, w.outside);
    r.max_segment_jump_d1 = std::max(r.max_segment_jump_d1, w.seg_jump);
    r.samples += w.samples;
  }

  double v_outside = 0.0;
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    const double d = mdf.vertex(v), lap = std::abs(vertex_laplacian(g, f, v));
    if (d >= R) {
      r.vertex_constant = std::max(r.vertex_constant, R * lap * std::exp(delta * d / R));
      r.d_r.vertices.push_back(v);
    } else {
      v_outside = std::max(v_outside, lap);
    }
    if (d >= R + j) r.a_r.vertices.push_back(v);
    r.max_kirchhoff = std::max(r.max_kirchhoff, std::abs(kirchhoff(g, f, v)));
  }
  for (std::size_t e = 0; e < g.num_edges(); ++e)
    for (const EdgeInterval& iv : modified_level_intervals(mdf, e, R + j, kInf)) r.a_r.intervals.push_back(iv);
  r.d_r.intervals = level_set(g, mdf.distance(), R, kInf).intervals;

  r.regions = {{"edge_tail", r.edge_constant},          {"edge_plateau", outside},
               {"vertex_tail", r.vertex_constant},      {"vertex_ball", v_outside},
               {"kirchhoff", r.max_kirchhoff},          {"segment_jump_d1", r.max_segment_jump_d1}};
  add_failure(r, outside > tol, "second derivative nonzero on the plateau");
  add_failure(r, v_outside > tol, "vertex Laplacian nonzero inside B_R");
  add_failure(r, r.max_kirchhoff > tol, "Kirchhoff functional nonzero");
  add_failure(r, r.max_segment_jump_d1 > 1e-9, "first derivative jumps at a segment point");
  add_failure(r, !std::isfinite(r.constant()), "empirical constant not finite");
  return r;
}

namespace {

template <class Check>
std::vector<SweepRow> sweep(const Family& fam, double R, int k, double radius_factor, Check check) {
  if (k < 0) throw std::invalid_argument("sweep count must be nonnegative");
  const double j = fam.make(1).max_length();
  std::vector<SweepRow> rows;
  for (int i = 0; i <= k; ++i) {
    const double Ri = R * std::ldexp(1.0, i);
    const MetricGraph g = fam.truncate(radius_factor * Ri + 2.0 * j);
    SweepRow row;
    row.R = Ri;
    row.vertices = g.num_vertices();
    row.report = check(g, Ri);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::vector<SweepRow> sweep_lemma42(const Family& fam, const Mollifier& m, double R, double s, int k,
                                    int grid, double radius_factor) {
  const CutoffPhi phi = CutoffPhi::make();
  return sweep(fam, R, k, radius_factor, [&](const MetricGraph& g, double Ri) {
    const auto mdf = modified_distance(g, distance_field(g), m);
    return verify_lemma42(g, mdf, Ri, phi, s, grid);
  });
}

std::vector<SweepRow> sweep_lemma43(const Family& fam, const Mollifier& m, double R, double delta, int k,
                                    int grid, double radius_factor) {
  return sweep(fam, R, k, radius_factor, [&](const MetricGraph& g, double Ri) {
    const auto mdf = modified_distance(g, distance_field(g), m);
    return verify_lemma43(g, mdf, Ri, ExpPsi::make(delta, Ri, mdf.j_sup()), grid);
  });
}

double drift(const std::vector<double>& constants) {
  double lo = kInf, hi = 0.0;
  std::size_t n = 0;
  for (double c : constants)
    if (c > 0.0) {
      lo = std::min(lo, c);
      hi = std::max(hi, c);
      ++n;
    }
  return n < 2 ? 1.0 : hi / lo;
}

}  // namespace qg

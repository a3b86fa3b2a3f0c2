#include "qg/mollify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qg {

namespace {

void check_unit(double t) {
  if (!(t >= 0.0 && t <= 1.0))
    throw std::domain_error("mollifier argument " + std::to_string(t) + " outside [0,1]");
}

Jet quintic_eval(double t) {
  const double u = 1.0 - t;
  return {t * t * t * (10.0 + t * (-15.0 + 6.0 * t)), 30.0 * t * t * u * u,
          60.0 * t * u * (1.0 - 2.0 * t)};
}

Jet smoothstep_eval(double t) { return {t * t * (3.0 - 2.0 * t), 6.0 * t * (1.0 - t), 6.0 - 12.0 * t}; }

double simpson_rec(const std::function<double(double)>& f, double a, double b, double eps,
                   double whole, double fa, double fb, double fm, int depth, int min_depth) {
  const double m = 0.5 * (a + b), lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || (min_depth <= 0 && std::abs(delta) <= 15.0 * eps))
    return left + right + delta / 15.0;
  return simpson_rec(f, a, m, eps / 2.0, left, fa, fm, flm, depth - 1, min_depth - 1) +
         simpson_rec(f, m, b, eps / 2.0, right, fm, fb, frm, depth - 1, min_depth - 1);
}

// Cumulative bump integral at Chebyshev nodes with shape-preserving cubic Hermite
// interpolation between them. Derivatives are never interpolated.
class BumpTable {
 public:
  static constexpr int N = 1024;

  BumpTable() {
    nodes_.resize(N);
    for (int k = 0; k < N; ++k)
      nodes_[k] = 0.5 * (1.0 - std::cos(std::numbers::pi * k / (N - 1)));
    nodes_.front() = 0.0;
    nodes_.back() = 1.0;
    cum_.assign(N, 0.0);
    for (int k = 1; k < N; ++k)
      cum_[k] = cum_[k - 1] + adaptive_simpson(bump_kernel, nodes_[k - 1], nodes_[k], 1e-12 / N);
    total_ = cum_.back();
    c0_ = adaptive_simpson(bump_kernel, 0.0, 1.0, 1e-12);
    for (auto& c : cum_) c /= total_;
    cum_.back() = 1.0;

    ml_.resize(N - 1);
    mr_.resize(N - 1);
    for (int k = 0; k + 1 < N; ++k) {
      const double h = nodes_[k + 1] - nodes_[k];
      const double delta = (cum_[k + 1] - cum_[k]) / h;
      double m0 = bump_kernel(nodes_[k]) / total_;
      double m1 = bump_kernel(nodes_[k + 1]) / total_;
      if (delta <= 0.0) {
        m0 = m1 = 0.0;
      } else {
        const double a = m0 / delta, b = m1 / delta;
        const double r = a * a + b * b;
        if (r > 9.0) {
          const double tau = 3.0 / std::sqrt(r);
          m0 = tau * a * delta;
          m1 = tau * b * delta;
        }
      }
      ml_[k] = m0;
      mr_[k] = m1;
    }
  }

  double value(double t) const {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    int k = static_cast<int>(std::acos(1.0 - 2.0 * t) * (N - 1) / std::numbers::pi);
    k = std::clamp(k, 0, N - 2);
    while (k > 0 && t < nodes_[k]) --k;
    while (k < N - 2 && t > nodes_[k + 1]) ++k;
    const double h = nodes_[k + 1] - nodes_[k];
    const double s = (t - nodes_[k]) / h;
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * cum_[k] + (s3 - 2 * s2 + s) * h * ml_[k] +
           (-2 * s3 + 3 * s2) * cum_[k + 1] + (s3 - s2) * h * mr_[k];
  }

  double total() const { return total_; }
  double c0() const { return c0_; }

 private:
  std::vector<double> nodes_, cum_, ml_, mr_;
  double total_ = 0.0, c0_ = 0.0;
};

const BumpTable& bump_table() {
  static const BumpTable table;
  return table;
}

Jet bump_eval(double t) {
  const BumpTable& tb = bump_table();
  return {tb.value(t), bump_kernel(t) / tb.total(), bump_kernel_d1(t) / tb.total()};
}

}  // namespace

double bump_kernel(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  return std::exp(-1.0 / (t * (1.0 - t)));
}

double bump_kernel_d1(double t) {
  const double r = bump_kernel(t);
  if (r == 0.0) return 0.0;
  const double w = t * (1.0 - t);
  return r * (1.0 - 2.0 * t) / (w * w);
}

BumpNormalization bump_normalization() {
  const BumpTable& tb = bump_table();
  return {tb.c0(), tb.total()};
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, b, tol, whole, fa, fb, fm, max_depth, 3);
}

Mollifier Mollifier::quintic() { return Mollifier(Kind::QuinticPoly, "quintic", quintic_eval, 3); }

Mollifier Mollifier::bump() {
  bump_table();
  return Mollifier(Kind::BumpIntegral, "bump", bump_eval, 3);
}

Mollifier Mollifier::user(std::string name, std::function<Jet(double)> eval, int smoothness_class) {
  return Mollifier(Kind::UserC3, std::move(name), std::move(eval), smoothness_class);
}

Jet Mollifier::eval(double t) const {
  check_unit(t);
  return f_(t);
}

StepFunctionTau StepFunctionTau::smoothstep() { return StepFunctionTau("smoothstep", smoothstep_eval); }

StepFunctionTau StepFunctionTau::user(std::string name, std::function<Jet(double)> eval) {
  return StepFunctionTau(std::move(name), std::move(eval));
}

Jet StepFunctionTau::eval(double t) const {
  check_unit(t);
  return f_(t);
}

namespace {

MollifierReport verify_profile(const std::function<Jet(double)>& f, int smoothness, int n,
                               double tol) {
  if (n < 16) throw std::invalid_argument("verify_mollifier needs at least 16 samples");
  MollifierReport r;
  r.smoothness_class = smoothness;
  const Jet a = f(0.0), b = f(1.0);
  r.endpoint_values = std::abs(a.v) <= tol && std::abs(b.v - 1.0) <= tol;
  r.flat_first = std::abs(a.d1) <= tol && std::abs(b.d1) <= tol;
  r.flat_second = std::abs(a.d2) <= tol && std::abs(b.d2) <= tol;

  r.monotone = true;
  double prev = a.v;
  for (int k = 1; k < n; ++k) {
    const double t = static_cast<double>(k) / (n - 1);
    const Jet j = f(t);
    if (j.v < prev - tol || j.d1 < -tol) r.monotone = false;
    prev = j.v;
    r.sup_d1 = std::max(r.sup_d1, std::abs(j.d1));
    r.sup_d2 = std::max(r.sup_d2, std::abs(j.d2));
  }

  // Central differences, h = 1e-5; errors relative to max(|exact|, 1).
  const double h = 1e-5, rel = 1e-4;
  r.d1_matches_fd = r.d2_matches_fd = true;
  for (int k = 0; k < n; ++k) {
    const double t = h + (1.0 - 2.0 * h) * k / (n - 1);
    const Jet j = f(t), lo = f(t - h), hi = f(t + h);
    const double e1 = std::abs((hi.v - lo.v) / (2 * h) - j.d1) / std::max(std::abs(j.d1), 1.0);
    const double e2 = std::abs((hi.d1 - lo.d1) / (2 * h) - j.d2) / std::max(std::abs(j.d2), 1.0);
    r.max_d1_fd_error = std::max(r.max_d1_fd_error, e1);
    r.max_d2_fd_error = std::max(r.max_d2_fd_error, e2);
  }
  r.d1_matches_fd = r.max_d1_fd_error <= rel;
  r.d2_matches_fd = r.max_d2_fd_error <= rel;

  if (!r.endpoint_values) r.failures.push_back("endpoint values");
  if (!r.flat_first) r.failures.push_back("first derivative not flat at the ends");
  if (smoothness >= 3 && !r.flat_second) r.failures.push_back("second derivative not flat at the ends");
  if (!r.monotone) r.failures.push_back("not monotone");
  if (!r.d1_matches_fd) r.failures.push_back("first derivative disagrees with finite differences");
  if (!r.d2_matches_fd) r.failures.push_back("second derivative disagrees with finite differences");
  return r;
}

}  // namespace

MollifierReport verify_mollifier(const Mollifier& m, int n_samples, double tol) {
  return verify_profile([&](double t) { return m.eval(t); }, m.smoothness_class(), n_samples, tol);
}

MollifierReport verify_step(const StepFunctionTau& t, int n_samples, double tol) {
  return verify_profile([&](double s) { return t.eval(s); }, 1, n_samples, tol);
}

Jet coordinate_transform(const EdgeProfile& p, const std::function<Jet(double)>& eta, double x,
                         bool right_half) {
  const double l = p.length;
  if (!(x >= 0.0 && x <= l))
    throw std::out_of_range("coordinate " + std::to_string(x) + " outside [0, " + std::to_string(l) + "]");
  if (p.kind != EdgeCase::Peak) {
    const Jet j = eta(std::clamp(x / l, 0.0, 1.0));
    return {l * j.v, j.d1, j.d2 / l};
  }
  const double half = 0.5 * l, k = 2.0 / l;
  if (x < half || (x == half && !right_half)) {
    const Jet j = eta(std::clamp(k * x, 0.0, 1.0));
    return {p.q * j.v, p.q * k * j.d1, p.q * k * k * j.d2};
  }
  const double w = l - p.q;
  const Jet j = eta(std::clamp((2.0 * x - l) / l, 0.0, 1.0));
  return {w * j.v + p.q, w * k * j.d1, w * k * k * j.d2};
}

Jet coordinate_transform(const EdgeProfile& p, const Mollifier& m, double x) {
  return coordinate_transform(p, [&](double t) { return m.eval(t); }, x);
}

ModifiedDistanceField::ModifiedDistanceField(const MetricGraph& g, DistanceField df,
                                             std::function<Jet(double)> eta, int smoothness_class,
                                             std::string name)
    : df_(std::move(df)),
      eta_(std::move(eta)),
      smoothness_(smoothness_class),
      name_(std::move(name)),
      j_sup_(g.max_length()) {}

Jet ModifiedDistanceField::transform(std::size_t e, double x) const {
  return coordinate_transform(df_.edge(e), eta_, x);
}

Jet ModifiedDistanceField::eval_side(std::size_t e, double x, bool right) const {
  const EdgeProfile& p = df_.edge(e);
  const Jet xt = coordinate_transform(p, eta_, x, right);
  double slope;
  if (p.kind == EdgeCase::Peak)
    slope = (x < 0.5 * p.length || (x == 0.5 * p.length && !right)) ? 1.0 : -1.0;
  else
    slope = p.kind == EdgeCase::Rising ? 1.0 : -1.0;
  return {p.at(std::clamp(xt.v, 0.0, p.length)), slope * xt.d1, slope * xt.d2};
}

Jet ModifiedDistanceField::eval(std::size_t e, double x) const { return eval_side(e, x, false); }

ModifiedDistanceField modified_distance(const MetricGraph& g, const DistanceField& df,
                                        const Mollifier& m) {
  return ModifiedDistanceField(g, df, [m](double t) { return m.eval(t); }, m.smoothness_class(),
                               m.name());
}

ModifiedDistanceField c1_modified_distance(const MetricGraph& g, const DistanceField& df,
                                           const StepFunctionTau& tau) {
  return ModifiedDistanceField(g, df, [tau](double t) { return tau.eval(t); }, 1, tau.name());
}

bool Prop41Report::passed() const {
  if (!first_order_ok || !deviation_ok || !c1_continuity_ok) return false;
  if (smoothness_class >= 2) return second_order_ok && c2_continuity_ok;
  return true;
}

Prop41Report verify_prop41(const ModifiedDistanceField& mdf, int grid_density, double tol, double h) {
  if (grid_density < 2) throw std::invalid_argument("grid density must be at least 2");
  Prop41Report r;
  r.smoothness_class = mdf.smoothness_class();
  r.j_sup = mdf.j_sup();

  for (std::size_t e = 0; e < mdf.num_edges(); ++e) {
    const EdgeProfile& p = mdf.distance().edge(e);
    const double l = p.length;
    EdgeProp41 pe;
    pe.edge = e;

    // First order from values; second order from the analytic first derivative, since a
    // second difference of O(1) values at h=1e-6 would be swamped by rounding.
    const Jet a0 = mdf.eval(e, 0.0), ah = mdf.eval(e, h);
    const Jet b0 = mdf.eval_side(e, l, true), bh = mdf.eval_side(e, l - h, true);
    const double fd1 = std::max(std::abs((ah.v - a0.v) / h), std::abs((b0.v - bh.v) / h));
    const double fd2 = std::max(std::abs((ah.d1 - a0.d1) / h), std::abs((b0.d1 - bh.d1) / h));
    pe.endpoint_fd1 = fd1;
    pe.endpoint_fd2 = fd2;
    r.max_vertex_fd1 = std::max(r.max_vertex_fd1, fd1);
    r.max_vertex_fd2 = std::max(r.max_vertex_fd2, fd2);

    if (mdf.has_segment_point(e)) {
      ++r.segment_points;
      const double s = mdf.segment_point(e);
      const Jet left = mdf.eval_side(e, s, false), right = mdf.eval_side(e, s, true);
      const Jet lh = mdf.eval_side(e, s - h, false), rh = mdf.eval_side(e, s + h, true);
      r.max_segment_fd1 = std::max({r.max_segment_fd1, std::abs((left.v - lh.v) / h),
                                    std::abs((rh.v - right.v) / h)});
      r.max_segment_fd2 = std::max({r.max_segment_fd2, std::abs((left.d1 - lh.d1) / h),
                                    std::abs((rh.d1 - right.d1) / h)});
      r.max_jump_value = std::max(r.max_jump_value, std::abs(left.v - right.v));
      r.max_jump_d1 = std::max(r.max_jump_d1, std::abs(left.d1 - right.d1));
      r.max_jump_d2 = std::max(r.max_jump_d2, std::abs(left.d2 - right.d2));
    }

    for (int k = 0; k <= grid_density; ++k) {
      const double x = l * k / grid_density;
      for (bool side : {false, true}) {
        const Jet j = mdf.eval_side(e, x, side);
        pe.sup_d1 = std::max(pe.sup_d1, std::abs(j.d1));
        pe.sup_d2 = std::max(pe.sup_d2, std::abs(j.d2));
        pe.max_deviation = std::max(pe.max_deviation, std::abs(p.at(x) - j.v));
      }
    }
    r.sup_d1 = std::max(r.sup_d1, pe.sup_d1);
    r.sup_d2 = std::max(r.sup_d2, pe.sup_d2);
    r.max_deviation = std::max(r.max_deviation, pe.max_deviation);
    r.per_edge.push_back(pe);
  }

  r.first_order_ok = r.max_vertex_fd1 <= tol && r.max_segment_fd1 <= tol;
  r.second_order_ok = r.max_vertex_fd2 <= tol && r.max_segment_fd2 <= tol;
  r.deviation_ok = r.max_deviation <= r.j_sup + tol;
  r.c1_continuity_ok = r.max_jump_value <= tol && r.max_jump_d1 <= tol;
  r.c2_continuity_ok = r.max_jump_d2 <= tol;
  return r;
}

}  // namespace qg

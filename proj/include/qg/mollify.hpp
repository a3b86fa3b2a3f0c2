#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "qg/geodesics.hpp"
#include "qg/jet.hpp"

namespace qg {

// Flat step on [0,1]: eta(0)=0, eta(1)=1, monotone, flat at both ends.
class Mollifier {
 public:
  enum class Kind { QuinticPoly, BumpIntegral, UserC3 };

  // 10t^3 - 15t^4 + 6t^5
  static Mollifier quintic();
  // zeta(t) = (1/C0) int_0^t exp(-1/(s(1-s))) ds
  static Mollifier bump();
  static Mollifier user(std::string name, std::function<Jet(double)> eval, int smoothness_class = 3);

  Kind kind() const { return kind_; }
  int smoothness_class() const { return smoothness_; }
  const std::string& name() const { return name_; }
  // Throws std::domain_error for t outside [0,1].
  Jet eval(double t) const;

 private:
  Mollifier(Kind k, std::string name, std::function<Jet(double)> f, int s)
      : kind_(k), name_(std::move(name)), f_(std::move(f)), smoothness_(s) {}
  Kind kind_;
  std::string name_;
  std::function<Jet(double)> f_;
  int smoothness_;
};

// Step with flat first derivative only; its second derivative need not vanish at the ends.
class StepFunctionTau {
 public:
  // 3t^2 - 2t^3
  static StepFunctionTau smoothstep();
  static StepFunctionTau user(std::string name, std::function<Jet(double)> eval);

  const std::string& name() const { return name_; }
  Jet eval(double t) const;

 private:
  StepFunctionTau(std::string name, std::function<Jet(double)> f)
      : name_(std::move(name)), f_(std::move(f)) {}
  std::string name_;
  std::function<Jet(double)> f_;
};

// Bump kernel exp(-1/(t(1-t))) and its derivative, zero outside (0,1).
double bump_kernel(double t);
double bump_kernel_d1(double t);

struct BumpNormalization {
  double c0;          // whole-interval adaptive Simpson
  double table_total; // sum of the per-node pieces
};
BumpNormalization bump_normalization();

// Adaptive Simpson on [a,b] to absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth = 50);

struct MollifierReport {
  int smoothness_class = 3;
  bool endpoint_values = false;
  bool flat_first = false;
  bool flat_second = false;  // required only for smoothness_class >= 3
  bool monotone = false;
  bool d1_matches_fd = false;
  bool d2_matches_fd = false;
  double max_d1_fd_error = 0.0;
  double max_d2_fd_error = 0.0;
  double sup_d1 = 0.0;
  double sup_d2 = 0.0;
  std::vector<std::string> failures;
  bool passed() const { return failures.empty(); }
};

MollifierReport verify_mollifier(const Mollifier& m, int n_samples = 256, double tol = 1e-10);
MollifierReport verify_step(const StepFunctionTau& t, int n_samples = 256, double tol = 1e-10);

// Coordinate change on one edge. Non-peak: l*eta(x/l). Peak at q: q*eta(2x/l) on the
// left half, (l-q)*eta((2x-l)/l)+q on the right half. `right_half` selects the branch at l/2.
Jet coordinate_transform(const EdgeProfile& p, const std::function<Jet(double)>& eta, double x,
                         bool right_half = false);
Jet coordinate_transform(const EdgeProfile& p, const Mollifier& m, double x);

class ModifiedDistanceField {
 public:
  ModifiedDistanceField(const MetricGraph& g, DistanceField df, std::function<Jet(double)> eta,
                        int smoothness_class, std::string name);

  const DistanceField& distance() const { return df_; }
  std::size_t num_edges() const { return df_.edges.size(); }
  double length(std::size_t e) const { return df_.edge(e).length; }
  double vertex(std::size_t v) const { return df_.vertex(v); }
  int smoothness_class() const { return smoothness_; }
  const std::string& mollifier_name() const { return name_; }
  double j_sup() const { return j_sup_; }

  bool has_segment_point(std::size_t e) const { return df_.edge(e).kind == EdgeCase::Peak; }
  // l_e/2 on Peak edges.
  double segment_point(std::size_t e) const { return df_.edge(e).length / 2.0; }

  Jet transform(std::size_t e, double x) const;
  // d~ and its derivatives; at a segment point the left branch is used.
  Jet eval(std::size_t e, double x) const;
  // One-sided limit at x; right=true takes the right branch at a segment point.
  Jet eval_side(std::size_t e, double x, bool right) const;

 private:
  DistanceField df_;
  std::function<Jet(double)> eta_;
  int smoothness_;
  std::string name_;
  double j_sup_;
};

ModifiedDistanceField modified_distance(const MetricGraph& g, const DistanceField& df,
                                        const Mollifier& m);
ModifiedDistanceField c1_modified_distance(const MetricGraph& g, const DistanceField& df,
                                           const StepFunctionTau& tau);

struct EdgeProp41 {
  std::size_t edge = 0;
  double sup_d1 = 0.0;
  double sup_d2 = 0.0;
  double max_deviation = 0.0;
  double endpoint_fd1 = 0.0;  // largest one-sided difference at the two ends
  double endpoint_fd2 = 0.0;
};

struct Prop41Report {
  int smoothness_class = 3;
  std::vector<EdgeProp41> per_edge;
  double max_vertex_fd1 = 0.0;   // one-sided first differences at vertices
  double max_vertex_fd2 = 0.0;   // one-sided second differences at vertices
  double max_segment_fd1 = 0.0;  // same at segment points
  double max_segment_fd2 = 0.0;
  double sup_d1 = 0.0;
  double sup_d2 = 0.0;
  double max_deviation = 0.0;  // max |d - d~|
  double j_sup = 0.0;
  double max_jump_value = 0.0;  // across segment points
  double max_jump_d1 = 0.0;
  double max_jump_d2 = 0.0;
  std::size_t segment_points = 0;

  bool first_order_ok = false;
  bool second_order_ok = false;
  bool deviation_ok = false;
  bool c1_continuity_ok = false;
  bool c2_continuity_ok = false;

  // Everything the smoothness class promises.
  bool passed() const;
};

Prop41Report verify_prop41(const ModifiedDistanceField& mdf, int grid_density = 64,
                           double tol = 1e-4, double h = 1e-6);

}  // namespace qg

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qg/calculus.hpp"
#include "qg/function.hpp"
#include "qg/generators.hpp"
#include "qg/geodesics.hpp"
#include "qg/quadrature.hpp"

namespace qg {

// Radial potential V(x) = f(d(x, x0)).
struct Potential {
  enum class Kind { Constant, PowerLaw, Custom };
  Kind kind = Kind::Constant;
  double value = 1.0;  // Constant
  double beta = 0.0;   // PowerLaw: (1 + d)^(-beta)
  std::function<double(double)> custom;

  static Potential constant(double c = 1.0);
  static Potential power_law(double beta);
  static Potential radial(std::function<double(double)> f);

  double at_distance(double d) const;
  GraphFunction on(const MetricGraph& g, const DistanceField& df) const;
  std::string name() const;
};

// "const", "const:2.5", "powerlaw:1.5".
Potential parse_potential(const std::string& text);

struct WindowSums {
  double vertex_sum = 0.0;
  double edge_sum = 0.0;
};

// Sums of mu V^{-1/(sigma-1)} e^{-alpha d} over vertices and edge pieces with lo <= d <= hi.
// Throws std::invalid_argument for sigma <= 1 or a nonpositive sample of V.
WindowSums window_sums(const MetricGraph& g, const DistanceField& df, const GraphFunction& V, double sigma,
                       double lo, double hi, double alpha, const QuadratureRule& quad);

// Closed annulus E_R = {R <= d <= 2R}, no weight.
WindowSums annulus_sums(const MetricGraph& g, const DistanceField& df, const GraphFunction& V, double sigma,
                        double R, const QuadratureRule& quad);

// Complement of the open ball B_R, weighted by e^{-delta d / R}.
WindowSums weighted_tail_sums(const MetricGraph& g, const DistanceField& df, const GraphFunction& V,
                              double sigma, double R, double delta, const QuadratureRule& quad);

struct WeightedNorm {
  double vertex = 0.0;
  double edge = 0.0;
  double total = 0.0;
};

// sum mu |u| e^{-alpha d} + sum_e int |u_e| e^{-alpha d} dx.
WeightedNorm xalpha_norm(const MetricGraph& g, const DistanceField& df, const GraphFunction& u, double alpha,
                         const QuadratureRule& quad);

struct GrowthRow {
  double R = 0.0;
  std::size_t vertices = 0;
  double truncation_radius = 0.0;
  double vertex_sum = 0.0;
  double edge_sum = 0.0;
  double bound = 0.0;  // R^{sigma/(sigma-1)}
  double ratio_v = 0.0;
  double ratio_e = 0.0;
  double tail_share = 0.0;  // weighted variant: share of the sums carried by the outermost level
};

struct GrowthReport {
  std::string family;
  std::string potential;
  double sigma = 2.0;
  double delta = 0.0;  // 0 for the unweighted annulus condition
  std::vector<GrowthRow> rows;
  double exponent_v = 0.0;  // log-log slope of vertex_sum against R
  double exponent_e = 0.0;
  double max_upper_ratio = 0.0;  // largest ratio over the upper half of the sweep
  double median_ratio = 0.0;
  bool holds = false;
  bool truncation_capped = false;  // tail sums cut short by the vertex budget
  bool tail_converged = true;      // every tail_share <= 1e-3
  std::string verdict() const { return holds ? "hypothesis plausibly holds" : "growing"; }
};

// Least-squares slope of log y against log x over the positive pairs.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// Annulus condition on the family at each R (R >= R0 required).
GrowthReport check_growth_thm31(const Family& fam, const Potential& V, double sigma,
                                const std::vector<double>& R_list,
                                const QuadratureRule& quad = QuadratureRule::simpson(64));

// Weighted tail condition with alpha = delta / R. The family is truncated where the weight has
// decayed by e^{-tail_decay}, or earlier if that would exceed max_vertices.
GrowthReport check_growth_thm32(const Family& fam, const Potential& V, double sigma, double delta,
                                const std::vector<double>& R_list,
                                const QuadratureRule& quad = QuadratureRule::simpson(64),
                                double tail_decay = 30.0, std::size_t max_vertices = 200000);

// With V = 1 the annulus sums are the vertex and edge measures of E_R.
struct CorollaryCheck {
  double vertex_sum = 0.0, vertex_measure = 0.0;
  double edge_sum = 0.0, edge_measure = 0.0;
  bool equal = false;
};
CorollaryCheck corollary_check(const MetricGraph& g, const DistanceField& df, double sigma, double R,
                               const QuadratureRule& quad = QuadratureRule::simpson(64));

// Vertex count of fam.truncate(radius) without building it.
std::size_t family_size(const Family& fam, double radius);

}  // namespace qg

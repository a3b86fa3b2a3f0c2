#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "qg/calculus.hpp"
#include "qg/function.hpp"
#include "qg/generators.hpp"
#include "qg/geodesics.hpp"
#include "qg/jet.hpp"
#include "qg/mollify.hpp"

namespace qg {

// phi = 1 on [0,1], 1 - eta(r-1) on [1,2] with the quintic eta, 0 beyond.
class CutoffPhi {
 public:
  static CutoffPhi make();
  // Defined for every real r; r < 0 is on the plateau.
  Jet eval(double r) const;
  // sup of |phi'| and |phi''|.
  double bound() const { return bound_; }

 private:
  double bound_ = 0.0;
};

// psi = 1 on [-j/R, 1], a quintic Hermite bridge on [1,2], exp(-delta r) on [2, inf).
class ExpPsi {
 public:
  // Throws std::invalid_argument for delta <= 0 or R <= 0, std::domain_error if the bridge
  // is not monotone on a fine grid.
  static ExpPsi make(double delta, double R, double j_sup);

  Jet eval(double r) const;
  double delta() const { return delta_; }
  double lower() const { return lower_; }  // -j/R
  // C1 bounds psi, |psi'|, |psi''| by C1 e^{-delta r}; C2 e^{-delta r} <= psi.
  double C1() const { return c1_; }
  double C2() const { return c2_; }
  // Largest psi' seen by the monotonicity scan (<= 0 when monotone).
  double max_slope() const { return max_slope_; }

 private:
  double delta_ = 1.0, lower_ = 0.0, c1_ = 1.0, c2_ = 1.0, max_slope_ = 0.0;
  double b_[6] = {};  // bridge coefficients in powers of (r - 1)
};

// Coefficients of the quintic in t on [0,1] matching (v0,d0,s0) at 0 and (v1,d1,s1) at 1.
std::vector<double> quintic_hermite(double v0, double d0, double s0, double v1, double d1, double s1);

// The returned functions refer to mdf, which must outlive them.
// phi(d~/R)^s. Throws std::invalid_argument if R < R0 or s < 1.
GraphFunction compact_testfn(const MetricGraph& g, const ModifiedDistanceField& mdf, double R,
                             const CutoffPhi& phi, double s);
// psi((d~ - j)/R), positive everywhere.
GraphFunction exp_testfn(const MetricGraph& g, const ModifiedDistanceField& mdf, double R,
                         const ExpPsi& psi);

// Pieces of edge e where lo <= d~ <= hi, solving on each monotone segment by bisection.
std::vector<EdgeInterval> modified_level_intervals(const ModifiedDistanceField& mdf, std::size_t e,
                                                   double lo, double hi);
// Interior points of edge e where d~ crosses `level`.
std::vector<CutPoint> modified_crossings(const ModifiedDistanceField& mdf, std::size_t e, double level);

SupportPartition support_partition(const MetricGraph& g, const ModifiedDistanceField& mdf, double R);

struct RegionSup {
  std::string region;
  double sup = 0.0;
};

struct BoundReport {
  double R = 0.0;
  std::vector<RegionSup> regions;
  double edge_constant = 0.0;    // sup R |f''| (weighted for the exponential family)
  double vertex_constant = 0.0;  // sup R |Delta_V f| on the active vertex set
  double max_kirchhoff = 0.0;
  double max_segment_jump_d1 = 0.0;  // |f'(s_e-) - f'(s_e+)| at segment points
  bool containment_ok = true;
  PointSet a_r;  // {R <= d~ <= 2R} (lemma 42) or {d~ >= R + j} (lemma 43)
  PointSet d_r;  // {R - j <= d <= 2R + j} (lemma 42) or {d >= R} (lemma 43)
  std::size_t samples = 0;
  std::vector<std::string> failures;

  double constant() const { return std::max(edge_constant, vertex_constant); }
  bool passed() const { return failures.empty(); }
};

BoundReport verify_lemma42(const MetricGraph& g, const ModifiedDistanceField& mdf, double R,
                           const CutoffPhi& phi, double s, int grid = 256, double tol = 1e-12);
BoundReport verify_lemma43(const MetricGraph& g, const ModifiedDistanceField& mdf, double R,
                           const ExpPsi& psi, int grid = 256, double tol = 1e-12);

struct SweepRow {
  double R = 0.0;
  std::size_t vertices = 0;
  BoundReport report;
};

// Runs the checks at R, 2R, ..., 2^k R on truncations of the family to radius
// radius_factor * R + 2j.
std::vector<SweepRow> sweep_lemma42(const Family& fam, const Mollifier& m, double R, double s, int k,
                                    int grid = 256, double radius_factor = 2.0);
std::vector<SweepRow> sweep_lemma43(const Family& fam, const Mollifier& m, double R, double delta, int k,
                                    int grid = 256, double radius_factor = 2.0);

// max/min of the positive entries; 1 for fewer than two.
double drift(const std::vector<double>& constants);

}  // namespace qg

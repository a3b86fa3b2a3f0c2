#pragma once

#include <limits>
#include <string>
#include <vector>

#include "qg/function.hpp"
#include "qg/generators.hpp"
#include "qg/geodesics.hpp"
#include "qg/graph.hpp"
#include "qg/growth.hpp"
#include "qg/mollify.hpp"
#include "qg/quadrature.hpp"
#include "qg/testfn.hpp"

namespace qg {

// Uniform interior grid per edge. Global unknowns are the vertices (indices 0..V-1)
// followed by the interior nodes of each edge in order.
struct Mesh {
  std::size_t num_vertices = 0;
  std::vector<std::size_t> nodes;   // interior nodes on each edge
  std::vector<double> h;            // l_e / (n_e + 1)
  std::vector<std::size_t> offset;  // global index of the first interior node
  double h_max = 0.0;

  std::size_t size() const;
  std::size_t node(std::size_t e, std::size_t k) const { return offset[e] + k; }
  double coord(std::size_t e, std::size_t k) const { return double(k + 1) * h[e]; }
  // Global index of point k along edge e, k = 0 at i(e) and k = n_e + 1 at j(e).
  std::size_t along(const MetricGraph& g, std::size_t e, std::size_t k) const;
};

// Throws std::invalid_argument for n_per_edge < 8.
Mesh discretize(const MetricGraph& g, int n_per_edge);

struct CertificateReport {
  double edge_residual = 0.0;    // max of u'' + V|u|^sigma over interior nodes
  double vertex_residual = 0.0;  // max of Delta_V u + V|u|^sigma over checked vertices
  double kirchhoff = 0.0;        // max |K(u)| over checked vertices
  std::size_t nodes_checked = 0;
  std::size_t vertices_checked = 0;
  bool edge_ok = false, vertex_ok = false, kirchhoff_ok = false;
  bool supersolution() const { return edge_ok && vertex_ok && kirchhoff_ok; }
  std::string verdict() const { return supersolution() ? "PASS" : "FAIL"; }
};

// Vertices listed in `caps` carry Dirichlet data and are skipped by the vertex and
// Kirchhoff columns.
CertificateReport check_supersolution(const MetricGraph& g, const Mesh& mesh, const GraphFunction& V,
                                      double sigma, const GraphFunction& u, double tol,
                                      const std::vector<std::size_t>& caps = {});

// Closed ball {d <= R} as a graph of its own. Edge pieces keep their parent's id (with a
// "#k" suffix when an edge splits), cut points become degree-1 vertices "cut:<edge>:<k>".
struct BallDomain {
  MetricGraph graph;
  std::vector<bool> dirichlet;        // cut points and vertices with d = R
  std::vector<std::size_t> parent_vertex;  // npos for cut points
  std::vector<std::size_t> parent_edge;
  std::vector<double> parent_offset;  // piece covers [offset, offset + length] of the parent
  std::vector<double> dist;           // d(v) in the parent graph

  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
  // Pulls a function on the parent graph back to the ball.
  GraphFunction restrict(const GraphFunction& f) const;
};

BallDomain truncate_ball(const MetricGraph& g, const DistanceField& df, double R);

struct NewtonOptions {
  double tol = 1e-10;  // residual infinity norm
  int max_iter = 50;
  double armijo = 1e-4;
  double min_step = 1e-6;
};

struct SolveResult {
  BallDomain domain;
  Mesh mesh;
  std::vector<double> values;  // nodal values, global mesh order
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
  bool fallback = false;      // restarted from the zero state with continuation in the data
  double min_value = 0.0;
  double max_value = 0.0;
  double amplitude = 0.0;     // positive branch only: mu in u = mu^{1/(sigma-1)} w
  std::string message;

  double vertex_value(std::size_t v) const { return values.at(v); }
  // Piecewise linear interpolant of the nodal values on domain.graph.
  GraphFunction interpolant() const;
};

// Central differences for u'' + V u_+^sigma (+ f) = 0 on the interior nodes; at free vertices the
// Kirchhoff closure with one-sided fluxes corrected by h/2 u'' from the equation; u = boundary_value
// at Dirichlet vertices.
// V and forcing live on g. Throws std::invalid_argument on bad data.
SolveResult solve_truncated(const MetricGraph& g, double R, const GraphFunction& V, double sigma,
                            double boundary_value, int n_per_edge, const NewtonOptions& opts = {},
                            const GraphFunction* forcing = nullptr);

// Positive solution of u'' + V u_+^sigma = 0 with zero Dirichlet data on the boundary of B_R,
// found as w with w(x0) = 1 and w'' + mu V w_+^sigma = 0; then u = mu^{1/(sigma-1)} w.
SolveResult solve_positive_branch(const MetricGraph& g, double R, const GraphFunction& V, double sigma,
                                  int n_per_edge, const NewtonOptions& opts = {});

struct ManufacturedRow {
  int n_per_edge = 0;
  double h = 0.0;
  double max_error = 0.0;
  double kirchhoff_defect = 0.0;  // two-point one-sided differences at the free vertices
  int iterations = 0;
  double residual = 0.0;
};

struct ManufacturedReport {
  std::vector<ManufacturedRow> rows;
  std::vector<double> ratios;  // error(h) / error(h/2)
  bool second_order() const;   // every ratio in [3.5, 4.5]
};

// u*(x) = cos(pi x / 2l) on every spoke of the star S_k (center is the base), V constant,
// refined by halving h starting from n_per_edge + 1 = n0. Requires V <= (pi/2l)^2 so the forcing
// stays nonnegative.
ManufacturedReport manufactured_convergence(std::size_t spokes, double length, double V, double sigma,
                                            int n0 = 16, int refinements = 3);

struct ProbeRow {
  double R = 0.0;
  std::size_t unknowns = 0;
  double core_sup = 0.0;
  double mass = 0.0;  // int V u^sigma over the ball
  double scale = 0.0;  // factor applied to the positive branch to respect the cap
  int iterations = 0;
  double residual = 0.0;
  bool converged = true;
  std::string message;
};

struct ProbeTable {
  std::string family;
  std::string potential;
  double sigma = 2.0;
  double boundary_value = 0.0;
  double core_radius = 0.0;
  std::vector<ProbeRow> rows;

  bool strictly_decreasing() const;
  // core_sup of the last row over that of the first (1 when the first is 0).
  double final_ratio() const;
};

// For each R: the largest multiple of the positive branch on B_R whose maximum does not exceed
// boundary_value; core_sup is taken over B_{R0}. Rows run concurrently.
ProbeTable liouville_probe(const Family& fam, const Potential& V, double sigma,
                           const std::vector<double>& R_list, double boundary_value, int n_per_edge = 8);

struct ChainLine {
  std::string label;
  double lhs = 0.0;
  double rhs = 0.0;
  double u_free = 0.0;  // part of rhs that does not depend on u
  double slack() const { return rhs - lhs; }
};

struct ChainReport {
  std::string mode;
  double R = 0.0;
  double sigma = 2.0;
  double parameter = 0.0;  // s (compact) or delta (weighted)
  std::vector<ChainLine> lines;
  double flux = 0.0;        // sum over vertices of test(v) K(u)(v)
  double budget = 1e-8;     // quadrature tolerance budget for the slacks
  double edge_constant = 0.0;
  double vertex_constant = 0.0;
  double tail_mass = 0.0;
  bool precondition_ok = true;
  std::string precondition;

  double min_slack() const;
  bool passed() const { return min_slack() >= -budget; }
};

// Compact test function phi(d~/R)^s. Requires s > max(2, sigma/(sigma-1)).
ChainReport apriori_check_lemma41(const MetricGraph& g, const ModifiedDistanceField& mdf, const GraphFunction& u,
                                  const GraphFunction& V, double sigma, double R, double s,
                                  const QuadratureRule& quad = QuadratureRule::simpson(64));

// Exponential test function psi((d~ - j)/R), Young splits with epsilon.
ChainReport apriori_check_lemma45(const MetricGraph& g, const ModifiedDistanceField& mdf, const GraphFunction& u,
                                  const GraphFunction& V, double sigma, double R, double delta,
                                  const QuadratureRule& quad = QuadratureRule::simpson(64),
                                  double epsilon = 0.1);

enum class ChainMode { Compact, Weighted };

// Hoelder form of the final bounds: mass on the ball <= sum of C (tail mass)^{1/sigma} - flux.
ChainReport theorem_chain_check(const MetricGraph& g, const ModifiedDistanceField& mdf, const GraphFunction& u,
                                const GraphFunction& V, double sigma, double R, double s_or_delta,
                                ChainMode mode, const QuadratureRule& quad = QuadratureRule::simpson(64));

}  // namespace qg

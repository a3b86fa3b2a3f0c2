#pragma once

#include <functional>
#include <vector>

#include "qg/function.hpp"
#include "qg/geodesics.hpp"
#include "qg/graph.hpp"
#include "qg/quadrature.hpp"

namespace qg {

// Interior breakpoints per edge (e.g. segment points) that panels must not straddle.
using EdgeBreaks = std::vector<std::vector<double>>;

double integrate_vertex(const MetricGraph& g, const GraphFunction& f);
double integrate_edge(const MetricGraph& g, const GraphFunction& f, const QuadratureRule& quad,
                      const EdgeBreaks* breaks = nullptr);
double integrate_graph(const MetricGraph& g, const GraphFunction& f, const QuadratureRule& quad,
                       const EdgeBreaks* breaks = nullptr);

// Sum over edges of the integral of integrand(e, x) over the whole edge.
double integrate_edgewise(const MetricGraph& g, const std::function<double(std::size_t, double)>& integrand,
                          const QuadratureRule& quad, const EdgeBreaks* breaks = nullptr);
// Same over a list of edge pieces.
double integrate_intervals(const std::vector<EdgeInterval>& pieces,
                           const std::function<double(std::size_t, double)>& integrand,
                           const QuadratureRule& quad, const EdgeBreaks* breaks = nullptr);

// (1/mu(v)) sum_{e at v} omega(e) (f(other end) - f(v)); parallel edges count separately.
double vertex_laplacian(const MetricGraph& g, const GraphFunction& f, std::size_t v);

// f''_e(x) for 0 < x < l_e.
double edge_second_derivative(const MetricGraph& g, const GraphFunction& f, std::size_t e, double x,
                              DerivativeAudit* audit = nullptr);

// +f'_e(l_e) at j(e), -f'_e(0) at i(e).
double normal_derivative(const MetricGraph& g, const GraphFunction& f, std::size_t e, std::size_t v,
                         DerivativeAudit* audit = nullptr);

double kirchhoff(const MetricGraph& g, const GraphFunction& f, std::size_t v,
                 DerivativeAudit* audit = nullptr);

// int gfun * Delta_V f dmu_V + int gfun * f'' dx.
double pairing(const MetricGraph& g, const GraphFunction& f, const GraphFunction& gfun,
               const QuadratureRule& quad, const EdgeBreaks* breaks = nullptr,
               DerivativeAudit* audit = nullptr);

// Support of a compactly supported test function phi(d~/R).
struct CutPoint {
  std::size_t edge;
  double x;
};

struct SupportPartition {
  double R = 0.0;
  std::vector<std::size_t> v1;           // vertices with d <= 2R
  std::vector<std::size_t> v1_boundary;  // vertices of v1 where the test function vanishes
  std::vector<CutPoint> v2;              // interior points of edges where d~ = 2R
  std::vector<std::size_t> vc_vertices;  // vertex part of Vc = boundary of v1 together with v2
  std::vector<std::size_t> vprime;       // vertices of (v1 minus its boundary), plus vc vertices
  std::vector<CutPoint> v3;              // d~ = R crossings (C^1 construction)
  std::vector<CutPoint> v4;              // segment points inside the support (C^1 construction)
  std::vector<EdgeInterval> intervals;   // edge pieces where d~ < 2R
  EdgeBreaks breaks;                     // segment points inside the pieces
};

struct IbpReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;            // |lhs - rhs|
  double vertex_symmetry = 0.0;     // sum mu (phi Delta u - u Delta phi)
  double boundary_u = 0.0;          // sum over piece ends of [phi u']
  double boundary_phi = 0.0;        // sum over piece ends of [u phi']
  double identity_residual = 0.0;   // |lhs - rhs - (vertex_symmetry + boundary_u - boundary_phi)|
  double max_kirchhoff_defect = 0.0;
  double truncation_flux = 0.0;     // weighted variant: flux through graph boundary vertices
  double weighted_norm = 0.0;       // weighted variant: int |u| e^{-alpha d}
  std::size_t fd_uses = 0;
  bool kirchhoff_flagged = false;
  bool passed(double tol) const { return residual <= tol && !kirchhoff_flagged; }
};

IbpReport verify_ibp_compact(const MetricGraph& g, const GraphFunction& u, const GraphFunction& phi_s,
                             const SupportPartition& support, const QuadratureRule& quad,
                             double kirchhoff_tol = 1e-8);

IbpReport verify_ibp_weighted(const MetricGraph& g, const DistanceField& df, const GraphFunction& u,
                              const GraphFunction& psi, const QuadratureRule& quad, double alpha,
                              const EdgeBreaks* breaks = nullptr);

}  // namespace qg

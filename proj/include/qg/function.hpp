#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <functional>
#include <vector>

#include "qg/graph.hpp"
#include "qg/jet.hpp"

namespace qg {

// Per-edge evaluator on [0, l_e]. Only the first `analytic_order` derivatives in the
// returned Jet are meaningful; the rest are filled by finite differences on demand.
struct EdgeFunction {
  std::function<Jet(double)> jet;
  int analytic_order = 2;
};

// Counts finite-difference fallbacks.
struct DerivativeAudit {
  std::atomic<std::size_t> fd_first{0};
  std::atomic<std::size_t> fd_second{0};
  std::size_t total() const { return fd_first + fd_second; }
};

class GraphFunction {
 public:
  GraphFunction() = default;
  // A NaN vertex value means "missing".
  GraphFunction(std::vector<double> vertex_values, std::vector<EdgeFunction> edges);

  // Vertex values taken from the edge evaluators at the endpoints.
  static GraphFunction from_edges(const MetricGraph& g, std::vector<EdgeFunction> edges);
  static GraphFunction constant(const MetricGraph& g, double c);
  // Values only on vertices; every edge is the affine interpolant.
  static GraphFunction vertex_only(const MetricGraph& g, std::vector<double> values);

  std::size_t num_vertices() const { return vertex_values_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  bool has_vertex(std::size_t v) const;
  // Throws std::out_of_range if missing.
  double vertex(std::size_t v) const;
  const std::vector<double>& vertex_values() const { return vertex_values_; }
  const EdgeFunction& edge(std::size_t e) const { return edges_.at(e); }
  double value(std::size_t e, double x) const { return edges_.at(e).jet(x).v; }

  // |f_e(0) - f(i(e))| and |f_e(l_e) - f(j(e))| within tol on every edge.
  bool continuous(const MetricGraph& g, double tol = 1e-9) const;

  // Finite-difference step used for edge e.
  static double fd_step(double length) { return std::min(1e-5, length / 1000.0); }

  // First and second derivative on the closed edge, falling back to finite differences
  // (one-sided near the ends) when the evaluator does not provide them.
  double d1(std::size_t e, double length, double x, DerivativeAudit* audit = nullptr) const;
  double d2(std::size_t e, double length, double x, DerivativeAudit* audit = nullptr) const;

 private:
  std::vector<double> vertex_values_;
  std::vector<EdgeFunction> edges_;
};

// f(x) = c0 + c1 x + c2 x^2 on one edge, with analytic derivatives.
EdgeFunction quadratic_edge(double c0, double c1, double c2);

}  // namespace qg

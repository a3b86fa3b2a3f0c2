#include "qg/function.hpp"

#include <cmath>
#include <stdexcept>

namespace qg {

GraphFunction::GraphFunction(std::vector<double> vertex_values, std::vector<EdgeFunction> edges)
    : vertex_values_(std::move(vertex_values)), edges_(std::move(edges)) {
  for (const auto& e : edges_)
    if (!e.jet) throw std::invalid_argument("edge evaluator missing");
}

GraphFunction GraphFunction::from_edges(const MetricGraph& g, std::vector<EdgeFunction> edges) {
  if (edges.size() != g.num_edges()) throw std::invalid_argument("edge count mismatch");
  std::vector<double> vals(g.num_vertices(), NAN);
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    if (std::isnan(vals[ed.from])) vals[ed.from] = edges[e].jet(0.0).v;
    if (std::isnan(vals[ed.to])) vals[ed.to] = edges[e].jet(ed.length).v;
  }
  return GraphFunction(std::move(vals), std::move(edges));
}

GraphFunction GraphFunction::constant(const MetricGraph& g, double c) {
  std::vector<EdgeFunction> edges(g.num_edges(), EdgeFunction{[c](double) { return Jet{c, 0, 0}; }, 2});
  return GraphFunction(std::vector<double>(g.num_vertices(), c), std::move(edges));
}

GraphFunction GraphFunction::vertex_only(const MetricGraph& g, std::vector<double> values) {
  if (values.size() != g.num_vertices()) throw std::invalid_argument("vertex count mismatch");
  std::vector<EdgeFunction> edges;
  for (const auto& ed : g.edges()) {
    const double a = values[ed.from], b = values[ed.to], l = ed.length;
    edges.push_back({[a, b, l](double x) { return Jet{a + (b - a) * x / l, (b - a) / l, 0.0}; }, 2});
  }
  return GraphFunction(std::move(values), std::move(edges));
}

bool GraphFunction::has_vertex(std::size_t v) const {
  return v < vertex_values_.size() && !std::isnan(vertex_values_[v]);
}

double GraphFunction::vertex(std::size_t v) const {
  if (!has_vertex(v)) throw std::out_of_range("missing vertex value at index " + std::to_string(v));
  return vertex_values_[v];
}

bool GraphFunction::continuous(const MetricGraph& g, double tol) const {
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    if (!has_vertex(ed.from) || !has_vertex(ed.to)) return false;
    if (std::abs(value(e, 0.0) - vertex(ed.from)) > tol) return false;
    if (std::abs(value(e, ed.length) - vertex(ed.to)) > tol) return false;
  }
  return true;
}

double GraphFunction::d1(std::size_t e, double l, double x, DerivativeAudit* audit) const {
  const EdgeFunction& f = edges_.at(e);
  if (f.analytic_order >= 1) return f.jet(x).d1;
  if (audit) ++audit->fd_first;
  const double h = fd_step(l);
  auto v = [&](double y) { return f.jet(y).v; };
  if (x - h < 0.0) return (-3 * v(x) + 4 * v(x + h) - v(x + 2 * h)) / (2 * h);
  if (x + h > l) return (3 * v(x) - 4 * v(x - h) + v(x - 2 * h)) / (2 * h);
  return (v(x + h) - v(x - h)) / (2 * h);
}

double GraphFunction::d2(std::size_t e, double l, double x, DerivativeAudit* audit) const {
  const EdgeFunction& f = edges_.at(e);
  if (f.analytic_order >= 2) return f.jet(x).d2;
  if (audit) ++audit->fd_second;
  const double h = fd_step(l);
  if (f.analytic_order == 1) {
    auto d = [&](double y) { return f.jet(y).d1; };
    if (x - h < 0.0) return (-3 * d(x) + 4 * d(x + h) - d(x + 2 * h)) / (2 * h);
    if (x + h > l) return (3 * d(x) - 4 * d(x - h) + d(x - 2 * h)) / (2 * h);
    return (d(x + h) - d(x - h)) / (2 * h);
  }
  auto v = [&](double y) { return f.jet(y).v; };
  if (x - h < 0.0) return (2 * v(x) - 5 * v(x + h) + 4 * v(x + 2 * h) - v(x + 3 * h)) / (h * h);
  if (x + h > l) return (2 * v(x) - 5 * v(x - h) + 4 * v(x - 2 * h) - v(x - 3 * h)) / (h * h);
  return (v(x + h) - 2 * v(x) + v(x - h)) / (h * h);
}

EdgeFunction quadratic_edge(double c0, double c1, double c2) {
  return {[=](double x) { return Jet{c0 + x * (c1 + c2 * x), c1 + 2 * c2 * x, 2 * c2}; }, 2};
}

}  // namespace qg

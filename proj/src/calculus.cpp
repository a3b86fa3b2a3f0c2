#include "qg/calculus.hpp"

#include <cmath>
#include <stdexcept>

#include "qg/parallel.hpp"

namespace qg {

namespace {

const std::vector<double>& no_breaks() {
  static const std::vector<double> empty;
  return empty;
}

const std::vector<double>& breaks_for(const EdgeBreaks* b, std::size_t e) {
  return (b && e < b->size()) ? (*b)[e] : no_breaks();
}

}  // namespace

double integrate_vertex(const MetricGraph& g, const GraphFunction& f) {
  std::vector<double> terms(g.num_vertices());
  for (std::size_t v = 0; v < g.num_vertices(); ++v) terms[v] = g.vertex(v).mu * f.vertex(v);
  return pairwise_sum(terms);
}

double integrate_edgewise(const MetricGraph& g, const std::function<double(std::size_t, double)>& integrand,
                          const QuadratureRule& quad, const EdgeBreaks* breaks) {
  quad.validate();
  std::vector<double> parts(g.num_edges());
  parallel_for(g.num_edges(), [&](std::size_t e) {
    parts[e] = quad.integrate([&](double x) { return integrand(e, x); }, 0.0, g.edge(e).length,
                              breaks_for(breaks, e));
  });
  return pairwise_sum(parts);
}

double integrate_intervals(const std::vector<EdgeInterval>& pieces,
                           const std::function<double(std::size_t, double)>& integrand,
                           const QuadratureRule& quad, const EdgeBreaks* breaks) {
  quad.validate();
  std::vector<double> parts(pieces.size());
  parallel_for(pieces.size(), [&](std::size_t k) {
    const EdgeInterval& iv = pieces[k];
    parts[k] = quad.integrate([&](double x) { return integrand(iv.edge, x); }, iv.lo, iv.hi,
                              breaks_for(breaks, iv.edge));
  });
  return pairwise_sum(parts);
}

double integrate_edge(const MetricGraph& g, const GraphFunction& f, const QuadratureRule& quad,
                      const EdgeBreaks* breaks) {
  return integrate_edgewise(g, [&](std::size_t e, double x) { return f.value(e, x); }, quad, breaks);
}

double integrate_graph(const MetricGraph& g, const GraphFunction& f, const QuadratureRule& quad,
                       const EdgeBreaks* breaks) {
  return integrate_vertex(g, f) + integrate_edge(g, f, quad, breaks);
}

double vertex_laplacian(const MetricGraph& g, const GraphFunction& f, std::size_t v) {
  const double fv = f.vertex(v);
  double s = 0.0;
  for (const auto& inc : g.incident(v))
    s += g.edge(inc.edge).omega * (f.vertex(g.other_end(inc.edge, v)) - fv);
  return s / g.vertex(v).mu;
}

double edge_second_derivative(const MetricGraph& g, const GraphFunction& f, std::size_t e, double x,
                              DerivativeAudit* audit) {
  const double l = g.edge(e).length;
  if (!(x > 0.0 && x < l))
    throw std::out_of_range("edge Laplacian is defined on the open edge only");
  return f.d2(e, l, x, audit);
}

double normal_derivative(const MetricGraph& g, const GraphFunction& f, std::size_t e, std::size_t v,
                         DerivativeAudit* audit) {
  const Edge& ed = g.edge(e);
  if (v == ed.to) return f.d1(e, ed.length, ed.length, audit);
  if (v == ed.from) return -f.d1(e, ed.length, 0.0, audit);
  throw std::invalid_argument("vertex '" + g.vertex(v).id + "' is not an endpoint of edge '" + ed.id + "'");
}

double kirchhoff(const MetricGraph& g, const GraphFunction& f, std::size_t v, DerivativeAudit* audit) {
  double s = 0.0;
  for (const auto& inc : g.incident(v)) s += normal_derivative(g, f, inc.edge, v, audit);
  return s;
}

double pairing(const MetricGraph& g, const GraphFunction& f, const GraphFunction& gfun,
               const QuadratureRule& quad, const EdgeBreaks* breaks, DerivativeAudit* audit) {
  std::vector<double> vt(g.num_vertices());
  for (std::size_t v = 0; v < g.num_vertices(); ++v)
    vt[v] = g.vertex(v).mu * gfun.vertex(v) * vertex_laplacian(g, f, v);
  const double edge_part = integrate_edgewise(
      g,
      [&](std::size_t e, double x) { return gfun.value(e, x) * f.d2(e, g.edge(e).length, x, audit); },
      quad, breaks);
  return pairwise_sum(vt) + edge_part;
}

IbpReport verify_ibp_compact(const MetricGraph& g, const GraphFunction& u, const GraphFunction& phi_s,
                             const SupportPartition& support, const QuadratureRule& quad,
                             double kirchhoff_tol) {
  DerivativeAudit audit;
  IbpReport r;

  for (const CutPoint& c : support.v2)
    if (std::abs(phi_s.value(c.edge, c.x)) > 1e-12)
      throw std::invalid_argument("support partition inconsistent: test function nonzero at a cut point");
  for (std::size_t v : support.v1_boundary)
    if (std::abs(phi_s.vertex(v)) > 1e-12)
      throw std::invalid_argument("support partition inconsistent: test function nonzero on the boundary");

  std::vector<double> lv(g.num_vertices()), rv(g.num_vertices());
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    const double mu = g.vertex(v).mu;
    lv[v] = mu * phi_s.vertex(v) * vertex_laplacian(g, u, v);
    rv[v] = mu * u.vertex(v) * vertex_laplacian(g, phi_s, v);
  }
  const double lvs = pairwise_sum(lv), rvs = pairwise_sum(rv);
  const double le = integrate_intervals(
      support.intervals,
      [&](std::size_t e, double x) { return phi_s.value(e, x) * u.d2(e, g.edge(e).length, x, &audit); },
      quad, &support.breaks);
  const double re = integrate_intervals(
      support.intervals,
      [&](std::size_t e, double x) { return u.value(e, x) * phi_s.d2(e, g.edge(e).length, x, &audit); },
      quad, &support.breaks);
  r.lhs = lvs + le;
  r.rhs = rvs + re;
  r.residual = std::abs(r.lhs - r.rhs);
  r.vertex_symmetry = lvs - rvs;

  std::vector<double> bu, bp;
  for (const EdgeInterval& iv : support.intervals) {
    const double l = g.edge(iv.edge).length;
    auto end = [&](double x) {
      return std::pair{phi_s.value(iv.edge, x) * u.d1(iv.edge, l, x, &audit),
                       u.value(iv.edge, x) * phi_s.d1(iv.edge, l, x, &audit)};
    };
    auto [bu_hi, bp_hi] = end(iv.hi);
    auto [bu_lo, bp_lo] = end(iv.lo);
    bu.push_back(bu_hi - bu_lo);
    bp.push_back(bp_hi - bp_lo);
  }
  r.boundary_u = pairwise_sum(bu);
  r.boundary_phi = pairwise_sum(bp);
  r.identity_residual =
      std::abs(r.lhs - r.rhs - (r.vertex_symmetry + r.boundary_u - r.boundary_phi));

  for (std::size_t v : support.vprime) {
    if (phi_s.vertex(v) == 0.0) continue;
    r.max_kirchhoff_defect = std::max(r.max_kirchhoff_defect, std::abs(kirchhoff(g, u, v, &audit)));
  }
  r.kirchhoff_flagged = r.max_kirchhoff_defect > kirchhoff_tol;
  r.fd_uses = audit.total();
  return r;
}

IbpReport verify_ibp_weighted(const MetricGraph& g, const DistanceField& df, const GraphFunction& u,
                              const GraphFunction& psi, const QuadratureRule& quad, double alpha,
                              const EdgeBreaks* breaks) {
  DerivativeAudit audit;
  IbpReport r;

  std::vector<double> wn(g.num_vertices());
  for (std::size_t v = 0; v < g.num_vertices(); ++v)
    wn[v] = g.vertex(v).mu * std::abs(u.vertex(v)) * std::exp(-alpha * df.vertex(v));
  r.weighted_norm = pairwise_sum(wn) + integrate_edgewise(
                                           g,
                                           [&](std::size_t e, double x) {
                                             return std::abs(u.value(e, x)) * std::exp(-alpha * df.edge(e).at(x));
                                           },
                                           quad, breaks);
  if (!std::isfinite(r.weighted_norm)) throw std::invalid_argument("u is not in the weighted space");

  std::vector<double> lv(g.num_vertices()), rv(g.num_vertices()), flux(g.num_vertices());
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    const double mu = g.vertex(v).mu;
    lv[v] = mu * psi.vertex(v) * vertex_laplacian(g, u, v);
    rv[v] = mu * u.vertex(v) * vertex_laplacian(g, psi, v);
    const double ku = kirchhoff(g, u, v, &audit);
    const double kp = kirchhoff(g, psi, v, &audit);
    flux[v] = psi.vertex(v) * ku - u.vertex(v) * kp;
    r.max_kirchhoff_defect = std::max(r.max_kirchhoff_defect, std::abs(ku));
  }
  const double lvs = pairwise_sum(lv), rvs = pairwise_sum(rv);
  const double le = integrate_edgewise(
      g, [&](std::size_t e, double x) { return psi.value(e, x) * u.d2(e, g.edge(e).length, x, &audit); },
      quad, breaks);
  const double re = integrate_edgewise(
      g, [&](std::size_t e, double x) { return u.value(e, x) * psi.d2(e, g.edge(e).length, x, &audit); },
      quad, breaks);
  r.lhs = lvs + le;
  r.rhs = rvs + re;
  r.vertex_symmetry = lvs - rvs;
  r.truncation_flux = pairwise_sum(flux);
  r.residual = std::abs(r.lhs - r.rhs - r.truncation_flux);
  r.identity_residual = std::abs(r.lhs - r.rhs - r.truncation_flux - r.vertex_symmetry);
  r.fd_uses = audit.total();
  return r;
}

}  // namespace qg

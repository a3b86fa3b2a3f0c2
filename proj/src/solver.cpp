#include "qg/solver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "qg/calculus.hpp"
#include "qg/parallel.hpp"

namespace qg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double pos_pow(double u, double sigma) { return u > 0.0 ? std::pow(u, sigma) : 0.0; }
double pos_pow_d(double u, double sigma) { return u > 0.0 ? sigma * std::pow(u, sigma - 1.0) : 0.0; }

}  // namespace

// ---------------------------------------------------------------- mesh

std::size_t Mesh::size() const {
  std::size_t n = num_vertices;
  for (std::size_t k : nodes) n += k;
  return n;
}

std::size_t Mesh::along(const MetricGraph& g, std::size_t e, std::size_t k) const {
  if (k == 0) return g.edge(e).from;
  if (k == nodes[e] + 1) return g.edge(e).to;
  return offset[e] + k - 1;
}

Mesh discretize(const MetricGraph& g, int n_per_edge) {
  if (n_per_edge < 8) throw std::invalid_argument("n_per_edge must be at least 8");
  Mesh m;
  m.num_vertices = g.num_vertices();
  std::size_t next = m.num_vertices;
  for (const Edge& e : g.edges()) {
    m.nodes.push_back(std::size_t(n_per_edge));
    m.h.push_back(e.length / (n_per_edge + 1));
    m.offset.push_back(next);
    next += std::size_t(n_per_edge);
    m.h_max = std::max(m.h_max, m.h.back());
  }
  return m;
}

// ---------------------------------------------------------------- certificate

CertificateReport check_supersolution(const MetricGraph& g, const Mesh& mesh, const GraphFunction& V,
                                      double sigma, const GraphFunction& u, double tol,
                                      const std::vector<std::size_t>& caps) {
  CertificateReport r;
  std::vector<double> edge_max(g.num_edges(), -kInf);
  parallel_for(g.num_edges(), [&](std::size_t e) {
    const double l = g.edge(e).length;
    for (std::size_t k = 0; k < mesh.nodes[e]; ++k) {
      const double x = mesh.coord(e, k);
      const double res = u.d2(e, l, x) + V.value(e, x) * std::pow(std::abs(u.value(e, x)), sigma);
      edge_max[e] = std::max(edge_max[e], res);
    }
  });
  double em = -kInf;
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    em = std::max(em, edge_max[e]);
    r.nodes_checked += mesh.nodes[e];
  }
  r.edge_residual = r.nodes_checked ? em : 0.0;

  double vm = -kInf, km = 0.0;
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    if (std::find(caps.begin(), caps.end(), v) != caps.end()) continue;
    ++r.vertices_checked;
    vm = std::max(vm, vertex_laplacian(g, u, v) + V.vertex(v) * std::pow(std::abs(u.vertex(v)), sigma));
    km = std::max(km, std::abs(kirchhoff(g, u, v)));
  }
  r.vertex_residual = r.vertices_checked ? vm : 0.0;
  r.kirchhoff = km;
  r.edge_ok = r.edge_residual <= tol;
  r.vertex_ok = r.vertex_residual <= tol;
  r.kirchhoff_ok = r.kirchhoff <= tol;
  return r;
}

// ---------------------------------------------------------------- ball truncation

GraphFunction BallDomain::restrict(const GraphFunction& f) const {
  std::vector<EdgeFunction> edges;
  for (std::size_t e = 0; e < graph.num_edges(); ++e) {
    const EdgeFunction pe = f.edge(parent_edge[e]);
    const double off = parent_offset[e];
    edges.push_back({[pe, off](double x) { return pe.jet(off + x); }, pe.analytic_order});
  }
  GraphFunction tmp = GraphFunction::from_edges(graph, edges);
  std::vector<double> vals = tmp.vertex_values();
  for (std::size_t v = 0; v < vals.size(); ++v)
    if (parent_vertex[v] != npos && f.has_vertex(parent_vertex[v])) vals[v] = f.vertex(parent_vertex[v]);
  return GraphFunction(std::move(vals), std::move(edges));
}

BallDomain truncate_ball(const MetricGraph& g, const DistanceField& df, double R) {
  if (!(R > 0.0)) throw std::invalid_argument("radius must be positive");
  const double tol = 1e-12 * std::max(1.0, R);
  BallDomain d;
  MetricGraph::Builder b;
  std::vector<bool> dir;
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    if (df.vertex(v) > R + tol) continue;
    b.vertex(g.vertex(v).id, g.vertex(v).mu);
    dir.push_back(std::abs(df.vertex(v) - R) <= tol);
    d.parent_vertex.push_back(v);
    d.dist.push_back(df.vertex(v));
  }
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    const double l = ed.length;
    auto raw = edge_level_intervals(df.edge(e), e, -kInf, R);
    std::vector<EdgeInterval> pieces;
    for (const auto& iv : raw) {
      if (!pieces.empty() && std::abs(pieces.back().hi - iv.lo) <= 1e-15 * l)
        pieces.back().hi = iv.hi;
      else
        pieces.push_back(iv);
    }
    std::erase_if(pieces, [&](const EdgeInterval& iv) { return iv.hi - iv.lo <= 1e-12 * l; });
    int cuts = 0;
    auto endpoint = [&](double x, std::size_t parent) -> std::string {
      if (parent != BallDomain::npos) return g.vertex(parent).id;
      const std::string id = "cut:" + ed.id + ":" + std::to_string(cuts++);
      b.vertex(id, 1.0);
      dir.push_back(true);
      d.parent_vertex.push_back(BallDomain::npos);
      d.dist.push_back(df.edge(e).at(x));
      return id;
    };
    for (std::size_t k = 0; k < pieces.size(); ++k) {
      const double lo = pieces[k].lo <= 1e-15 * l ? 0.0 : pieces[k].lo;
      const double hi = pieces[k].hi >= l * (1 - 1e-15) ? l : pieces[k].hi;
      const std::string from = endpoint(lo, lo == 0.0 ? ed.from : BallDomain::npos);
      const std::string to = endpoint(hi, hi == l ? ed.to : BallDomain::npos);
      const std::string id = pieces.size() == 1 ? ed.id : ed.id + "#" + std::to_string(k);
      b.edge(id, from, to, hi - lo, ed.omega);
      d.parent_edge.push_back(e);
      d.parent_offset.push_back(lo);
    }
  }
  b.base(g.vertex(g.base()).id);
  d.graph = std::move(b).build();
  d.dirichlet = std::move(dir);
  return d;
}

// ---------------------------------------------------------------- discrete system

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

// u'' + mu V u_+^sigma + f = 0 on interior nodes, Kirchhoff closure at free vertices,
// Dirichlet rows elsewhere. With `augmented`, mu is the extra unknown and the last row fixes
// u(base) = 1; otherwise mu = 1.
struct System {
  const MetricGraph& g;
  const Mesh& mesh;
  std::vector<bool> dirichlet;
  double bv = 0.0;
  double sigma = 2.0;
  std::vector<std::vector<double>> Vn, fn;  // per edge, per interior node
  std::vector<std::array<double, 2>> Vend, fend;  // per edge, at coordinate 0 and l
  bool augmented = false;

  std::size_t n() const { return mesh.size() + (augmented ? 1 : 0); }

  double mu(const Vec& x) const { return augmented ? x[Eigen::Index(mesh.size())] : 1.0; }

  void residual(const Vec& x, Vec& F) const {
    F.resize(Eigen::Index(n()));
    const double m = mu(x);
    for (std::size_t v = 0; v < g.num_vertices(); ++v) {
      if (dirichlet[v]) {
        F[Eigen::Index(v)] = x[Eigen::Index(v)] - bv;
        continue;
      }
      // Outward derivative from u(h) = u(0) + h u'(0) + h^2/2 u''(0) with u'' taken from the equation.
      double s = 0.0;
      const double uv = x[Eigen::Index(v)];
      for (const auto& inc : g.incident(v)) {
        const std::size_t e = inc.edge;
        const int side = inc.at_final ? 1 : 0;
        const std::size_t a = mesh.along(g, e, inc.at_final ? mesh.nodes[e] : 1);
        const double h = mesh.h[e];
        s += (uv - x[Eigen::Index(a)]) / h -
             0.5 * h * (m * Vend[e][side] * pos_pow(uv, sigma) + (fend.empty() ? 0.0 : fend[e][side]));
      }
      F[Eigen::Index(v)] = s;
    }
    parallel_for(g.num_edges(), [&](std::size_t e) {
      const double h2 = mesh.h[e] * mesh.h[e];
      for (std::size_t k = 0; k < mesh.nodes[e]; ++k) {
        const double um = x[Eigen::Index(mesh.along(g, e, k))];
        const double u0 = x[Eigen::Index(mesh.along(g, e, k + 1))];
        const double up = x[Eigen::Index(mesh.along(g, e, k + 2))];
        F[Eigen::Index(mesh.node(e, k))] =
            (um - 2.0 * u0 + up) / h2 + m * Vn[e][k] * pos_pow(u0, sigma) + (fn.empty() ? 0.0 : fn[e][k]);
      }
    });
    if (augmented) F[Eigen::Index(mesh.size())] = x[Eigen::Index(g.base())] - 1.0;
  }

  SpMat jacobian(const Vec& x) const {
    std::vector<Eigen::Triplet<double>> t;
    const double m = mu(x);
    const auto N = Eigen::Index(mesh.size());
    for (std::size_t v = 0; v < g.num_vertices(); ++v) {
      const auto r = Eigen::Index(v);
      if (dirichlet[v]) {
        t.emplace_back(r, r, 1.0);
        continue;
      }
      const double uv = x[r];
      for (const auto& inc : g.incident(v)) {
        const std::size_t e = inc.edge;
        const int side = inc.at_final ? 1 : 0;
        const std::size_t a = mesh.along(g, e, inc.at_final ? mesh.nodes[e] : 1);
        const double h = mesh.h[e];
        t.emplace_back(r, r, 1.0 / h - 0.5 * h * m * Vend[e][side] * pos_pow_d(uv, sigma));
        t.emplace_back(r, Eigen::Index(a), -1.0 / h);
        if (augmented) t.emplace_back(r, N, -0.5 * h * Vend[e][side] * pos_pow(uv, sigma));
      }
    }
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
      const double h2 = mesh.h[e] * mesh.h[e];
      for (std::size_t k = 0; k < mesh.nodes[e]; ++k) {
        const auto r = Eigen::Index(mesh.node(e, k));
        const double u0 = x[r];
        t.emplace_back(r, Eigen::Index(mesh.along(g, e, k)), 1.0 / h2);
        t.emplace_back(r, r, -2.0 / h2 + m * Vn[e][k] * pos_pow_d(u0, sigma));
        t.emplace_back(r, Eigen::Index(mesh.along(g, e, k + 2)), 1.0 / h2);
        if (augmented) t.emplace_back(r, N, Vn[e][k] * pos_pow(u0, sigma));
      }
    }
    if (augmented) t.emplace_back(N, Eigen::Index(g.base()), 1.0);
    const auto dim = Eigen::Index(n());
    SpMat J(dim, dim);
    J.setFromTriplets(t.begin(), t.end());
    return J;
  }
};

struct NewtonOutcome {
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
  std::string message;
};

NewtonOutcome newton(const System& sys, Vec& x, const NewtonOptions& opts) {
  NewtonOutcome out;
  Vec F, Ft;
  sys.residual(x, F);
  out.residual = F.lpNorm<Eigen::Infinity>();
  Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
  bool analyzed = false;
  while (out.residual > opts.tol) {
    if (out.iterations >= opts.max_iter) {
      out.message = "no convergence in " + std::to_string(opts.max_iter) + " iterations";
      return out;
    }
    SpMat J = sys.jacobian(x);
    if (!analyzed) {
      lu.analyzePattern(J);
      analyzed = true;
    }
    lu.factorize(J);
    if (lu.info() != Eigen::Success) {
      out.message = "singular Jacobian";
      return out;
    }
    Vec dx = lu.solve(-F);
    if (!dx.allFinite()) {
      out.message = "non-finite Newton step";
      return out;
    }
    const double f0 = F.norm();
    double step = 1.0;
    for (;;) {
      Vec trial = x + step * dx;
      sys.residual(trial, Ft);
      if (Ft.allFinite() && Ft.norm() <= (1.0 - opts.armijo * step) * f0) {
        x = std::move(trial);
        F = Ft;
        break;
      }
      step *= 0.5;
      if (step < opts.min_step) {
        out.message = "line search stalled";
        return out;
      }
    }
    ++out.iterations;
    out.residual = F.lpNorm<Eigen::Infinity>();
  }
  out.converged = true;
  return out;
}

std::vector<std::vector<double>> sample_nodes(const Mesh& mesh, const GraphFunction& f) {
  std::vector<std::vector<double>> out(mesh.nodes.size());
  for (std::size_t e = 0; e < mesh.nodes.size(); ++e)
    for (std::size_t k = 0; k < mesh.nodes[e]; ++k) out[e].push_back(f.value(e, mesh.coord(e, k)));
  return out;
}

std::vector<std::array<double, 2>> sample_ends(const MetricGraph& g, const GraphFunction& f) {
  std::vector<std::array<double, 2>> out;
  for (std::size_t e = 0; e < g.num_edges(); ++e) out.push_back({f.value(e, 0.0), f.value(e, g.edge(e).length)});
  return out;
}

void check_inputs(double R, double sigma, const std::vector<std::vector<double>>& Vn) {
  if (!(R > 0.0)) throw std::invalid_argument("R must be positive");
  if (!(sigma > 1.0)) throw std::invalid_argument("sigma must exceed 1");
  for (const auto& row : Vn)
    for (double v : row)
      if (!(v > 0.0)) throw std::invalid_argument("potential must be positive");
}

void finish(SolveResult& r) {
  r.min_value = kInf;
  r.max_value = -kInf;
  for (double v : r.values) {
    r.min_value = std::min(r.min_value, v);
    r.max_value = std::max(r.max_value, v);
  }
  if (r.values.empty()) r.min_value = r.max_value = 0.0;
}

}  // namespace

GraphFunction SolveResult::interpolant() const {
  const MetricGraph& g = domain.graph;
  std::vector<EdgeFunction> edges;
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    std::vector<double> pts;
    for (std::size_t k = 0; k <= mesh.nodes[e] + 1; ++k) pts.push_back(values[mesh.along(g, e, k)]);
    const double h = mesh.h[e];
    edges.push_back({[pts, h](double x) {
                       const double t = std::clamp(x / h, 0.0, double(pts.size() - 1));
                       const std::size_t k = std::min(std::size_t(t), pts.size() - 2);
                       const double s = (pts[k + 1] - pts[k]) / h;
                       return Jet{pts[k] + s * (x - k * h), s, 0.0};
                     },
                     1});
  }
  std::vector<double> vals(values.begin(), values.begin() + Eigen::Index(g.num_vertices()));
  return GraphFunction(std::move(vals), std::move(edges));
}

SolveResult solve_truncated(const MetricGraph& g, double R, const GraphFunction& V, double sigma,
                            double boundary_value, int n_per_edge, const NewtonOptions& opts,
                            const GraphFunction* forcing) {
  if (!(boundary_value >= 0.0)) throw std::invalid_argument("boundary value must be nonnegative");
  const DistanceField df = distance_field(g);
  SolveResult r;
  r.domain = truncate_ball(g, df, R);
  r.mesh = discretize(r.domain.graph, n_per_edge);
  System sys{r.domain.graph, r.mesh, r.domain.dirichlet, boundary_value, sigma, {}, {}, {}, {}, false};
  const GraphFunction Vb = r.domain.restrict(V);
  sys.Vn = sample_nodes(r.mesh, Vb);
  sys.Vend = sample_ends(r.domain.graph, Vb);
  check_inputs(R, sigma, sys.Vn);
  if (forcing) {
    const GraphFunction fb = r.domain.restrict(*forcing);
    sys.fn = sample_nodes(r.mesh, fb);
    sys.fend = sample_ends(r.domain.graph, fb);
  }

  Vec x = Vec::Constant(Eigen::Index(r.mesh.size()), boundary_value);
  NewtonOutcome out = newton(sys, x, opts);
  if (!out.converged) {
    // Restart from zero and ramp the boundary data up in eight steps.
    const std::string first = out.message;
    x.setZero();
    int total = out.iterations;
    for (int step = 1; step <= 8; ++step) {
      sys.bv = boundary_value * step / 8.0;
      out = newton(sys, x, opts);
      total += out.iterations;
      if (!out.converged) break;
    }
    r.fallback = true;
    out.iterations = total;
    out.message = "fallback engaged after: " + first + (out.converged ? "" : "; then " + out.message);
  }
  r.values.assign(x.data(), x.data() + x.size());
  r.iterations = out.iterations;
  r.residual = out.residual;
  r.converged = out.converged;
  r.message = out.converged && !r.fallback ? "converged" : out.message;
  finish(r);
  if (r.converged && r.min_value < -1e-12) r.message += "; negative values present";
  return r;
}

SolveResult solve_positive_branch(const MetricGraph& g, double R, const GraphFunction& V, double sigma,
                                  int n_per_edge, const NewtonOptions& opts) {
  const DistanceField df = distance_field(g);
  SolveResult r;
  r.domain = truncate_ball(g, df, R);
  r.mesh = discretize(r.domain.graph, n_per_edge);
  const MetricGraph& G = r.domain.graph;
  System lin{G, r.mesh, r.domain.dirichlet, 0.0, sigma, {}, {}, {}, {}, false};
  const GraphFunction Vb = r.domain.restrict(V);
  lin.Vn = sample_nodes(r.mesh, Vb);
  lin.Vend = sample_ends(G, Vb);
  check_inputs(R, sigma, lin.Vn);
  if (r.domain.dirichlet[G.base()]) throw std::invalid_argument("base vertex lies on the ball boundary");

  const auto N = Eigen::Index(r.mesh.size());
  // Principal Dirichlet eigenvector of the linear operator by inverse iteration.
  Vec w = Vec::Zero(N);
  for (Eigen::Index i = 0; i < N; ++i)
    if (std::size_t(i) >= G.num_vertices() || !r.domain.dirichlet[std::size_t(i)]) w[i] = 1.0;
  SpMat L = lin.jacobian(Vec::Zero(N));
  Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(L);
  if (lu.info() != Eigen::Success) throw std::runtime_error("singular linear operator on the ball");
  for (int it = 0; it < 60; ++it) {
    Vec rhs = Vec::Zero(N);
    for (Eigen::Index i = Eigen::Index(G.num_vertices()); i < N; ++i) rhs[i] = -w[i];
    w = lu.solve(rhs);
    w /= w.cwiseAbs().maxCoeff();
  }
  w /= w[Eigen::Index(G.base())];
  // Amplitude from a least-squares fit of L w + mu V w^sigma = 0 on interior nodes.
  Vec Lw = L * w;
  double num = 0.0, den = 0.0;
  for (std::size_t e = 0; e < G.num_edges(); ++e)
    for (std::size_t k = 0; k < r.mesh.nodes[e]; ++k) {
      const auto i = Eigen::Index(r.mesh.node(e, k));
      const double nl = lin.Vn[e][k] * pos_pow(w[i], sigma);
      num -= Lw[i] * nl;
      den += nl * nl;
    }
  Vec x(N + 1);
  x.head(N) = w;
  x[N] = den > 0.0 ? num / den : 1.0;

  System aug = lin;
  aug.augmented = true;
  NewtonOutcome out = newton(aug, x, opts);
  r.iterations = out.iterations;
  r.converged = out.converged && x[N] > 0.0;
  r.message = out.converged ? (x[N] > 0.0 ? "converged" : "nonpositive amplitude") : out.message;
  r.amplitude = x[N];
  const double scale = x[N] > 0.0 ? std::pow(x[N], 1.0 / (sigma - 1.0)) : 0.0;
  Vec u = scale * x.head(N);
  Vec F;
  lin.residual(u, F);
  r.residual = F.lpNorm<Eigen::Infinity>();
  r.values.assign(u.data(), u.data() + u.size());
  finish(r);
  return r;
}

// ---------------------------------------------------------------- manufactured solution

bool ManufacturedReport::second_order() const {
  if (ratios.empty()) return false;
  for (double q : ratios)
    if (!(q >= 3.5 && q <= 4.5)) return false;
  return true;
}

ManufacturedReport manufactured_convergence(std::size_t spokes, double length, double Vc, double sigma,
                                            int n0, int refinements) {
  const MetricGraph g = star_graph(spokes, length);
  const double k = std::numbers::pi / (2.0 * length);
  // Past V = k^2 the forcing turns negative near the center and a nonpositive function solves the
  // positive-part equation too; Newton from zero finds that one.
  if (!(Vc > 0.0 && Vc <= k * k)) throw std::invalid_argument("manufactured run needs 0 < V <= (pi/2l)^2");
  auto exact = [k](double x) { return std::cos(k * x); };
  std::vector<EdgeFunction> fe(g.num_edges(), EdgeFunction{[=](double x) {
                                                             const double c = std::cos(k * x);
                                                             return Jet{k * k * c - Vc * pos_pow(c, sigma), 0, 0};
                                                           },
                                                           0});
  const GraphFunction f = GraphFunction::from_edges(g, fe);
  const GraphFunction V = GraphFunction::constant(g, Vc);
  ManufacturedReport rep;
  for (int i = 0; i <= refinements; ++i) {
    const int n = (n0 << i) - 1;
    SolveResult s = solve_truncated(g, length, V, sigma, 0.0, n, {}, &f);
    if (!s.converged) throw std::runtime_error("manufactured solve failed: " + s.message);
    const MetricGraph& G = s.domain.graph;
    ManufacturedRow row;
    row.n_per_edge = n;
    row.h = s.mesh.h_max;
    row.iterations = s.iterations;
    row.residual = s.residual;
    for (std::size_t v = 0; v < G.num_vertices(); ++v)
      row.max_error = std::max(row.max_error, std::abs(s.values[v] - exact(s.domain.dist[v])));
    for (std::size_t e = 0; e < G.num_edges(); ++e)
      for (std::size_t j = 0; j < s.mesh.nodes[e]; ++j)
        row.max_error = std::max(row.max_error, std::abs(s.values[s.mesh.node(e, j)] - exact(s.mesh.coord(e, j))));
    for (std::size_t v = 0; v < G.num_vertices(); ++v) {
      if (s.domain.dirichlet[v]) continue;
      double sum = 0.0;
      for (const auto& inc : G.incident(v)) {
        const std::size_t e = inc.edge;
        const std::size_t a = inc.at_final ? s.mesh.along(G, e, s.mesh.nodes[e]) : s.mesh.along(G, e, 1);
        sum += (s.values[v] - s.values[a]) / s.mesh.h[e];
      }
      row.kirchhoff_defect = std::max(row.kirchhoff_defect, std::abs(sum));
    }
    rep.rows.push_back(row);
  }
  for (std::size_t i = 1; i < rep.rows.size(); ++i)
    rep.ratios.push_back(rep.rows[i - 1].max_error / rep.rows[i].max_error);
  return rep;
}

// ---------------------------------------------------------------- probe

bool ProbeTable::strictly_decreasing() const {
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (!(rows[i].core_sup < rows[i - 1].core_sup)) return false;
  return true;
}

double ProbeTable::final_ratio() const {
  if (rows.empty() || rows.front().core_sup == 0.0) return 1.0;
  return rows.back().core_sup / rows.front().core_sup;
}

ProbeTable liouville_probe(const Family& fam, const Potential& V, double sigma, const std::vector<double>& R_list,
                           double boundary_value, int n_per_edge) {
  if (!(boundary_value >= 0.0)) throw std::invalid_argument("boundary value must be nonnegative");
  if (!(sigma > 1.0)) throw std::invalid_argument("sigma must exceed 1");
  ProbeTable t;
  t.family = fam.name();
  t.potential = V.name();
  t.sigma = sigma;
  t.boundary_value = boundary_value;
  t.rows.resize(R_list.size());
  t.core_radius = base_radius(fam.make(1));
  const double R0 = t.core_radius;
  parallel_for(R_list.size(), [&](std::size_t i) {
    ProbeRow& row = t.rows[i];
    row.R = R_list[i];
    if (boundary_value == 0.0) {
      row.message = "zero data";
      return;
    }
    const MetricGraph g = fam.truncate(row.R);
    const DistanceField df = distance_field(g);
    SolveResult s;
    try {
      s = solve_positive_branch(g, row.R, V.on(g, df), sigma, n_per_edge);
    } catch (const std::exception& ex) {
      row.converged = false;
      row.message = ex.what();
      return;
    }
    row.unknowns = s.values.size();
    row.iterations = s.iterations;
    row.residual = s.residual;
    row.converged = s.converged;
    row.message = s.message;
    if (!s.converged) return;
    row.scale = s.max_value > 0.0 ? std::min(1.0, boundary_value / s.max_value) : 0.0;

    const MetricGraph& G = s.domain.graph;
    const GraphFunction Vb = s.domain.restrict(V.on(g, df));
    double core = 0.0;
    std::vector<double> terms;
    for (std::size_t v = 0; v < G.num_vertices(); ++v) {
      if (s.domain.dist[v] <= R0) core = std::max(core, s.values[v]);
      terms.push_back(G.vertex(v).mu * Vb.vertex(v) * pos_pow(s.values[v], sigma));
    }
    for (std::size_t e = 0; e < G.num_edges(); ++e) {
      const EdgeProfile& p = df.edge(s.domain.parent_edge[e]);
      const double h = s.mesh.h[e];
      for (std::size_t k = 0; k <= s.mesh.nodes[e] + 1; ++k) {
        const double x = k * h;
        const double val = s.values[s.mesh.along(G, e, k)];
        if (p.at(s.domain.parent_offset[e] + x) <= R0) core = std::max(core, val);
        const double w = (k == 0 || k == s.mesh.nodes[e] + 1) ? 0.5 * h : h;
        terms.push_back(w * Vb.value(e, x) * pos_pow(val, sigma));
      }
    }
    row.core_sup = row.scale * core;
    row.mass = std::pow(row.scale, sigma) * pairwise_sum(terms);
  });
  return t;
}

// ---------------------------------------------------------------- a priori chains

double ChainReport::min_slack() const {
  double m = kInf;
  for (const auto& l : lines) m = std::min(m, l.slack());
  return lines.empty() ? 0.0 : m;
}

namespace {

// Sums shared by the compact chains: phi = phi(d~/R), Phi = phi^s.
struct CompactData {
  double M = 0, P = 0, F = 0, TV = 0, TE = 0, TVc = 0, TEc = 0, YV = 0, YE = 0;
  double MD = 0, MA = 0;          // u-weighted Young pieces (vertex over D_R, edge over A_R)
  double tailV = 0, tailE = 0;    // same with phi^{s - sigma'} in place of u
  double SV = 0, SE = 0;          // tails without the cutoff power
  double massV = 0, massE = 0;    // mass over D_R and A_R without the cutoff
  double ball = 0;                // mass over d < R
  double CV = 0, CE = 0;          // empirical cutoff constants (sup R |Delta phi|, sup R |phi''|)
  bool nonneg = true, edge_ok = true, vertex_ok = true;
};

double vpow(double V, double sigma) { return std::pow(V, -1.0 / (sigma - 1.0)); }

CompactData compact_data(const MetricGraph& g, const ModifiedDistanceField& mdf, const GraphFunction& u,
                         const GraphFunction& V, double sigma, double R, double s, const QuadratureRule& quad) {
  const double sp = sigma / (sigma - 1.0);
  if (!(sigma > 1.0)) throw std::invalid_argument("sigma must exceed 1");
  if (!(s > std::max(2.0, sp)))
    throw std::invalid_argument("s must exceed max(2, sigma/(sigma-1))");
  const CutoffPhi cut = CutoffPhi::make();
  const GraphFunction phi = compact_testfn(g, mdf, R, cut, 1.0);
  const GraphFunction Phi = compact_testfn(g, mdf, R, cut, s);
  const SupportPartition part = support_partition(g, mdf, R);
  const double j = mdf.j_sup();
  CompactData c;

  // Vertex sums.
  std::vector<double> t_M, t_P, t_F, t_TV, t_TVc, t_YV, t_MD, t_tV, t_SV, t_mV, t_ball;
  std::vector<std::size_t> dr;
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    const double d = mdf.vertex(v);
    const double mu = g.vertex(v).mu, uv = u.vertex(v), Vv = V.vertex(v), au = std::abs(uv);
    const double ph = phi.vertex(v), Ph = Phi.vertex(v);
    const double lap_u = vertex_laplacian(g, u, v), lap_phi = vertex_laplacian(g, phi, v);
    t_M.push_back(mu * Vv * std::pow(au, sigma) * Ph);
    t_P.push_back(-mu * Ph * lap_u);
    t_TV.push_back(-mu * uv * vertex_laplacian(g, Phi, v));
    t_TVc.push_back(-s * mu * uv * std::pow(ph, s - 1.0) * lap_phi);
    if (Ph != 0.0) {
      t_F.push_back(Ph * kirchhoff(g, u, v));
      if (uv < -1e-12) c.nonneg = false;
      if (lap_u + Vv * std::pow(au, sigma) > 1e-10) c.vertex_ok = false;
    }
    if (d < R) t_ball.push_back(mu * Vv * std::pow(au, sigma));
    if (d >= R - j && d <= 2.0 * R + j) {
      dr.push_back(v);
      c.CV = std::max(c.CV, R * std::abs(lap_phi));
    }
  }
  for (std::size_t v : dr) {
    const double mu = g.vertex(v).mu, uv = u.vertex(v), Vv = V.vertex(v), au = std::abs(uv);
    const double ph = phi.vertex(v);
    t_YV.push_back(mu * uv * std::pow(ph, s - 1.0));
    t_MD.push_back(mu * Vv * std::pow(au, sigma) * std::pow(ph, s));
    t_tV.push_back(mu * vpow(Vv, sigma) * std::pow(ph, s - sp));
    t_SV.push_back(mu * vpow(Vv, sigma));
    t_mV.push_back(mu * Vv * std::pow(au, sigma));
  }

  // Edge constant over the same nodes the quadrature uses, plus a uniform grid.
  auto inA = [&](std::size_t e, double x) {
    const double dt = mdf.eval(e, x).v;
    return dt >= R && dt <= 2.0 * R;
  };
  const std::vector<double> none;
  for (const auto& iv : part.intervals) {
    const auto& br = iv.edge < part.breaks.size() ? part.breaks[iv.edge] : none;
    auto xs = quad.nodes(iv.lo, iv.hi, br);
    for (int k = 0; k <= 256; ++k) xs.push_back(iv.lo + (iv.hi - iv.lo) * k / 256.0);
    const double l = g.edge(iv.edge).length;
    for (double x : xs) {
      if (inA(iv.edge, x)) c.CE = std::max(c.CE, R * std::abs(phi.d2(iv.edge, l, x)));
      const double ux = u.value(iv.edge, x);
      if (Phi.value(iv.edge, x) != 0.0) {
        if (ux < -1e-12) c.nonneg = false;
        if (u.d2(iv.edge, l, x) + V.value(iv.edge, x) * std::pow(std::abs(ux), sigma) > 1e-10) c.edge_ok = false;
      }
    }
  }
  const double KV = s * c.CV, KE = s * c.CE;

  auto edge_int = [&](const std::function<double(std::size_t, double)>& f) {
    return integrate_intervals(part.intervals, f, quad, &part.breaks);
  };
  auto len = [&](std::size_t e) { return g.edge(e).length; };
  const double eM = edge_int([&](std::size_t e, double x) {
    return V.value(e, x) * std::pow(std::abs(u.value(e, x)), sigma) * Phi.value(e, x);
  });
  const double eP = edge_int([&](std::size_t e, double x) { return -Phi.value(e, x) * u.d2(e, len(e), x); });
  const double eT = edge_int([&](std::size_t e, double x) { return -u.value(e, x) * Phi.d2(e, len(e), x); });
  const double eTc = edge_int([&](std::size_t e, double x) {
    return -s * u.value(e, x) * std::pow(phi.value(e, x), s - 1.0) * phi.d2(e, len(e), x);
  });
  const double eY = edge_int([&](std::size_t e, double x) {
    return inA(e, x) ? u.value(e, x) * std::pow(phi.value(e, x), s - 1.0) : 0.0;
  });
  const double eMA = edge_int([&](std::size_t e, double x) {
    return inA(e, x) ? V.value(e, x) * std::pow(std::abs(u.value(e, x)), sigma) * std::pow(phi.value(e, x), s)
                     : 0.0;
  });
  const double etE = edge_int([&](std::size_t e, double x) {
    return inA(e, x) ? vpow(V.value(e, x), sigma) * std::pow(phi.value(e, x), s - sp) : 0.0;
  });
  const double eSE = edge_int([&](std::size_t e, double x) { return inA(e, x) ? vpow(V.value(e, x), sigma) : 0.0; });
  const double emE = edge_int([&](std::size_t e, double x) {
    return inA(e, x) ? V.value(e, x) * std::pow(std::abs(u.value(e, x)), sigma) : 0.0;
  });
  const double eball = edge_int([&](std::size_t e, double x) {
    return mdf.eval(e, x).v < R ? V.value(e, x) * std::pow(std::abs(u.value(e, x)), sigma) : 0.0;
  });

  c.M = pairwise_sum(t_M) + eM;
  c.P = pairwise_sum(t_P) + eP;
  c.F = pairwise_sum(t_F);
  c.TV = pairwise_sum(t_TV);
  c.TE = eT;
  c.TVc = pairwise_sum(t_TVc);
  c.TEc = eTc;
  c.YV = KV / R * pairwise_sum(t_YV);
  c.YE = KE / R * eY;
  c.MD = pairwise_sum(t_MD);
  c.MA = eMA;
  c.tailV = pairwise_sum(t_tV);
  c.tailE = etE;
  c.SV = pairwise_sum(t_SV);
  c.SE = eSE;
  c.massV = pairwise_sum(t_mV);
  c.massE = emE;
  c.ball = pairwise_sum(t_ball) + eball;
  c.CV = KV;
  c.CE = KE;
  return c;
}

// Sums shared by the weighted chains: Psi = psi((d~ - j)/R), weights e^{-delta d / R}.
struct WeightedData {
  double M = 0, P = 0, F = 0, WV = 0, WE = 0, ZV = 0, ZE = 0, YV = 0, YE = 0;
  double epsV = 0, epsE = 0;  // u-weighted Young pieces
  double SV = 0, SE = 0;      // u-free tails
  double ball = 0;
  double KV = 0, KE = 0;
  double cw = 0;              // max of weight / Psi
  double norm = 0;            // X_alpha norm of u
  bool edge_ok = true, vertex_ok = true;
};

WeightedData weighted_data(const MetricGraph& g, const ModifiedDistanceField& mdf, const GraphFunction& u,
                           const GraphFunction& V, double sigma, double R, double delta, const QuadratureRule& quad) {
  if (!(sigma > 1.0)) throw std::invalid_argument("sigma must exceed 1");
  const double j = mdf.j_sup();
  const ExpPsi psi = ExpPsi::make(delta, R, j);
  const GraphFunction Psi = exp_testfn(g, mdf, R, psi);
  WeightedData w;

  std::vector<EdgeInterval> pieces;
  EdgeBreaks breaks(g.num_edges());
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    pieces.push_back({e, 0.0, g.edge(e).length});
    if (mdf.has_segment_point(e)) breaks[e].push_back(mdf.segment_point(e));
    for (double lev : {R + j, 2.0 * R + j})
      for (const CutPoint& cp : modified_crossings(mdf, e, lev)) breaks[e].push_back(cp.x);
  }
  const double thr = R + j;
  auto wt = [&](double d) { return std::exp(-delta * d / R); };

  std::vector<double> t_M, t_P, t_F, t_WV, t_ZV, t_YV, t_eps, t_S, t_ball, t_norm;
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    const double d = mdf.vertex(v), mu = g.vertex(v).mu, uv = u.vertex(v), Vv = V.vertex(v);
    const double au = std::abs(uv), Ps = Psi.vertex(v), lap_u = vertex_laplacian(g, u, v);
    const double lap_psi = vertex_laplacian(g, Psi, v);
    t_M.push_back(mu * Vv * std::pow(au, sigma) * Ps);
    t_P.push_back(-mu * Ps * lap_u);
    t_F.push_back(Ps * kirchhoff(g, u, v));
    t_WV.push_back(-mu * uv * lap_psi);
    t_ZV.push_back(mu * au * std::abs(lap_psi));
    t_norm.push_back(mu * au * wt(d));
    if (lap_u + Vv * std::pow(au, sigma) > 1e-10) w.vertex_ok = false;
    if (d < R) t_ball.push_back(mu * Vv * std::pow(au, sigma));
    if (d >= R) {
      w.KV = std::max(w.KV, R * std::abs(lap_psi) / wt(d));
      w.cw = std::max(w.cw, wt(d) / Ps);
    }
  }
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    const double d = mdf.vertex(v);
    if (d < R) continue;
    const double mu = g.vertex(v).mu, au = std::abs(u.vertex(v)), Vv = V.vertex(v);
    t_YV.push_back(mu * au * wt(d));
    t_eps.push_back(mu * Vv * std::pow(au, sigma) * wt(d));
    t_S.push_back(mu * vpow(Vv, sigma) * wt(d));
  }

  auto in_tail = [&](std::size_t e, double x) { return mdf.eval(e, x).v >= thr; };
  auto len = [&](std::size_t e) { return g.edge(e).length; };
  for (const auto& iv : pieces) {
    auto xs = quad.nodes(iv.lo, iv.hi, breaks[iv.edge]);
    for (int k = 0; k <= 256; ++k) xs.push_back(iv.lo + (iv.hi - iv.lo) * k / 256.0);
    for (double x : xs) {
      const double ux = u.value(iv.edge, x);
      if (u.d2(iv.edge, len(iv.edge), x) + V.value(iv.edge, x) * std::pow(std::abs(ux), sigma) > 1e-10)
        w.edge_ok = false;
      if (!in_tail(iv.edge, x)) continue;
      const double dt = mdf.eval(iv.edge, x).v;
      w.KE = std::max(w.KE, R * std::abs(Psi.d2(iv.edge, len(iv.edge), x)) / wt(dt));
      w.cw = std::max(w.cw, wt(dt) / Psi.value(iv.edge, x));
    }
  }

  auto edge_int = [&](const std::function<double(std::size_t, double)>& f) {
    return integrate_intervals(pieces, f, quad, &breaks);
  };
  auto upow = [&](std::size_t e, double x) { return std::pow(std::abs(u.value(e, x)), sigma); };
  const double eM = edge_int([&](std::size_t e, double x) { return V.value(e, x) * upow(e, x) * Psi.value(e, x); });
  const double eP = edge_int([&](std::size_t e, double x) { return -Psi.value(e, x) * u.d2(e, len(e), x); });
  const double eW = edge_int([&](std::size_t e, double x) { return -u.value(e, x) * Psi.d2(e, len(e), x); });
  const double eZ =
      edge_int([&](std::size_t e, double x) { return std::abs(u.value(e, x) * Psi.d2(e, len(e), x)); });
  const double eY = edge_int([&](std::size_t e, double x) {
    return in_tail(e, x) ? std::abs(u.value(e, x)) * wt(mdf.eval(e, x).v) : 0.0;
  });
  const double eEps = edge_int([&](std::size_t e, double x) {
    return in_tail(e, x) ? V.value(e, x) * upow(e, x) * wt(mdf.eval(e, x).v) : 0.0;
  });
  const double eS = edge_int([&](std::size_t e, double x) {
    return in_tail(e, x) ? vpow(V.value(e, x), sigma) * wt(mdf.eval(e, x).v) : 0.0;
  });
  const double eball = edge_int([&](std::size_t e, double x) {
    return mdf.eval(e, x).v < R ? V.value(e, x) * upow(e, x) : 0.0;
  });
  const double enorm = edge_int([&](std::size_t e, double x) {
    return std::abs(u.value(e, x)) * wt(mdf.distance().edge(e).at(x));
  });

  w.M = pairwise_sum(t_M) + eM;
  w.P = pairwise_sum(t_P) + eP;
  w.F = pairwise_sum(t_F);
  w.WV = pairwise_sum(t_WV);
  w.WE = eW;
  w.ZV = pairwise_sum(t_ZV);
  w.ZE = eZ;
  w.YV = w.KV / R * pairwise_sum(t_YV);
  w.YE = w.KE / R * eY;
  w.epsV = pairwise_sum(t_eps);
  w.epsE = eEps;
  w.SV = pairwise_sum(t_S);
  w.SE = eS;
  w.ball = pairwise_sum(t_ball) + eball;
  w.norm = pairwise_sum(t_norm) + enorm;
  return w;
}

std::string describe(bool nonneg, bool edge_ok, bool vertex_ok) {
  std::string s;
  auto add = [&](const char* m) { s += (s.empty() ? "" : "; ") + std::string(m); };
  if (!nonneg) add("u takes negative values");
  if (!edge_ok) add("edge inequality fails");
  if (!vertex_ok) add("vertex inequality fails");
  return s.empty() ? "supersolution on the support" : s;
}

}  // namespace

ChainReport apriori_check_lemma41(const MetricGraph& g, const ModifiedDistanceField& mdf, const GraphFunction& u,
                                  const GraphFunction& V, double sigma, double R, double s,
                                  const QuadratureRule& quad) {
  const CompactData c = compact_data(g, mdf, u, V, sigma, R, s, quad);
  const double sp = sigma / (sigma - 1.0);
  ChainReport r;
  r.mode = "compact";
  r.R = R;
  r.sigma = sigma;
  r.parameter = s;
  r.flux = c.F;
  r.vertex_constant = c.CV;
  r.edge_constant = c.CE;
  r.tail_mass = c.massV + c.massE;
  r.precondition_ok = c.nonneg && c.edge_ok && c.vertex_ok;
  r.precondition = describe(c.nonneg, c.edge_ok, c.vertex_ok);
  const double uV = std::pow(c.CV / R, sp) / sp * c.tailV;
  const double uE = std::pow(c.CE / R, sp) / sp * c.tailE;
  const double fV = std::pow(c.CV / R, sp) * c.SV, fE = std::pow(c.CE / R, sp) * c.SE;
  r.lines = {
      {"supersolution pairing", c.M, c.P, 0.0},
      {"integration by parts", c.P, c.TV + c.TE - c.F, 0.0},
      {"vertex convexity", c.TV, c.TVc, 0.0},
      {"vertex cutoff bound", c.TVc, c.YV, 0.0},
      {"vertex Young split", c.YV, c.MD / sigma + uV, uV},
      {"edge convexity", c.TE, c.TEc, 0.0},
      {"edge cutoff bound", c.TEc, c.YE, 0.0},
      {"edge Young split", c.YE, c.MA / sigma + uE, uE},
      {"absorbed bound", c.M, fV + fE - sp * c.F, fV + fE},
  };
  return r;
}

ChainReport apriori_check_lemma45(const MetricGraph& g, const ModifiedDistanceField& mdf, const GraphFunction& u,
                                  const GraphFunction& V, double sigma, double R, double delta,
                                  const QuadratureRule& quad, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  const WeightedData w = weighted_data(g, mdf, u, V, sigma, R, delta, quad);
  const double sp = sigma / (sigma - 1.0);
  const double Ce = std::pow(epsilon * sigma, -1.0 / (sigma - 1.0)) / sp;
  ChainReport r;
  r.mode = "weighted";
  r.R = R;
  r.sigma = sigma;
  r.parameter = delta;
  r.flux = w.F;
  r.vertex_constant = w.KV;
  r.edge_constant = w.KE;
  r.tail_mass = w.epsV + w.epsE;
  r.precondition_ok = w.edge_ok && w.vertex_ok && std::isfinite(w.norm) && epsilon * w.cw < 1.0;
  r.precondition = describe(true, w.edge_ok, w.vertex_ok);
  if (!std::isfinite(w.norm)) r.precondition += "; weighted norm is infinite";
  if (!(epsilon * w.cw < 1.0)) r.precondition += "; epsilon too large to absorb";
  const double uV = Ce * std::pow(w.KV / R, sp) * w.SV;
  const double uE = Ce * std::pow(w.KE / R, sp) * w.SE;
  r.lines = {
      {"supersolution pairing", w.M, w.P, 0.0},
      {"integration by parts", w.P, w.WV + w.WE - w.F, 0.0},
      {"vertex absolute value", w.WV, w.ZV, 0.0},
      {"vertex weight bound", w.ZV, w.YV, 0.0},
      {"vertex Young split", w.YV, epsilon * w.epsV + uV, uV},
      {"edge absolute value", w.WE, w.ZE, 0.0},
      {"edge weight bound", w.ZE, w.YE, 0.0},
      {"edge Young split", w.YE, epsilon * w.epsE + uE, uE},
      {"weight comparison", epsilon * (w.epsV + w.epsE), epsilon * w.cw * w.M, 0.0},
      {"absorbed bound", (1.0 - epsilon * w.cw) * w.M, uV + uE - w.F, uV + uE},
  };
  return r;
}

ChainReport theorem_chain_check(const MetricGraph& g, const ModifiedDistanceField& mdf, const GraphFunction& u,
                                const GraphFunction& V, double sigma, double R, double s_or_delta,
                                ChainMode mode, const QuadratureRule& quad) {
  const double sp = sigma / (sigma - 1.0);
  ChainReport r;
  r.R = R;
  r.sigma = sigma;
  r.parameter = s_or_delta;
  if (mode == ChainMode::Compact) {
    const CompactData c = compact_data(g, mdf, u, V, sigma, R, s_or_delta, quad);
    r.mode = "compact";
    r.flux = c.F;
    r.precondition_ok = c.nonneg && c.edge_ok && c.vertex_ok;
    r.precondition = describe(c.nonneg, c.edge_ok, c.vertex_ok);
    const double HV = c.CV / R * std::pow(c.MD, 1.0 / sigma) * std::pow(c.tailV, 1.0 / sp);
    const double HE = c.CE / R * std::pow(c.MA, 1.0 / sigma) * std::pow(c.tailE, 1.0 / sp);
    r.vertex_constant = c.CV / R * std::pow(c.SV, 1.0 / sp);
    r.edge_constant = c.CE / R * std::pow(c.SE, 1.0 / sp);
    r.tail_mass = c.massV + c.massE;
    const double final_rhs = r.vertex_constant * std::pow(c.massV, 1.0 / sigma) +
                             r.edge_constant * std::pow(c.massE, 1.0 / sigma) - c.F;
    r.lines = {
        {"ball mass", c.ball, c.M, 0.0},
        {"pairing", c.M, c.TV + c.TE - c.F, 0.0},
        {"vertex cutoff bound", c.TV, c.YV, 0.0},
        {"edge cutoff bound", c.TE, c.YE, 0.0},
        {"vertex Hoelder", c.YV, HV, 0.0},
        {"edge Hoelder", c.YE, HE, 0.0},
        {"final bound", c.ball, final_rhs, 0.0},
    };
  } else {
    const WeightedData w = weighted_data(g, mdf, u, V, sigma, R, s_or_delta, quad);
    r.mode = "weighted";
    r.flux = w.F;
    r.precondition_ok = w.edge_ok && w.vertex_ok && std::isfinite(w.norm);
    r.precondition = describe(true, w.edge_ok, w.vertex_ok);
    const double HV = w.KV / R * std::pow(w.epsV, 1.0 / sigma) * std::pow(w.SV, 1.0 / sp);
    const double HE = w.KE / R * std::pow(w.epsE, 1.0 / sigma) * std::pow(w.SE, 1.0 / sp);
    r.vertex_constant = w.KV / R * std::pow(w.SV, 1.0 / sp);
    r.edge_constant = w.KE / R * std::pow(w.SE, 1.0 / sp);
    r.tail_mass = w.epsV + w.epsE;
    r.lines = {
        {"ball mass", w.ball, w.M, 0.0},
        {"pairing", w.M, w.WV + w.WE - w.F, 0.0},
        {"vertex weight bound", w.WV, w.YV, 0.0},
        {"edge weight bound", w.WE, w.YE, 0.0},
        {"vertex Hoelder", w.YV, HV, 0.0},
        {"edge Hoelder", w.YE, HE, 0.0},
        {"final bound", w.ball, HV + HE - w.F, 0.0},
    };
  }
  return r;
}

}  // namespace qg

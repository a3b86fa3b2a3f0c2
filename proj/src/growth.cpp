#include "qg/growth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "qg/parallel.hpp"

namespace qg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

void require_sigma(double sigma) {
  if (!(sigma > 1.0)) throw std::invalid_argument("sigma must exceed 1");
}

double family_step(const Family& fam) {
  if (fam.kind != Family::Kind::Parallel) return fam.length;
  return *std::min_element(fam.parallel_lengths.begin(), fam.parallel_lengths.end());
}

double family_radius0(const Family& fam) { return base_radius(fam.make(1)); }

std::vector<double> check_radii(const Family& fam, const std::vector<double>& R_list) {
  if (R_list.empty()) throw std::invalid_argument("empty radius list");
  const double R0 = family_radius0(fam);
  for (double R : R_list)
    if (!(R >= R0 * (1.0 - 1e-12)))
      throw std::invalid_argument("radius " + std::to_string(R) + " is below R0 = " + std::to_string(R0));
  return R_list;
}

void summarize(GrowthReport& rep) {
  std::vector<double> Rs, vs, es, ratios;
  for (const GrowthRow& r : rep.rows) {
    Rs.push_back(r.R);
    vs.push_back(r.vertex_sum);
    es.push_back(r.edge_sum);
    ratios.push_back(std::max(r.ratio_v, r.ratio_e));
  }
  rep.exponent_v = loglog_slope(Rs, vs);
  rep.exponent_e = loglog_slope(Rs, es);
  rep.median_ratio = median(ratios);
  // Upper half of the sweep by radius.
  std::vector<std::size_t> order(ratios.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return Rs[a] < Rs[b]; });
  rep.max_upper_ratio = 0.0;
  for (std::size_t k = order.size() / 2; k < order.size(); ++k)
    rep.max_upper_ratio = std::max(rep.max_upper_ratio, ratios[order[k]]);
  rep.holds = std::isfinite(rep.max_upper_ratio) && rep.max_upper_ratio <= 1.5 * rep.median_ratio;
}

GrowthRow make_row(double R, double sigma, const MetricGraph& g, double radius, const WindowSums& w) {
  GrowthRow row;
  row.R = R;
  row.vertices = g.num_vertices();
  row.truncation_radius = radius;
  row.vertex_sum = w.vertex_sum;
  row.edge_sum = w.edge_sum;
  row.bound = std::pow(R, sigma / (sigma - 1.0));
  row.ratio_v = w.vertex_sum / row.bound;
  row.ratio_e = w.edge_sum / row.bound;
  return row;
}

}  // namespace

Potential Potential::constant(double c) {
  if (!(c > 0.0)) throw std::invalid_argument("potential must be positive");
  Potential p;
  p.kind = Kind::Constant;
  p.value = c;
  return p;
}

Potential Potential::power_law(double beta) {
  Potential p;
  p.kind = Kind::PowerLaw;
  p.beta = beta;
  return p;
}

Potential Potential::radial(std::function<double(double)> f) {
  Potential p;
  p.kind = Kind::Custom;
  p.custom = std::move(f);
  return p;
}

double Potential::at_distance(double d) const {
  switch (kind) {
    case Kind::Constant:
      return value;
    case Kind::PowerLaw:
      return std::pow(1.0 + d, -beta);
    case Kind::Custom:
      return custom(d);
  }
  return value;
}

GraphFunction Potential::on(const MetricGraph& g, const DistanceField& df) const {
  std::vector<double> vals(g.num_vertices());
  for (std::size_t v = 0; v < vals.size(); ++v) vals[v] = at_distance(df.vertex(v));
  std::vector<EdgeFunction> edges;
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const EdgeProfile p = df.edge(e);
    edges.push_back({[p, self = *this](double x) { return Jet{self.at_distance(p.at(x)), 0, 0}; }, 0});
  }
  return GraphFunction(std::move(vals), std::move(edges));
}

std::string Potential::name() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::Constant:
      os << "const:" << value;
      break;
    case Kind::PowerLaw:
      os << "powerlaw:" << beta;
      break;
    case Kind::Custom:
      os << "custom";
      break;
  }
  return os.str();
}

Potential parse_potential(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  try {
    if (kind == "const") return Potential::constant(arg.empty() ? 1.0 : std::stod(arg));
    if (kind == "powerlaw") {
      if (arg.empty()) throw std::invalid_argument("powerlaw needs an exponent");
      return Potential::power_law(std::stod(arg));
    }
  } catch (const std::logic_error& e) {
    throw std::invalid_argument("bad potential '" + text + "': " + e.what());
  }
  throw std::invalid_argument("unknown potential '" + text + "' (expected const[:c] or powerlaw:beta)");
}

WindowSums window_sums(const MetricGraph& g, const DistanceField& df, const GraphFunction& V, double sigma,
                       double lo, double hi, double alpha, const QuadratureRule& quad) {
  require_sigma(sigma);
  const double p = -1.0 / (sigma - 1.0);
  auto weight = [&](double v, double d) {
    if (!(v > 0.0)) throw std::invalid_argument("potential must be positive, got " + std::to_string(v));
    return std::pow(v, p) * (alpha == 0.0 ? 1.0 : std::exp(-alpha * d));
  };
  const PointSet set = level_set(g, df, lo, hi);
  std::vector<double> vt;
  for (std::size_t v : set.vertices) vt.push_back(g.vertex(v).mu * weight(V.vertex(v), df.vertex(v)));
  WindowSums w;
  w.vertex_sum = pairwise_sum(vt);
  w.edge_sum = integrate_intervals(
      set.intervals, [&](std::size_t e, double x) { return weight(V.value(e, x), df.edge(e).at(x)); }, quad);
  return w;
}

WindowSums annulus_sums(const MetricGraph& g, const DistanceField& df, const GraphFunction& V, double sigma,
                        double R, const QuadratureRule& quad) {
  if (!(R > 0.0)) throw std::invalid_argument("R must be positive");
  return window_sums(g, df, V, sigma, R, 2.0 * R, 0.0, quad);
}

WindowSums weighted_tail_sums(const MetricGraph& g, const DistanceField& df, const GraphFunction& V,
                              double sigma, double R, double delta, const QuadratureRule& quad) {
  if (!(R > 0.0)) throw std::invalid_argument("R must be positive");
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  return window_sums(g, df, V, sigma, R, kInf, delta / R, quad);
}

WeightedNorm xalpha_norm(const MetricGraph& g, const DistanceField& df, const GraphFunction& u, double alpha,
                         const QuadratureRule& quad) {
  if (!(alpha >= 0.0)) throw std::invalid_argument("alpha must be nonnegative");
  std::vector<double> vt(g.num_vertices());
  for (std::size_t v = 0; v < vt.size(); ++v)
    vt[v] = g.vertex(v).mu * std::abs(u.vertex(v)) * std::exp(-alpha * df.vertex(v));
  WeightedNorm n;
  n.vertex = pairwise_sum(vt);
  std::vector<EdgeBreaks::value_type> kinks(g.num_edges());
  for (std::size_t e = 0; e < g.num_edges(); ++e)
    if (df.edge(e).kind == EdgeCase::Peak) kinks[e].push_back(df.edge(e).q);
  n.edge = integrate_edgewise(
      g, [&](std::size_t e, double x) { return std::abs(u.value(e, x)) * std::exp(-alpha * df.edge(e).at(x)); },
      quad, &kinks);
  n.total = n.vertex + n.edge;
  return n;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
    if (!(x[i] > 0.0 && y[i] > 0.0)) continue;
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) return 0.0;
  const double den = n * sxx - sx * sx;
  return den == 0.0 ? 0.0 : (n * sxy - sx * sy) / den;
}

std::size_t family_size(const Family& fam, double radius) {
  const auto n = static_cast<std::size_t>(std::ceil(radius / family_step(fam))) + 1;
  switch (fam.kind) {
    case Family::Kind::Path:
    case Family::Kind::Parallel:
      return n + 1;
    case Family::Kind::Star:
      return fam.param * n + 1;
    case Family::Kind::Ladder:
      return 2 * (n + 1);
    case Family::Kind::Tree: {
      if (fam.param <= 1) return n + 1;
      double total = 0.0, level = 1.0;
      for (std::size_t k = 0; k <= n; ++k, level *= double(fam.param)) total += level;
      return total > 1e18 ? std::numeric_limits<std::size_t>::max() : static_cast<std::size_t>(total);
    }
  }
  return n + 1;
}

GrowthReport check_growth_thm31(const Family& fam, const Potential& V, double sigma,
                                const std::vector<double>& R_list, const QuadratureRule& quad) {
  require_sigma(sigma);
  GrowthReport rep;
  rep.family = fam.name();
  rep.potential = V.name();
  rep.sigma = sigma;
  const double j = fam.make(1).max_length();
  for (double R : check_radii(fam, R_list)) {
    const double radius = 2.0 * R + j;
    const MetricGraph g = fam.truncate(radius);
    const DistanceField df = distance_field(g);
    const GraphFunction Vg = V.on(g, df);
    rep.rows.push_back(make_row(R, sigma, g, radius, annulus_sums(g, df, Vg, sigma, R, quad)));
  }
  summarize(rep);
  return rep;
}

GrowthReport check_growth_thm32(const Family& fam, const Potential& V, double sigma, double delta,
                                const std::vector<double>& R_list, const QuadratureRule& quad,
                                double tail_decay, std::size_t max_vertices) {
  require_sigma(sigma);
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  GrowthReport rep;
  rep.family = fam.name();
  rep.potential = V.name();
  rep.sigma = sigma;
  rep.delta = delta;
  const double step = family_step(fam);
  for (double R : check_radii(fam, R_list)) {
    double radius = R * (1.0 + tail_decay / delta);
    while (radius > R + step && family_size(fam, radius) > max_vertices) {
      radius -= step;
      rep.truncation_capped = true;
    }
    const MetricGraph g = fam.truncate(radius);
    const DistanceField df = distance_field(g);
    const GraphFunction Vg = V.on(g, df);
    GrowthRow row = make_row(R, sigma, g, radius, weighted_tail_sums(g, df, Vg, sigma, R, delta, quad));
    // Ratio test on the outermost level: a converging tail leaves it a negligible share.
    const double far = *std::max_element(df.vertex_dist.begin(), df.vertex_dist.end());
    const WindowSums shell = window_sums(g, df, Vg, sigma, std::max(R, far - step), kInf, delta / R, quad);
    const double total = row.vertex_sum + row.edge_sum;
    row.tail_share = total > 0.0 ? (shell.vertex_sum + shell.edge_sum) / total : 0.0;
    if (row.tail_share > 1e-3) rep.tail_converged = false;
    rep.rows.push_back(row);
  }
  summarize(rep);
  rep.holds = rep.holds && rep.tail_converged;
  return rep;
}

CorollaryCheck corollary_check(const MetricGraph& g, const DistanceField& df, double sigma, double R,
                               const QuadratureRule& quad) {
  CorollaryCheck c;
  const WindowSums w = annulus_sums(g, df, GraphFunction::constant(g, 1.0), sigma, R, quad);
  const PointSet annulus = ball_and_annulus(g, df, R).annulus;
  c.vertex_sum = w.vertex_sum;
  c.edge_sum = w.edge_sum;
  c.vertex_measure = annulus.vertex_measure(g);
  c.edge_measure = annulus.edge_measure();
  c.equal = std::abs(c.vertex_sum - c.vertex_measure) <= 1e-12 * std::max(1.0, c.vertex_measure) &&
            std::abs(c.edge_sum - c.edge_measure) <= 1e-12 * std::max(1.0, c.edge_measure);
  return c;
}

}  // namespace qg

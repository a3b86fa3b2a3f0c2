#include "qg/geodesics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>

namespace qg {

const char* to_string(EdgeCase c) {
  switch (c) {
    case EdgeCase::Rising:
      return "rising";
    case EdgeCase::Falling:
      return "falling";
    case EdgeCase::Peak:
      return "peak";
  }
  return "?";
}

double EdgeProfile::at(double x) const { return std::min(d_i + x, d_j + length - x); }

double EdgeProfile::slope(double x) const {
  switch (kind) {
    case EdgeCase::Rising:
      return 1.0;
    case EdgeCase::Falling:
      return -1.0;
    case EdgeCase::Peak:
      return x <= q ? 1.0 : -1.0;
  }
  return 0.0;
}

double EdgeProfile::peak_value() const {
  switch (kind) {
    case EdgeCase::Rising:
      return d_j;
    case EdgeCase::Falling:
      return d_i;
    case EdgeCase::Peak:
      return d_i + q;
  }
  return 0.0;
}

std::vector<double> vertex_distances(const MetricGraph& g) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(g.num_vertices(), inf);
  std::vector<char> done(g.num_vertices(), 0);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  dist[g.base()] = 0.0;
  pq.push({0.0, g.base()});
  while (!pq.empty()) {
    auto [dv, v] = pq.top();
    pq.pop();
    if (done[v]) continue;
    done[v] = 1;
    for (const auto& inc : g.incident(v)) {
      std::size_t w = g.other_end(inc.edge, v);
      double nd = dv + g.edge(inc.edge).length;
      if (nd < dist[w]) {
        dist[w] = nd;
        pq.push({nd, w});
      }
    }
  }
  for (std::size_t v = 0; v < dist.size(); ++v)
    if (!done[v]) throw std::runtime_error("graph is disconnected: vertex '" + g.vertex(v).id +
                                           "' is unreachable from the base");
  return dist;
}

DistanceField classify_edges(const MetricGraph& g, std::vector<double> vertex_dist) {
  DistanceField df;
  df.vertex_dist = std::move(vertex_dist);
  df.edges.reserve(g.num_edges());
  for (const auto& e : g.edges()) {
    EdgeProfile p;
    p.length = e.length;
    p.d_i = df.vertex_dist.at(e.from);
    p.d_j = df.vertex_dist.at(e.to);
    const double diff = p.d_j - p.d_i;
    if (std::abs(diff) < e.length - kTieTolerance) {
      p.kind = EdgeCase::Peak;
      p.q = (diff + e.length) / 2.0;
    } else {
      p.kind = diff > 0.0 ? EdgeCase::Rising : EdgeCase::Falling;
      p.q = p.kind == EdgeCase::Rising ? e.length : 0.0;
    }
    df.edges.push_back(p);
  }
  return df;
}

DistanceField distance_field(const MetricGraph& g) { return classify_edges(g, vertex_distances(g)); }

double point_distance(const MetricGraph& g, const DistanceField& df, const GraphPoint& p) {
  if (const auto* v = std::get_if<VertexPoint>(&p)) return df.vertex(v->vertex);
  const auto& ep = std::get<EdgePoint>(p);
  const double l = g.edge(ep.edge).length;
  if (!(ep.x > 0.0 && ep.x < l))
    throw std::out_of_range("coordinate outside the open edge '" + g.edge(ep.edge).id + "'");
  return df.edge(ep.edge).at(ep.x);
}

double PointSet::edge_measure() const {
  double s = 0.0;
  for (const auto& iv : intervals) s += iv.hi - iv.lo;
  return s;
}

double PointSet::vertex_measure(const MetricGraph& g) const {
  double s = 0.0;
  for (std::size_t v : vertices) s += g.vertex(v).mu;
  return s;
}

namespace {

// Where lo <= d <= hi on [a, b], given d(a) = da and constant slope.
void linear_piece(std::size_t e, double a, double b, double da, double slope, double lo, double hi,
                  std::vector<EdgeInterval>& out) {
  double x0, x1;
  if (slope > 0) {
    x0 = a + (lo - da);
    x1 = a + (hi - da);
  } else {
    x0 = a + (da - hi);
    x1 = a + (da - lo);
  }
  x0 = std::max(x0, a);
  x1 = std::min(x1, b);
  if (x1 > x0) out.push_back({e, x0, x1});
}

}  // namespace

std::vector<EdgeInterval> edge_level_intervals(const EdgeProfile& p, std::size_t e, double lo,
                                               double hi) {
  std::vector<EdgeInterval> out;
  if (hi < lo) return out;
  switch (p.kind) {
    case EdgeCase::Rising:
      linear_piece(e, 0.0, p.length, p.d_i, 1.0, lo, hi, out);
      break;
    case EdgeCase::Falling:
      linear_piece(e, 0.0, p.length, p.d_i, -1.0, lo, hi, out);
      break;
    case EdgeCase::Peak:
      linear_piece(e, 0.0, p.q, p.d_i, 1.0, lo, hi, out);
      linear_piece(e, p.q, p.length, p.d_i + p.q, -1.0, lo, hi, out);
      break;
  }
  return out;
}

PointSet level_set(const MetricGraph& g, const DistanceField& df, double lo, double hi) {
  PointSet s;
  for (std::size_t v = 0; v < g.num_vertices(); ++v)
    if (df.vertex(v) >= lo && df.vertex(v) <= hi) s.vertices.push_back(v);
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    auto iv = edge_level_intervals(df.edge(e), e, lo, hi);
    s.intervals.insert(s.intervals.end(), iv.begin(), iv.end());
  }
  return s;
}

BallAnnulus ball_and_annulus(const MetricGraph& g, const DistanceField& df, double R) {
  if (!(R > 0.0)) throw std::invalid_argument("radius must be positive");
  BallAnnulus out;
  const double inf = std::numeric_limits<double>::infinity();
  // Edge pieces of the open ball are reported by their closures.
  out.ball = level_set(g, df, -inf, R);
  std::erase_if(out.ball.vertices, [&](std::size_t v) { return !(df.vertex(v) < R); });
  out.annulus = level_set(g, df, R, 2.0 * R);
  return out;
}

}  // namespace qg

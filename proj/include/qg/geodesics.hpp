#pragma once

#include <vector>

#include "qg/graph.hpp"

namespace qg {

enum class EdgeCase { Rising, Falling, Peak };

const char* to_string(EdgeCase c);

// Distance data restricted to one edge.
struct EdgeProfile {
  double length = 0.0;
  double d_i = 0.0;  // d at coordinate 0
  double d_j = 0.0;  // d at coordinate length
  EdgeCase kind = EdgeCase::Rising;
  double q = 0.0;  // singular point, meaningful for Peak only

  // d(x) for x in [0, length]; min(d_i + x, d_j + length - x).
  double at(double x) const;
  // Slope of d at x, taking the left branch at q.
  double slope(double x) const;
  // Largest value of d on the edge.
  double peak_value() const;
};

struct DistanceField {
  std::vector<double> vertex_dist;
  std::vector<EdgeProfile> edges;

  double vertex(std::size_t v) const { return vertex_dist.at(v); }
  const EdgeProfile& edge(std::size_t e) const { return edges.at(e); }
};

inline constexpr double kTieTolerance = 1e-12;

// Dijkstra from the base; ties broken by vertex index. Throws if some vertex is unreachable.
std::vector<double> vertex_distances(const MetricGraph& g);
DistanceField classify_edges(const MetricGraph& g, std::vector<double> vertex_dist);
DistanceField distance_field(const MetricGraph& g);

double point_distance(const MetricGraph& g, const DistanceField& df, const GraphPoint& p);

struct EdgeInterval {
  std::size_t edge;
  double lo, hi;
};

struct PointSet {
  std::vector<std::size_t> vertices;
  std::vector<EdgeInterval> intervals;

  double edge_measure() const;
  double vertex_measure(const MetricGraph& g) const;
};

// Pieces of edge e where lo <= d <= hi, one per monotone segment of d.
std::vector<EdgeInterval> edge_level_intervals(const EdgeProfile& p, std::size_t e, double lo,
                                               double hi);

// Vertices and edge pieces with lo <= d <= hi.
PointSet level_set(const MetricGraph& g, const DistanceField& df, double lo, double hi);

struct BallAnnulus {
  PointSet ball;     // d < R
  PointSet annulus;  // R <= d <= 2R
};

BallAnnulus ball_and_annulus(const MetricGraph& g, const DistanceField& df, double R);

}  // namespace qg

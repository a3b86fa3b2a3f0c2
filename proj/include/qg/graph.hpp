#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace qg {

struct Vertex {
  std::string id;
  double mu = 1.0;
};

struct Edge {
  std::string id;
  std::size_t from = 0;  // i(e), coordinate 0
  std::size_t to = 0;    // j(e), coordinate length
  double length = 1.0;
  double omega = 1.0;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Incidence record: edge index plus whether the vertex is the edge's final end.
struct Incidence {
  std::size_t edge;
  bool at_final;
};

class MetricGraph {
 public:
  class Builder {
   public:
    Builder& vertex(std::string id, double mu = 1.0);
    Builder& edge(std::string id, std::string_view from, std::string_view to,
                  double length = 1.0, double omega = 1.0);
    Builder& base(std::string_view id);
    MetricGraph build() &&;
    MetricGraph build() const&;

   private:
    std::vector<Vertex> vertices_;
    struct PendingEdge {
      std::string id, from, to;
      double length, omega;
    };
    std::vector<PendingEdge> edges_;
    std::string base_;
  };

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Vertex& vertex(std::size_t v) const { return vertices_.at(v); }
  const Edge& edge(std::size_t e) const { return edges_.at(e); }
  std::size_t base() const { return base_; }

  const std::vector<Incidence>& incident(std::size_t v) const { return incidence_.at(v); }
  std::size_t degree(std::size_t v) const { return incidence_.at(v).size(); }
  std::size_t other_end(std::size_t e, std::size_t v) const;

  std::size_t vertex_index(std::string_view id) const;
  std::size_t edge_index(std::string_view id) const;
  bool has_vertex(std::string_view id) const;
  bool has_edge(std::string_view id) const;

  double max_length() const;
  double min_length() const;

  bool operator==(const MetricGraph& o) const;

 private:
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::size_t base_ = 0;
  std::vector<std::vector<Incidence>> incidence_;
  std::unordered_map<std::string, std::size_t> vindex_, eindex_;
};

// Text format: `vertex <id> mu=<x>`, `edge <id> <from> <to> length=<x> omega=<x>`, `base <id>`.
MetricGraph build_graph(std::string_view text);
MetricGraph load_graph(const std::string& path);
std::string to_spec_text(const MetricGraph& g);

struct VertexPoint {
  std::size_t vertex;
};
struct EdgePoint {
  std::size_t edge;
  double x;
};
using GraphPoint = std::variant<VertexPoint, EdgePoint>;

// Throws unless 0 < x < length.
GraphPoint interior_point(const MetricGraph& g, std::size_t e, double x);

struct HypothesisReport {
  bool connected = false;
  bool locally_finite = false;
  bool no_loops = false;
  double j_sup = 0.0;
  double r_inf = 0.0;
  double weight_ratio_sup = 0.0;
  double R0 = 1.0;
  bool ok() const { return connected && locally_finite && no_loops && r_inf > 0.0; }
};

HypothesisReport validate_hypotheses(const MetricGraph& g);

// R0 = max(2 sup l_e, 1).
double base_radius(const MetricGraph& g);

}  // namespace qg

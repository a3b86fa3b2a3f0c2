#pragma once

#include <string>
#include <vector>

#include "qg/graph.hpp"

namespace qg {

// Path v0 - v1 - ... - vn, edges e1..en oriented away from the base v0.
// Truncates the half-line family at n edges.
MetricGraph path_graph(std::size_t n, double length = 1.0);

// Center c with k spokes c -> l1..lk; base c. Already finite, no truncation.
MetricGraph star_graph(std::size_t k, double length = 1.0);

// Rooted b-ary tree, root r is the base, edges point away from the root.
// Truncates the infinite regular tree at the given depth (b^depth leaves).
MetricGraph tree_graph(std::size_t branching, std::size_t depth, double length = 1.0);

// Chain v0 - v1 - ... - v_links where every consecutive pair is joined by one
// edge per entry of `lengths`. Truncates the infinite chain at `links` links.
MetricGraph parallel_chain(std::size_t links, const std::vector<double>& lengths = {1.0, 3.0});

// Two rails u0..un and w0..wn with rungs u_k - w_k; base u0.
// Truncates the infinite ladder after n rail edges.
MetricGraph ladder_graph(std::size_t n, double length = 1.0);

// Parameterised infinite family, truncated on demand.
struct Family {
  enum class Kind { Path, Star, Tree, Parallel, Ladder };
  Kind kind = Kind::Path;
  std::size_t param = 2;  // star spokes or tree branching
  double length = 1.0;
  std::vector<double> parallel_lengths{1.0, 3.0};

  // Smallest member containing every point at distance <= radius from the base.
  // The star family is the spider with `param` legs of unit segments.
  MetricGraph truncate(double radius) const;
  // Member with n generations (edges along a path or a star leg, depth of a tree, ...).
  MetricGraph make(std::size_t n) const;
  std::string name() const;
};

// "path", "star:5", "tree:2", "tree:3:0.5", "parallel:1,3", "ladder".
Family parse_family(const std::string& text);

// Spider: `legs` legs of `segments` unit segments each, joined at the base.
MetricGraph spider_graph(std::size_t legs, std::size_t segments, double length = 1.0);

}  // namespace qg

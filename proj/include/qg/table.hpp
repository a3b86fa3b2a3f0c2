#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "qg/function.hpp"
#include "qg/graph.hpp"

namespace qg {

// One row of a function table: `v:<id>` or `e:<id>:<coord>`, then a value.
struct TableEntry {
  std::string location;
  double value = 0.0;
};

// CSV rows "location,value"; '#' comments, blank lines and a "location,value" header are skipped.
// Throws ParseError on malformed rows, unknown ids, coordinates outside the open edge or
// duplicated locations. Reading stops at the first blank line after a row, so a full
// `qg solve` report can be passed as is.
std::vector<TableEntry> parse_function_table(std::string_view text);

// Every vertex needs a value. On each edge the samples (plus the two vertex values) are
// interpolated by the degree-4 polynomial through the nearest five points, so the second
// derivative is available wherever it is asked for. An edge without samples is affine.
GraphFunction function_from_table(const MetricGraph& g, const std::vector<TableEntry>& rows);

// Vertex values plus `samples` equally spaced interior points per edge.
std::vector<TableEntry> sample_function(const MetricGraph& g, const GraphFunction& f, int samples);

std::string format_location_vertex(const MetricGraph& g, std::size_t v);
std::string format_location_edge(const MetricGraph& g, std::size_t e, double x);

}  // namespace qg

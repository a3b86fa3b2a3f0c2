#include "qg/table.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <set>

namespace qg {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_number(std::string_view s, std::size_t line) {
  s = trim(s);
  double x = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(x))
    throw ParseError(line, "bad number '" + std::string(s) + "'");
  return x;
}

std::string shortest(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  // Prefer the shortest representation that round-trips.
  for (int p = 1; p <= 17; ++p) {
    char t[64];
    std::snprintf(t, sizeof t, "%.*g", p, x);
    if (std::strtod(t, nullptr) == x) return t;
  }
  return buf;
}

// Value, first and second derivative at x of the interpolant through (xs, ys), Newton form.
Jet newton_jet(const double* xs, const double* ys, int n, double x) {
  double c[5] = {};
  for (int i = 0; i < n; ++i) c[i] = ys[i];
  for (int k = 1; k < n; ++k)
    for (int i = n - 1; i >= k; --i) c[i] = (c[i] - c[i - 1]) / (xs[i] - xs[i - k]);
  double p = c[n - 1], d1 = 0.0, d2 = 0.0;
  for (int k = n - 2; k >= 0; --k) {
    const double t = x - xs[k];
    d2 = d2 * t + 2.0 * d1;
    d1 = d1 * t + p;
    p = p * t + c[k];
  }
  return {p, d1, d2};
}

}  // namespace

std::vector<TableEntry> parse_function_table(std::string_view text) {
  std::vector<TableEntry> rows;
  std::set<std::string> seen;
  std::size_t line = 0;
  while (!text.empty()) {
    ++line;
    const auto nl = text.find('\n');
    std::string_view ln = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (ln.empty() && !rows.empty()) break;  // end of the first block; later blocks are reports
    if (ln.empty() || ln.front() == '#') continue;
    const auto comma = ln.rfind(',');
    if (comma == std::string_view::npos) throw ParseError(line, "expected 'location,value'");
    const std::string loc(trim(ln.substr(0, comma)));
    if (loc == "location") continue;
    if (loc.rfind("v:", 0) != 0 && loc.rfind("e:", 0) != 0)
      throw ParseError(line, "location must start with v: or e:, got '" + loc + "'");
    if (!seen.insert(loc).second) throw ParseError(line, "duplicate location '" + loc + "'");
    rows.push_back({loc, parse_number(ln.substr(comma + 1), line)});
  }
  return rows;
}

GraphFunction function_from_table(const MetricGraph& g, const std::vector<TableEntry>& rows) {
  std::vector<double> vv(g.num_vertices(), std::nan(""));
  std::vector<std::map<double, double>> samples(g.num_edges());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::string& loc = rows[r].location;
    const std::size_t line = r + 1;
    if (loc.rfind("v:", 0) == 0) {
      const std::string id = loc.substr(2);
      if (!g.has_vertex(id)) throw ParseError(line, "unknown vertex '" + id + "'");
      vv[g.vertex_index(id)] = rows[r].value;
      continue;
    }
    const auto colon = loc.rfind(':');
    if (colon <= 2) throw ParseError(line, "expected e:<id>:<coord>, got '" + loc + "'");
    const std::string id = loc.substr(2, colon - 2);
    if (!g.has_edge(id)) throw ParseError(line, "unknown edge '" + id + "'");
    const std::size_t e = g.edge_index(id);
    const double x = parse_number(std::string_view(loc).substr(colon + 1), line);
    if (!(x > 0.0 && x < g.edge(e).length))
      throw ParseError(line, "coordinate outside the open edge in '" + loc + "'");
    if (!samples[e].emplace(x, rows[r].value).second) throw ParseError(line, "duplicate location '" + loc + "'");
  }
  for (std::size_t v = 0; v < g.num_vertices(); ++v)
    if (std::isnan(vv[v])) throw std::invalid_argument("function table has no value for vertex '" + g.vertex(v).id + "'");

  std::vector<EdgeFunction> ef;
  ef.reserve(g.num_edges());
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    std::vector<double> xs{0.0}, ys{vv[ed.from]};
    for (const auto& [x, y] : samples[e]) {
      xs.push_back(x);
      ys.push_back(y);
    }
    xs.push_back(ed.length);
    ys.push_back(vv[ed.to]);
    ef.push_back({[xs = std::move(xs), ys = std::move(ys)](double x) {
                    const int m = int(xs.size());
                    const int w = std::min(5, m);
                    const int i = int(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin()) - 1;
                    const int start = std::clamp(i - (w - 1) / 2, 0, m - w);
                    return newton_jet(xs.data() + start, ys.data() + start, w, x);
                  },
                  2});
  }
  return GraphFunction(std::move(vv), std::move(ef));
}

std::vector<TableEntry> sample_function(const MetricGraph& g, const GraphFunction& f, int samples) {
  std::vector<TableEntry> out;
  for (std::size_t v = 0; v < g.num_vertices(); ++v) out.push_back({format_location_vertex(g, v), f.vertex(v)});
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const double l = g.edge(e).length;
    for (int k = 1; k <= samples; ++k) {
      const double x = l * k / (samples + 1);
      out.push_back({format_location_edge(g, e, x), f.value(e, x)});
    }
  }
  return out;
}

std::string format_location_vertex(const MetricGraph& g, std::size_t v) { return "v:" + g.vertex(v).id; }

std::string format_location_edge(const MetricGraph& g, std::size_t e, double x) {
  return "e:" + g.edge(e).id + ":" + shortest(x);
}

}  // namespace qg

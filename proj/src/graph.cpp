#include "qg/graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <queue>
#include <sstream>

namespace qg {

namespace {

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void require_positive(double x, const std::string& what) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw std::invalid_argument(what + " must be positive and finite, got " + fmt_double(x));
}

}  // namespace

MetricGraph::Builder& MetricGraph::Builder::vertex(std::string id, double mu) {
  vertices_.push_back({std::move(id), mu});
  return *this;
}

MetricGraph::Builder& MetricGraph::Builder::edge(std::string id, std::string_view from,
                                                 std::string_view to, double length,
                                                 double omega) {
  edges_.push_back({std::move(id), std::string(from), std::string(to), length, omega});
  return *this;
}

MetricGraph::Builder& MetricGraph::Builder::base(std::string_view id) {
  base_ = std::string(id);
  return *this;
}

MetricGraph MetricGraph::Builder::build() && { return static_cast<const Builder&>(*this).build(); }

MetricGraph MetricGraph::Builder::build() const& {
  MetricGraph g;
  g.vertices_.reserve(vertices_.size());
  for (const auto& v : vertices_) {
    if (v.id.empty()) throw std::invalid_argument("empty vertex id");
    require_positive(v.mu, "mu of vertex '" + v.id + "'");
    if (!g.vindex_.emplace(v.id, g.vertices_.size()).second)
      throw std::invalid_argument("duplicate vertex id '" + v.id + "'");
    g.vertices_.push_back(v);
  }
  g.edges_.reserve(edges_.size());
  for (const auto& pe : edges_) {
    if (pe.id.empty()) throw std::invalid_argument("empty edge id");
    auto fi = g.vindex_.find(pe.from);
    if (fi == g.vindex_.end())
      throw std::invalid_argument("edge '" + pe.id + "' references unknown vertex '" + pe.from + "'");
    auto ti = g.vindex_.find(pe.to);
    if (ti == g.vindex_.end())
      throw std::invalid_argument("edge '" + pe.id + "' references unknown vertex '" + pe.to + "'");
    if (fi->second == ti->second)
      throw std::invalid_argument("edge '" + pe.id + "' is a loop at '" + pe.from + "'");
    require_positive(pe.length, "length of edge '" + pe.id + "'");
    require_positive(pe.omega, "omega of edge '" + pe.id + "'");
    if (!g.eindex_.emplace(pe.id, g.edges_.size()).second)
      throw std::invalid_argument("duplicate edge id '" + pe.id + "'");
    g.edges_.push_back({pe.id, fi->second, ti->second, pe.length, pe.omega});
  }
  if (base_.empty()) throw std::invalid_argument("no base vertex given");
  auto bi = g.vindex_.find(base_);
  if (bi == g.vindex_.end()) throw std::invalid_argument("base references unknown vertex '" + base_ + "'");
  g.base_ = bi->second;

  g.incidence_.assign(g.vertices_.size(), {});
  for (std::size_t e = 0; e < g.edges_.size(); ++e) {
    g.incidence_[g.edges_[e].from].push_back({e, false});
    g.incidence_[g.edges_[e].to].push_back({e, true});
  }
  return g;
}

std::size_t MetricGraph::other_end(std::size_t e, std::size_t v) const {
  const Edge& ed = edges_.at(e);
  if (ed.from == v) return ed.to;
  if (ed.to == v) return ed.from;
  throw std::invalid_argument("vertex '" + vertices_.at(v).id + "' is not an endpoint of edge '" +
                              ed.id + "'");
}

std::size_t MetricGraph::vertex_index(std::string_view id) const {
  auto it = vindex_.find(std::string(id));
  if (it == vindex_.end()) throw std::out_of_range("unknown vertex '" + std::string(id) + "'");
  return it->second;
}

std::size_t MetricGraph::edge_index(std::string_view id) const {
  auto it = eindex_.find(std::string(id));
  if (it == eindex_.end()) throw std::out_of_range("unknown edge '" + std::string(id) + "'");
  return it->second;
}

bool MetricGraph::has_vertex(std::string_view id) const { return vindex_.count(std::string(id)) > 0; }
bool MetricGraph::has_edge(std::string_view id) const { return eindex_.count(std::string(id)) > 0; }

double MetricGraph::max_length() const {
  double m = 0.0;
  for (const auto& e : edges_) m = std::max(m, e.length);
  return m;
}

double MetricGraph::min_length() const {
  if (edges_.empty()) return 0.0;
  double m = edges_.front().length;
  for (const auto& e : edges_) m = std::min(m, e.length);
  return m;
}

bool MetricGraph::operator==(const MetricGraph& o) const {
  if (base_ != o.base_ || vertices_.size() != o.vertices_.size() || edges_.size() != o.edges_.size())
    return false;
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    if (vertices_[i].id != o.vertices_[i].id || vertices_[i].mu != o.vertices_[i].mu) return false;
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge &a = edges_[i], &b = o.edges_[i];
    if (a.id != b.id || a.from != b.from || a.to != b.to || a.length != b.length || a.omega != b.omega)
      return false;
  }
  return true;
}

namespace {

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

double parse_kv(std::string_view tok, std::string_view key, std::size_t line) {
  if (tok.size() <= key.size() + 1 || tok.substr(0, key.size()) != key || tok[key.size()] != '=')
    throw ParseError(line, "expected " + std::string(key) + "=<number>, got '" + std::string(tok) + "'");
  std::string_view num = tok.substr(key.size() + 1);
  double x = 0.0;
  auto [p, ec] = std::from_chars(num.data(), num.data() + num.size(), x);
  if (ec != std::errc() || p != num.data() + num.size())
    throw ParseError(line, "bad number '" + std::string(num) + "'");
  if (!(x > 0.0) || !std::isfinite(x))
    throw ParseError(line, std::string(key) + " must be positive, got " + std::string(num));
  return x;
}

}  // namespace

MetricGraph build_graph(std::string_view text) {
  MetricGraph::Builder b;
  std::unordered_map<std::string, std::size_t> vline, eline;
  struct Ref {
    std::string vertex;
    std::size_t line;
  };
  std::vector<Ref> refs;
  bool have_base = false;

  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++lineno;
    if (auto h = line.find('#'); h != std::string_view::npos) line = line.substr(0, h);
    auto tok = split_ws(line);
    if (tok.empty()) continue;

    if (tok[0] == "vertex") {
      if (tok.size() != 3) throw ParseError(lineno, "expected: vertex <id> mu=<x>");
      std::string id(tok[1]);
      if (!vline.emplace(id, lineno).second) throw ParseError(lineno, "duplicate vertex id '" + id + "'");
      b.vertex(id, parse_kv(tok[2], "mu", lineno));
    } else if (tok[0] == "edge") {
      if (tok.size() != 6)
        throw ParseError(lineno, "expected: edge <id> <from> <to> length=<x> omega=<x>");
      std::string id(tok[1]);
      if (!eline.emplace(id, lineno).second) throw ParseError(lineno, "duplicate edge id '" + id + "'");
      if (tok[2] == tok[3]) throw ParseError(lineno, "loop edge '" + id + "'");
      double len = parse_kv(tok[4], "length", lineno);
      double om = parse_kv(tok[5], "omega", lineno);
      b.edge(id, tok[2], tok[3], len, om);
      refs.push_back({std::string(tok[2]), lineno});
      refs.push_back({std::string(tok[3]), lineno});
    } else if (tok[0] == "base") {
      if (tok.size() != 2) throw ParseError(lineno, "expected: base <vertex-id>");
      if (have_base) throw ParseError(lineno, "base given twice");
      have_base = true;
      b.base(tok[1]);
      refs.push_back({std::string(tok[1]), lineno});
    } else {
      throw ParseError(lineno, "unknown directive '" + std::string(tok[0]) + "'");
    }
  }
  for (const auto& r : refs)
    if (!vline.count(r.vertex)) throw ParseError(r.line, "unknown vertex '" + r.vertex + "'");
  if (!have_base) throw ParseError(lineno, "missing base line");
  return std::move(b).build();
}

MetricGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return build_graph(ss.str());
}

std::string to_spec_text(const MetricGraph& g) {
  std::string out;
  for (const auto& v : g.vertices()) out += "vertex " + v.id + " mu=" + fmt_double(v.mu) + "\n";
  for (const auto& e : g.edges())
    out += "edge " + e.id + " " + g.vertex(e.from).id + " " + g.vertex(e.to).id +
           " length=" + fmt_double(e.length) + " omega=" + fmt_double(e.omega) + "\n";
  out += "base " + g.vertex(g.base()).id + "\n";
  return out;
}

GraphPoint interior_point(const MetricGraph& g, std::size_t e, double x) {
  const double l = g.edge(e).length;
  if (!(x > 0.0 && x < l))
    throw std::out_of_range("coordinate " + fmt_double(x) + " outside (0, " + fmt_double(l) +
                            ") on edge '" + g.edge(e).id + "'");
  return EdgePoint{e, x};
}

double base_radius(const MetricGraph& g) { return std::max(2.0 * g.max_length(), 1.0); }

HypothesisReport validate_hypotheses(const MetricGraph& g) {
  HypothesisReport r;
  const std::size_t n = g.num_vertices();

  std::vector<char> seen(n, 0);
  std::queue<std::size_t> q;
  if (n > 0) {
    seen[g.base()] = 1;
    q.push(g.base());
  }
  std::size_t reached = n > 0 ? 1 : 0;
  while (!q.empty()) {
    std::size_t v = q.front();
    q.pop();
    for (const auto& inc : g.incident(v)) {
      std::size_t w = g.other_end(inc.edge, v);
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        q.push(w);
      }
    }
  }
  r.connected = reached == n;
  // A finite instance is locally finite by construction.
  r.locally_finite = true;
  r.no_loops = std::all_of(g.edges().begin(), g.edges().end(),
                           [](const Edge& e) { return e.from != e.to; });
  r.j_sup = g.max_length();
  r.r_inf = g.min_length();
  for (std::size_t v = 0; v < n; ++v) {
    double s = 0.0;
    for (const auto& inc : g.incident(v)) s += g.edge(inc.edge).omega;
    r.weight_ratio_sup = std::max(r.weight_ratio_sup, s / g.vertex(v).mu);
  }
  r.R0 = base_radius(g);
  return r;
}

}  // namespace qg

#include "qg/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <deque>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <unistd.h>

#include "qg/calculus.hpp"
#include "qg/generators.hpp"
#include "qg/geodesics.hpp"
#include "qg/graph.hpp"
#include "qg/growth.hpp"
#include "qg/mollify.hpp"
#include "qg/solver.hpp"
#include "qg/table.hpp"
#include "qg/testfn.hpp"

namespace qg::cli {

namespace {

using json = nlohmann::ordered_json;

// Bad flag values found after parsing; reported like a parse error.
struct UsageError : std::runtime_error {
  UsageError(const std::string& flag, const std::string& what) : std::runtime_error(flag + ": " + what) {}
};

struct Table {
  std::string name;
  std::vector<std::string> cols;
  std::vector<std::vector<json>> rows;
  Table& row(std::vector<json> r) {
    rows.push_back(std::move(r));
    return *this;
  }
};

struct Report {
  std::deque<Table> tables;  // deque: add() hands out references that must survive later adds
  std::string raw;  // gen: graph text instead of tables
  int status = 0;
  Table& add(std::string name, std::vector<std::string> cols) {
    tables.push_back({std::move(name), std::move(cols), {}});
    return tables.back();
  }
};

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string cell(const json& v) {
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
  if (v.is_number()) return num(v.get<double>());
  std::string s = v.get<std::string>();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

json number(double x) { return std::isfinite(x) ? json(x) : json(num(x)); }

std::string render_csv(const Report& r) {
  std::string s;
  for (std::size_t t = 0; t < r.tables.size(); ++t) {
    const Table& tb = r.tables[t];
    if (t) s += "\n";
    for (std::size_t c = 0; c < tb.cols.size(); ++c) s += (c ? "," : "") + tb.cols[c];
    s += "\n";
    for (const auto& row : tb.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) s += (c ? "," : "") + cell(row[c]);
      s += "\n";
    }
  }
  return s;
}

std::string render_json(const Report& r) {
  json doc = json::object();
  for (const Table& tb : r.tables) {
    json arr = json::array();
    for (const auto& row : tb.rows) {
      json o = json::object();
      for (std::size_t c = 0; c < tb.cols.size(); ++c) o[tb.cols[c]] = row[c];
      arr.push_back(std::move(o));
    }
    doc[tb.name] = std::move(arr);
  }
  doc["status"] = r.status;
  return doc.dump(2) + "\n";
}

// Temp file in the target directory, then rename over the target.
void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    f << content;
    f.flush();
    if (!f) throw std::runtime_error("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot rename onto '" + path + "': " + ec.message());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct Common {
  bool json = false;
  std::string out;
  std::uint64_t seed = 1;
};

struct GraphSource {
  std::string graph_file;
  std::string family = "path";
  std::size_t n = 8;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_flag("--json", c.json, "structured JSON instead of CSV");
  sub->add_option("--out", c.out, "write the report here (atomically) instead of standard output");
  sub->add_option("--seed", c.seed, "seed for randomized fixtures");
}

void add_graph_source(CLI::App* sub, GraphSource& s) {
  auto* file = sub->add_option("--graph", s.graph_file, "graph spec file")->check(CLI::ExistingFile);
  auto* fam = sub->add_option("--family", s.family, "generator family: path, star:k, tree:b, parallel:a,b, ladder");
  auto* n = sub->add_option("--n", s.n, "generations of the generated member")->check(CLI::Range(1, 64));
  file->excludes(fam)->excludes(n);
}

MetricGraph load_source(const GraphSource& s) {
  if (!s.graph_file.empty()) return build_graph(read_file(s.graph_file));
  return parse_family(s.family).make(s.n);
}

CLI::Validator above_one() {
  return CLI::Validator(
      [](std::string& v) -> std::string {
        try {
          return std::stod(v) > 1.0 ? "" : "must be > 1";
        } catch (...) {
          return "not a number";
        }
      },
      "> 1");
}

const auto kPositive = CLI::PositiveNumber;
const auto kNonNegative = CLI::NonNegativeNumber;

std::vector<double> parse_list(const std::string& flag, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  for (std::string x; std::getline(ss, x, ',');) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(x, &used));
      if (used != x.size()) throw std::invalid_argument(x);
    } catch (...) {
      throw UsageError(flag, "bad number '" + x + "'");
    }
    if (!(out.back() > 0)) throw UsageError(flag, "entries must be positive");
  }
  if (out.empty()) throw UsageError(flag, "empty list");
  return out;
}

std::vector<std::size_t> parse_caps(const MetricGraph& g, const std::string& text) {
  std::vector<std::size_t> caps;
  std::stringstream ss(text);
  for (std::string id; std::getline(ss, id, ',');) {
    if (id.empty()) continue;
    if (!g.has_vertex(id)) throw UsageError("--caps", "unknown vertex '" + id + "'");
    caps.push_back(g.vertex_index(id));
  }
  return caps;
}

ModifiedDistanceField make_mdf(const MetricGraph& g, const std::string& name) {
  DistanceField df = distance_field(g);
  if (name == "quintic") return modified_distance(g, df, Mollifier::quintic());
  if (name == "bump") return modified_distance(g, df, Mollifier::bump());
  if (name == "tau") return c1_modified_distance(g, df, StepFunctionTau::smoothstep());
  throw UsageError("--mollifier", "expected quintic, bump or tau");
}

// 1/(1 + d~): satisfies Kirchhoff wherever d~ does.
GraphFunction default_u(const MetricGraph& g, const ModifiedDistanceField& mdf) {
  std::vector<EdgeFunction> ef;
  for (std::size_t e = 0; e < g.num_edges(); ++e)
    ef.push_back({[&mdf, e](double x) {
                    const Jet d = mdf.eval(e, x);
                    const double w = 1.0 / (1.0 + d.v);
                    return Jet{w, -w * w * d.d1, 2 * w * w * w * d.d1 * d.d1 - w * w * d.d2};
                  },
                  2});
  return GraphFunction::from_edges(g, ef);
}

// eps sin(pi x / l_e) on every edge, zero at the vertices.
GraphFunction sine_fixture(const MetricGraph& g, double eps) {
  std::vector<EdgeFunction> ef;
  for (const Edge& ed : g.edges()) {
    const double k = std::numbers::pi / ed.length;
    ef.push_back({[=](double x) {
                    return Jet{eps * std::sin(k * x), eps * k * std::cos(k * x), -eps * k * k * std::sin(k * x)};
                  },
                  2});
  }
  return GraphFunction(std::vector<double>(g.num_vertices(), 0.0), ef);
}

MetricGraph random_graph(std::uint64_t seed, std::size_t n, std::size_t extra) {
  std::mt19937_64 rng(seed);
  auto pick = [&](std::size_t k) { return std::size_t(rng() % k); };
  MetricGraph::Builder b;
  for (std::size_t v = 0; v < n; ++v) b.vertex("n" + std::to_string(v), 0.5 + 0.25 * double(pick(8)));
  std::size_t id = 0;
  auto edge = [&](std::size_t u, std::size_t v) {
    b.edge("e" + std::to_string(id++), "n" + std::to_string(u), "n" + std::to_string(v), 0.25 * double(1 + pick(12)),
           0.5 + 0.125 * double(pick(12)));
  };
  for (std::size_t v = 1; v < n; ++v) edge(pick(v), v);
  for (std::size_t k = 0; k < extra && n > 1; ++k) {
    const std::size_t u = pick(n), v = pick(n);
    if (u != v) edge(u, v);
  }
  b.base("n0");
  return std::move(b).build();
}

// ---------------------------------------------------------------- subcommands

struct GenArgs {
  std::string family;
  std::size_t n = 8;
  std::size_t extra = 0;
};

Report do_gen(const GenArgs& a, const Common& c) {
  Report r;
  MetricGraph g = a.family == "random" ? random_graph(c.seed, a.n, a.extra) : parse_family(a.family).make(a.n);
  if (!c.json) {
    r.raw = to_spec_text(g);
    return r;
  }
  auto& v = r.add("vertices", {"id", "mu"});
  for (const auto& x : g.vertices()) v.row({x.id, x.mu});
  auto& e = r.add("edges", {"id", "from", "to", "length", "omega"});
  for (const auto& x : g.edges()) e.row({x.id, g.vertex(x.from).id, g.vertex(x.to).id, x.length, x.omega});
  r.add("base", {"id"}).row({g.vertex(g.base()).id});
  return r;
}

Report do_validate(const GraphSource& s) {
  const MetricGraph g = load_source(s);
  const HypothesisReport h = validate_hypotheses(g);
  Report r;
  r.add("hypotheses", {"key", "value"})
      .row({"vertices", g.num_vertices()})
      .row({"edges", g.num_edges()})
      .row({"connected", h.connected})
      .row({"locally_finite", h.locally_finite})
      .row({"no_loops", h.no_loops})
      .row({"j_sup", h.j_sup})
      .row({"r_inf", h.r_inf})
      .row({"weight_ratio_sup", h.weight_ratio_sup})
      .row({"R0", h.R0})
      .row({"ok", h.ok()});
  r.status = h.ok() ? 0 : 1;
  return r;
}

Report do_distance(const GraphSource& s) {
  const MetricGraph g = load_source(s);
  const DistanceField df = distance_field(g);
  Report r;
  auto& v = r.add("vertices", {"vertex_id", "d"});
  for (std::size_t i = 0; i < g.num_vertices(); ++i) v.row({g.vertex(i).id, df.vertex(i)});
  auto& e = r.add("edges", {"edge_id", "case", "q", "d_i", "d_j"});
  for (std::size_t i = 0; i < g.num_edges(); ++i) {
    const EdgeProfile& p = df.edge(i);
    e.row({g.edge(i).id, to_string(p.kind), p.kind == EdgeCase::Peak ? json(p.q) : json(nullptr), p.d_i, p.d_j});
  }
  return r;
}

struct MollifyArgs {
  std::string mollifier = "quintic";
  int grid = 64;
  double tol = 1e-4;
};

Report do_mollify(const GraphSource& s, const MollifyArgs& a) {
  const MetricGraph g = load_source(s);
  const ModifiedDistanceField mdf = make_mdf(g, a.mollifier);
  const Prop41Report p = verify_prop41(mdf, a.grid, a.tol);
  Report r;
  auto& e = r.add("edges", {"edge_id", "case", "sup_d1", "sup_d2", "max_deviation", "endpoint_fd1", "endpoint_fd2"});
  for (const EdgeProp41& x : p.per_edge)
    e.row({g.edge(x.edge).id, to_string(mdf.distance().edge(x.edge).kind), x.sup_d1, x.sup_d2, x.max_deviation,
           x.endpoint_fd1, x.endpoint_fd2});
  r.add("summary", {"key", "value"})
      .row({"mollifier", a.mollifier})
      .row({"smoothness_class", p.smoothness_class})
      .row({"max_vertex_fd1", p.max_vertex_fd1})
      .row({"max_vertex_fd2", p.max_vertex_fd2})
      .row({"max_segment_fd1", p.max_segment_fd1})
      .row({"max_segment_fd2", p.max_segment_fd2})
      .row({"max_deviation", p.max_deviation})
      .row({"j_sup", p.j_sup})
      .row({"segment_points", p.segment_points})
      .row({"max_jump_d1", p.max_jump_d1})
      .row({"max_jump_d2", p.max_jump_d2})
      .row({"passed", p.passed()});
  r.status = p.passed() ? 0 : 1;
  return r;
}

struct IbpArgs {
  int panels = 128;
  double s = 3.0;
  double R = 0.0;  // 0: R0 of the graph
  double delta = 1.0;
  double alpha = 0.0;  // 0: delta / R
  double tol = 1e-8;
  std::string function;
  std::string mollifier = "quintic";
};

GraphFunction load_u(const MetricGraph& g, const std::string& path) {
  return function_from_table(g, parse_function_table(read_file(path)));
}

Report do_ibp(const GraphSource& src, const IbpArgs& a) {
  const MetricGraph g = load_source(src);
  const ModifiedDistanceField mdf = make_mdf(g, a.mollifier);
  const double R = a.R > 0 ? a.R : base_radius(g);
  if (R < base_radius(g)) throw UsageError("--R", "must be at least R0 = " + num(base_radius(g)));
  if (a.panels % 2) throw UsageError("--panels", "must be even");
  const GraphFunction u = a.function.empty() ? default_u(g, mdf) : load_u(g, a.function);
  const QuadratureRule q = QuadratureRule::simpson(a.panels);

  const GraphFunction phi = compact_testfn(g, mdf, R, CutoffPhi::make(), a.s);
  const SupportPartition sp = support_partition(g, mdf, R);
  const IbpReport c = verify_ibp_compact(g, u, phi, sp, q);

  const GraphFunction psi = exp_testfn(g, mdf, R, ExpPsi::make(a.delta, R, mdf.j_sup()));
  EdgeBreaks breaks(g.num_edges());
  for (std::size_t e = 0; e < g.num_edges(); ++e)
    if (mdf.has_segment_point(e)) breaks[e].push_back(mdf.segment_point(e));
  const double alpha = a.alpha > 0 ? a.alpha : a.delta / R;
  const IbpReport w = verify_ibp_weighted(g, mdf.distance(), u, psi, q, alpha, &breaks);

  Report r;
  auto& t = r.add("ibp", {"variant", "R", "parameter", "panels", "lhs", "rhs", "residual", "identity_residual",
                          "max_kirchhoff_defect", "truncation_flux", "passed"});
  const bool cp = c.passed(a.tol), wp = w.residual <= a.tol;
  t.row({"compact", R, a.s, a.panels, c.lhs, c.rhs, c.residual, c.identity_residual, c.max_kirchhoff_defect, 0.0, cp});
  t.row({"weighted", R, a.delta, a.panels, w.lhs, w.rhs, w.residual, w.identity_residual, w.max_kirchhoff_defect,
         w.truncation_flux, wp});
  r.status = cp && wp ? 0 : 1;
  return r;
}

struct TestfnArgs {
  std::string family = "path";
  double R = 0.0;
  double s = 3.0;
  double delta = 1.0;
  int sweep = 2;
  int grid = 256;
  std::string mollifier = "quintic";
};

Report do_testfn(const TestfnArgs& a) {
  const Family fam = parse_family(a.family);
  const Mollifier m = a.mollifier == "bump" ? Mollifier::bump() : Mollifier::quintic();
  if (a.mollifier != "bump" && a.mollifier != "quintic") throw UsageError("--mollifier", "expected quintic or bump");
  const double R0 = base_radius(fam.make(1));
  const double R = a.R > 0 ? a.R : R0;
  if (R < R0) throw UsageError("--R", "must be at least R0 = " + num(R0));

  const auto s42 = sweep_lemma42(fam, m, R, a.s, a.sweep, a.grid);
  const auto s43 = sweep_lemma43(fam, m, R, a.delta, a.sweep, a.grid);
  Report r;
  auto& k = r.add("constants", {"lemma", "R", "vertices", "edge_constant", "vertex_constant", "max_kirchhoff", "passed"});
  auto& reg = r.add("regions", {"lemma", "R", "region", "sup"});
  auto& f = r.add("failures", {"lemma", "R", "message"});
  bool ok = true;
  auto emit = [&](const char* lemma, const std::vector<SweepRow>& rows) {
    std::vector<double> cs;
    for (const SweepRow& row : rows) {
      const BoundReport& b = row.report;
      k.row({lemma, row.R, row.vertices, b.edge_constant, b.vertex_constant, b.max_kirchhoff, b.passed()});
      for (const RegionSup& x : b.regions) reg.row({lemma, row.R, x.region, x.sup});
      for (const auto& msg : b.failures) f.row({lemma, row.R, msg});
      ok = ok && b.passed();
      cs.push_back(b.constant());
    }
    return drift(cs);
  };
  const double d42 = emit("cutoff", s42), d43 = emit("exponential", s43);
  r.add("drift", {"lemma", "drift"}).row({"cutoff", d42}).row({"exponential", d43});
  r.status = ok ? 0 : 1;
  return r;
}

struct GrowthArgs {
  std::string family = "path";
  std::string V = "const";
  double sigma = 2.0;
  double R0 = 2.0;
  double Rmax = 8.0;
  int Rsteps = 3;
  double delta = 0.0;
  int panels = 16;
};

std::vector<double> geometric(double lo, double hi, int steps) {
  std::vector<double> R;
  for (int k = 0; k < steps; ++k)
    R.push_back(steps == 1 ? lo : lo * std::pow(hi / lo, double(k) / (steps - 1)));
  return R;
}

Report do_growth(const GrowthArgs& a) {
  if (a.Rmax < a.R0) throw UsageError("--Rmax", "must be at least --R0");
  const Family fam = parse_family(a.family);
  const Potential V = parse_potential(a.V);
  const auto Rs = geometric(a.R0, a.Rmax, a.Rsteps);
  const QuadratureRule q = QuadratureRule::simpson(a.panels);
  const GrowthReport g = a.delta > 0 ? check_growth_thm32(fam, V, a.sigma, a.delta, Rs, q)
                                     : check_growth_thm31(fam, V, a.sigma, Rs, q);
  Report r;
  auto& t = r.add("growth", {"R", "vertices", "truncation_radius", "vertex_sum", "edge_sum", "bound", "ratio_v",
                             "ratio_e", "tail_share"});
  for (const GrowthRow& x : g.rows)
    t.row({x.R, x.vertices, x.truncation_radius, x.vertex_sum, x.edge_sum, x.bound, x.ratio_v, x.ratio_e,
           x.tail_share});
  r.add("summary", {"key", "value"})
      .row({"family", g.family})
      .row({"potential", g.potential})
      .row({"sigma", g.sigma})
      .row({"delta", g.delta})
      .row({"exponent_v", g.exponent_v})
      .row({"exponent_e", g.exponent_e})
      .row({"max_upper_ratio", g.max_upper_ratio})
      .row({"median_ratio", g.median_ratio})
      .row({"tail_converged", g.tail_converged})
      .row({"truncation_capped", g.truncation_capped})
      .row({"verdict", g.verdict()});
  r.status = g.holds ? 0 : 1;
  return r;
}

struct SolverArgs {
  std::string V = "const";
  double sigma = 2.0;
  double R = 4.0;
  double bv = 1.0;
  int n_per_edge = 16;
  double tol = 1e-10;
  std::string function;
  std::string caps;
  std::string domain_out;
  std::string R_list = "4,8,16,32";
};

Report do_certify(const GraphSource& s, const SolverArgs& a) {
  const MetricGraph g = load_source(s);
  const GraphFunction u = load_u(g, a.function);
  const GraphFunction V = parse_potential(a.V).on(g, distance_field(g));
  const auto caps = parse_caps(g, a.caps);
  const CertificateReport c = check_supersolution(g, discretize(g, a.n_per_edge), V, a.sigma, u, a.tol, caps);
  Report r;
  r.add("certificate", {"key", "value"})
      .row({"edge_residual", c.edge_residual})
      .row({"vertex_residual", c.vertex_residual})
      .row({"kirchhoff", c.kirchhoff})
      .row({"nodes_checked", c.nodes_checked})
      .row({"vertices_checked", c.vertices_checked})
      .row({"edge_ok", c.edge_ok})
      .row({"vertex_ok", c.vertex_ok})
      .row({"kirchhoff_ok", c.kirchhoff_ok})
      .row({"verdict", c.verdict()});
  r.status = c.supersolution() ? 0 : 1;
  return r;
}

Report do_solve(const GraphSource& s, const SolverArgs& a) {
  const MetricGraph g = load_source(s);
  const GraphFunction V = parse_potential(a.V).on(g, distance_field(g));
  const SolveResult res = solve_truncated(g, a.R, V, a.sigma, a.bv, a.n_per_edge);
  const MetricGraph& G = res.domain.graph;
  if (!a.domain_out.empty()) write_atomic(a.domain_out, to_spec_text(G));
  Report r;
  auto& t = r.add("solution", {"location", "value"});
  for (std::size_t v = 0; v < G.num_vertices(); ++v) t.row({format_location_vertex(G, v), res.values[v]});
  for (std::size_t e = 0; e < G.num_edges(); ++e)
    for (std::size_t k = 0; k < res.mesh.nodes[e]; ++k)
      t.row({format_location_edge(G, e, res.mesh.coord(e, k)), res.values[res.mesh.node(e, k)]});
  r.add("summary", {"key", "value"})
      .row({"unknowns", res.values.size()})
      .row({"converged", res.converged})
      .row({"fallback", res.fallback})
      .row({"iterations", res.iterations})
      .row({"residual", res.residual})
      .row({"min_value", res.min_value})
      .row({"max_value", res.max_value})
      .row({"message", res.message});
  r.status = res.converged ? 0 : 1;
  return r;
}

Report do_probe(const std::string& family, const SolverArgs& a) {
  const auto Rs = parse_list("--R-list", a.R_list);
  const ProbeTable p = liouville_probe(parse_family(family), parse_potential(a.V), a.sigma, Rs, a.bv, a.n_per_edge);
  Report r;
  auto& t = r.add("probe", {"R", "unknowns", "core_sup", "mass", "scale", "iterations", "residual", "converged"});
  bool ok = true;
  for (const ProbeRow& x : p.rows) {
    t.row({x.R, x.unknowns, x.core_sup, x.mass, x.scale, x.iterations, x.residual, x.converged});
    ok = ok && x.converged;
  }
  r.add("summary", {"key", "value"})
      .row({"family", p.family})
      .row({"potential", p.potential})
      .row({"sigma", p.sigma})
      .row({"boundary_value", p.boundary_value})
      .row({"core_radius", p.core_radius})
      .row({"strictly_decreasing", p.strictly_decreasing()})
      .row({"final_ratio", p.final_ratio()});
  r.status = ok ? 0 : 1;
  return r;
}

struct ChainArgs {
  std::string mode = "compact";
  std::string V = "const";
  double sigma = 2.0;
  double R = 0.0;
  double s = 3.0;
  double delta = 1.0;
  double eps = 0.5;
  int panels = 64;
  std::string function;
};

Report do_chain(const GraphSource& src, const ChainArgs& a) {
  const MetricGraph g = load_source(src);
  const ModifiedDistanceField mdf = make_mdf(g, "quintic");
  const double R = a.R > 0 ? a.R : base_radius(g);
  if (R < base_radius(g)) throw UsageError("--R", "must be at least R0 = " + num(base_radius(g)));
  const double sp = a.sigma / (a.sigma - 1);
  if (a.mode == "compact" && !(a.s > std::max(2.0, sp)))
    throw UsageError("--s", "must exceed max(2, sigma/(sigma-1)) = " + num(std::max(2.0, sp)));
  const GraphFunction u = a.function.empty() ? sine_fixture(g, a.eps) : load_u(g, a.function);
  const GraphFunction V = parse_potential(a.V).on(g, mdf.distance());
  const QuadratureRule q = QuadratureRule::simpson(a.panels);

  std::vector<std::pair<std::string, ChainReport>> chains;
  if (a.mode == "compact") {
    chains.emplace_back("cutoff", apriori_check_lemma41(g, mdf, u, V, a.sigma, R, a.s, q));
    chains.emplace_back("final", theorem_chain_check(g, mdf, u, V, a.sigma, R, a.s, ChainMode::Compact, q));
  } else {
    chains.emplace_back("exponential", apriori_check_lemma45(g, mdf, u, V, a.sigma, R, a.delta, q));
    chains.emplace_back("final", theorem_chain_check(g, mdf, u, V, a.sigma, R, a.delta, ChainMode::Weighted, q));
  }
  Report r;
  auto& lines = r.add("lines", {"chain", "label", "lhs", "rhs", "u_free", "slack"});
  auto& sum = r.add("chains", {"chain", "R", "parameter", "flux", "edge_constant", "vertex_constant", "tail_mass",
                               "precondition_ok", "precondition", "min_slack", "passed"});
  bool ok = true;
  for (const auto& [name, c] : chains) {
    for (const ChainLine& l : c.lines) lines.row({name, l.label, l.lhs, l.rhs, l.u_free, l.slack()});
    sum.row({name, c.R, c.parameter, c.flux, c.edge_constant, c.vertex_constant, number(c.tail_mass),
             c.precondition_ok, c.precondition, c.min_slack(), c.passed()});
    ok = ok && c.passed() && c.precondition_ok;
  }
  r.status = ok ? 0 : 1;
  return r;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Metric-graph calculus checks and probes", "qg"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  Common common;
  GraphSource src;

  GenArgs gen;
  auto* c_gen = app.add_subcommand("gen", "print a generated graph spec");
  c_gen->add_option("family", gen.family, "path, star:k, tree:b, parallel:a,b, ladder or random")->required();
  c_gen->add_option("--n", gen.n, "generations (random: vertex count)")->check(CLI::Range(1, 64));
  c_gen->add_option("--extra", gen.extra, "random: extra edges beyond the spanning tree");
  c_gen->footer("Contract: family parses; n >= 1. Output is the line-oriented graph spec.");
  add_common(c_gen, common);

  auto* c_val = app.add_subcommand("validate", "standing hypotheses and R0");
  add_graph_source(c_val, src);
  c_val->footer("Contract: graph builds. Exit 1 when a hypothesis fails.");
  add_common(c_val, common);

  auto* c_dist = app.add_subcommand("distance", "vertex distances and edge cases");
  add_graph_source(c_dist, src);
  c_dist->footer("Contract: every vertex reachable from the base.");
  add_common(c_dist, common);

  MollifyArgs mol;
  auto* c_mol = app.add_subcommand("mollify-check", "derivative checks of the modified distance");
  add_graph_source(c_mol, src);
  c_mol->add_option("--mollifier", mol.mollifier, "quintic|bump|tau")->check(CLI::IsMember({"quintic", "bump", "tau"}));
  c_mol->add_option("--grid", mol.grid, "samples per edge")->check(CLI::Range(4, 1 << 20));
  c_mol->add_option("--tol", mol.tol, "finite-difference tolerance")->check(kPositive);
  c_mol->footer("Contract: grid >= 4, tol > 0. Exit 1 when a promised bound fails.");
  add_common(c_mol, common);

  IbpArgs ibp;
  auto* c_ibp = app.add_subcommand("ibp-check", "integration by parts residuals");
  add_graph_source(c_ibp, src);
  c_ibp->add_option("--panels", ibp.panels, "Simpson panels per piece (even)")->check(CLI::Range(2, 1 << 20));
  c_ibp->add_option("--s", ibp.s, "exponent of the cutoff")->check(CLI::Range(1.0, 1e6));
  c_ibp->add_option("--R", ibp.R, "radius (default R0)")->check(kPositive);
  c_ibp->add_option("--delta", ibp.delta, "decay of the exponential test function")->check(kPositive);
  c_ibp->add_option("--alpha", ibp.alpha, "weight of the norm (default delta/R)")->check(kPositive);
  c_ibp->add_option("--tol", ibp.tol, "residual tolerance")->check(kPositive);
  c_ibp->add_option("--function", ibp.function, "function table for u (default 1/(1+d~))")->check(CLI::ExistingFile);
  c_ibp->footer("Contract: R >= R0, s >= 1, delta > 0, panels even. Exit 1 when a residual exceeds tol.");
  add_common(c_ibp, common);

  TestfnArgs tf;
  auto* c_tf = app.add_subcommand("testfn-check", "derivative bounds of the test functions");
  c_tf->add_option("--family", tf.family, "generator family");
  c_tf->add_option("--R", tf.R, "first radius (default R0)")->check(kPositive);
  c_tf->add_option("--s", tf.s, "cutoff exponent")->check(CLI::Range(1.0, 1e6));
  c_tf->add_option("--delta", tf.delta, "exponential decay")->check(kPositive);
  c_tf->add_option("--sweep", tf.sweep, "check R, 2R, ..., 2^k R")->check(CLI::Range(0, 8));
  c_tf->add_option("--grid", tf.grid, "samples per edge")->check(CLI::Range(8, 1 << 16));
  c_tf->add_option("--mollifier", tf.mollifier, "quintic|bump")->check(CLI::IsMember({"quintic", "bump"}));
  c_tf->footer("Contract: R >= R0, s >= 1, delta > 0. Exit 1 when a bound or plateau check fails.");
  add_common(c_tf, common);

  GrowthArgs gr;
  auto* c_gr = app.add_subcommand("growth-check", "volume growth conditions over an R sweep");
  c_gr->add_option("--family", gr.family, "generator family");
  c_gr->add_option("--V", gr.V, "const[:c] or powerlaw:beta");
  c_gr->add_option("--sigma", gr.sigma, "exponent")->check(above_one());
  c_gr->add_option("--R0", gr.R0, "smallest radius")->check(kPositive);
  c_gr->add_option("--Rmax", gr.Rmax, "largest radius")->check(kPositive);
  c_gr->add_option("--Rsteps", gr.Rsteps, "radii, geometrically spaced")->check(CLI::Range(1, 64));
  c_gr->add_option("--delta", gr.delta, "weighted tail condition with this delta (0: annulus)")->check(kNonNegative);
  c_gr->add_option("--panels", gr.panels, "Simpson panels")->check(CLI::Range(2, 1 << 16));
  c_gr->footer("Contract: sigma > 1, R0 >= the family's R0, Rmax >= R0. Exit 1 when the condition looks violated.");
  add_common(c_gr, common);

  SolverArgs sv;
  auto* c_cert = app.add_subcommand("certify", "discrete supersolution certificate for a function table");
  add_graph_source(c_cert, src);
  c_cert->add_option("--function", sv.function, "function table (v:<id> / e:<id>:<coord>)")
      ->required()
      ->check(CLI::ExistingFile);
  c_cert->add_option("--V", sv.V, "const[:c] or powerlaw:beta");
  c_cert->add_option("--sigma", sv.sigma, "exponent")->check(above_one());
  c_cert->add_option("--n-per-edge", sv.n_per_edge, "interior check nodes per edge")->check(CLI::Range(8, 1 << 20));
  c_cert->add_option("--tol", sv.tol, "slack allowed in each inequality")->check(kNonNegative);
  c_cert->add_option("--caps", sv.caps, "comma-separated vertex ids carrying Dirichlet data");
  c_cert->footer("Contract: every vertex has a value; sigma > 1; n-per-edge >= 8. Exit 1 on FAIL.");
  add_common(c_cert, common);

  auto* c_solve = app.add_subcommand("solve", "Dirichlet problem on the ball B_R");
  add_graph_source(c_solve, src);
  c_solve->add_option("--R", sv.R, "ball radius")->check(kPositive);
  c_solve->add_option("--sigma", sv.sigma, "exponent")->check(above_one());
  c_solve->add_option("--V", sv.V, "const[:c] or powerlaw:beta");
  c_solve->add_option("--bv", sv.bv, "boundary value")->check(kNonNegative);
  c_solve->add_option("--n-per-edge", sv.n_per_edge, "interior nodes per edge")->check(CLI::Range(8, 1 << 20));
  c_solve->add_option("--domain-out", sv.domain_out, "also write the ball as a graph spec");
  c_solve->footer("Contract: R > 0, sigma > 1, bv >= 0, n-per-edge >= 8. Exit 1 when Newton does not converge.");
  add_common(c_solve, common);

  std::string probe_family = "path";
  auto* c_probe = app.add_subcommand("probe", "positive-branch sweep over R");
  c_probe->add_option("--family", probe_family, "generator family");
  c_probe->add_option("--V", sv.V, "const[:c] or powerlaw:beta");
  c_probe->add_option("--sigma", sv.sigma, "exponent")->check(above_one());
  c_probe->add_option("--bv", sv.bv, "cap on the solution")->check(kNonNegative);
  c_probe->add_option("--R-list", sv.R_list, "comma-separated radii");
  c_probe->add_option("--n-per-edge", sv.n_per_edge, "interior nodes per edge")->check(CLI::Range(8, 1 << 20));
  c_probe->footer("Contract: sigma > 1, bv >= 0, radii positive. Exit 1 when a row does not converge.");
  add_common(c_probe, common);

  ChainArgs ch;
  auto* c_chain = app.add_subcommand("chain-check", "a priori inequality chains");
  add_graph_source(c_chain, src);
  c_chain->add_option("--mode", ch.mode, "compact|weighted")->check(CLI::IsMember({"compact", "weighted"}));
  c_chain->add_option("--V", ch.V, "const[:c] or powerlaw:beta");
  c_chain->add_option("--sigma", ch.sigma, "exponent")->check(above_one());
  c_chain->add_option("--R", ch.R, "radius (default R0)")->check(kPositive);
  c_chain->add_option("--s", ch.s, "cutoff exponent")->check(kPositive);
  c_chain->add_option("--delta", ch.delta, "exponential decay")->check(kPositive);
  c_chain->add_option("--eps", ch.eps, "amplitude of the default eps sin(pi x/l) fixture")->check(kNonNegative);
  c_chain->add_option("--panels", ch.panels, "Simpson panels")->check(CLI::Range(2, 1 << 16));
  c_chain->add_option("--function", ch.function, "function table for u")->check(CLI::ExistingFile);
  c_chain->footer(
      "Contract: R >= R0, sigma > 1, s > max(2, sigma/(sigma-1)) in compact mode. Exit 1 when a line has "
      "negative slack beyond the budget or a precondition fails.");
  add_common(c_chain, common);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.front()->help());
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  Report rep;
  try {
    if (name == "gen") rep = do_gen(gen, common);
    else if (name == "validate") rep = do_validate(src);
    else if (name == "distance") rep = do_distance(src);
    else if (name == "mollify-check") rep = do_mollify(src, mol);
    else if (name == "ibp-check") rep = do_ibp(src, ibp);
    else if (name == "testfn-check") rep = do_testfn(tf);
    else if (name == "growth-check") rep = do_growth(gr);
    else if (name == "certify") rep = do_certify(src, sv);
    else if (name == "solve") rep = do_solve(src, sv);
    else if (name == "probe") rep = do_probe(probe_family, sv);
    else rep = do_chain(src, ch);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n" << sub->help();
    return 2;
  }

  const std::string text = !rep.raw.empty() ? rep.raw : common.json ? render_json(rep) : render_csv(rep);
  try {
    if (common.out.empty()) out << text << std::flush;
    else write_atomic(common.out, text);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return rep.status;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace qg::cli

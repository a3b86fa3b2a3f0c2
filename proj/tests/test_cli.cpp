#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "doctest.h"
#include "qg/cli.hpp"
#include "qg/generators.hpp"
#include "qg/graph.hpp"
#include "qg/table.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream o, e;
  const int code = qg::cli::run(args, o, e);
  return {code, o.str(), e.str()};
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("qg_cli_" + std::to_string(::getpid()))) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& p) {
  std::ifstream f(p);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

void put(const std::string& p, const std::string& text) { std::ofstream(p) << text; }

// Value of `key` in a key,value CSV block.
std::string field(const std::string& csv, const std::string& key) {
  std::istringstream in(csv);
  for (std::string line; std::getline(in, line);)
    if (line.rfind(key + ",", 0) == 0) return line.substr(key.size() + 1);
  return "<missing>";
}

}  // namespace

TEST_CASE("gen prints a graph spec that builds") {
  auto r = run({"gen", "path", "--n", "16"});
  CHECK(r.code == 0);
  auto g = qg::build_graph(r.out);
  CHECK(g.num_edges() == 16);
  CHECK(g == qg::path_graph(16));

  auto t = run({"gen", "tree:3", "--n", "2"});
  CHECK(qg::build_graph(t.out).num_vertices() == 13);

  auto a = run({"gen", "random", "--n", "6", "--extra", "3", "--seed", "7"});
  auto b = run({"gen", "random", "--n", "6", "--extra", "3", "--seed", "7"});
  auto c = run({"gen", "random", "--n", "6", "--extra", "3", "--seed", "8"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out != c.out);
  CHECK(qg::build_graph(a.out).num_vertices() == 6);

  auto j = run({"gen", "star:4", "--n", "1", "--json"});
  auto doc = nlohmann::json::parse(j.out);
  CHECK(doc["edges"].size() == 4);
  CHECK(qg::validate_hypotheses(qg::build_graph(run({"gen", "star:4", "--n", "3"}).out)).weight_ratio_sup == 4.0);
  CHECK(doc["base"][0]["id"] == "c");
}

TEST_CASE("usage errors exit 2 and name the flag") {
  auto r = run({"solve", "--bogus"});
  CHECK(r.code == 2);
  CHECK(r.err.find("--bogus") != std::string::npos);
  CHECK(r.err.find("Contract") != std::string::npos);

  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  auto s = run({"solve", "--sigma", "1"});
  CHECK(s.code == 2);
  CHECK(s.err.find("--sigma") != std::string::npos);
  CHECK(run({"probe", "--R-list", "4,x"}).code == 2);
  CHECK(run({"ibp-check", "--R", "1"}).code == 2);  // below R0 = 2
  CHECK(run({"ibp-check", "--panels", "7"}).code == 2);
  CHECK(run({"chain-check", "--s", "1.5"}).code == 2);
  CHECK(run({"validate", "--graph", "/nonexistent/file"}).code == 2);
  CHECK(run({"gen", "blob"}).code == 2);
  CHECK(run({"solve", "--help"}).code == 0);
}

TEST_CASE("validate and distance") {
  TempDir tmp;
  auto v = run({"validate", "--family", "star:4", "--n", "1"});
  CHECK(v.code == 0);
  CHECK(field(v.out, "weight_ratio_sup") == "4");
  CHECK(field(v.out, "R0") == "2");

  put(tmp.file("two.txt"), "vertex a\nvertex b\nvertex c\nedge ab a b length=1\nbase a\n");
  auto bad = run({"validate", "--graph", tmp.file("two.txt")});
  CHECK(bad.code == 2);  // c is unreachable

  auto d = run({"distance", "--family", "parallel:1,3", "--n", "1"});
  CHECK(d.code == 0);
  CHECK(d.out.find("edge_id,case,q,d_i,d_j") != std::string::npos);
  CHECK(d.out.find("p2,peak,2,0,1") != std::string::npos);
  CHECK(d.out.find("p1,rising,,0,1") != std::string::npos);
  auto j = nlohmann::json::parse(run({"distance", "--family", "parallel:1,3", "--n", "1", "--json"}).out);
  CHECK(j["edges"][1]["q"] == 2.0);
  CHECK(j["edges"][0]["q"].is_null());
}

TEST_CASE("mollify-check") {
  for (const char* m : {"quintic", "bump", "tau"}) {
    auto r = run({"mollify-check", "--family", "parallel:1,3", "--n", "2", "--mollifier", m});
    CHECK(r.code == 0);
    CHECK(field(r.out, "passed") == "true");
  }
  auto q = run({"mollify-check", "--family", "tree:2", "--n", "3"});
  CHECK(field(q.out, "smoothness_class") == "3");
  CHECK(std::stod(field(q.out, "max_deviation")) <= 1.0 + 1e-9);
  CHECK(run({"mollify-check", "--mollifier", "cubic"}).code == 2);
}

TEST_CASE("ibp-check") {
  auto r = run({"ibp-check", "--family", "path", "--n", "4", "--panels", "128"});
  CHECK(r.code == 0);
  CHECK(r.out.find("compact,2,3,128") != std::string::npos);
  auto j = nlohmann::json::parse(run({"ibp-check", "--family", "tree:2", "--n", "3", "--json"}).out);
  CHECK(j["ibp"][0]["residual"].get<double>() <= 1e-8);
  CHECK(j["ibp"][1]["residual"].get<double>() <= 1e-8);
  CHECK(j["status"] == 0);
}

TEST_CASE("ibp-check flags a table with a Kirchhoff defect") {
  TempDir tmp;
  // Kink at v1 on P_2: u = |t - 1|.
  put(tmp.file("kink.csv"), "location,value\nv:v0,1\nv:v1,0\nv:v2,1\ne:e1:0.5,0.5\ne:e2:0.5,0.5\n");
  auto r = run({"ibp-check", "--family", "path", "--n", "2", "--function", tmp.file("kink.csv")});
  CHECK(r.code == 1);
  CHECK(r.out.find(",false") != std::string::npos);
}

TEST_CASE("testfn-check") {
  auto r = run({"testfn-check", "--family", "path", "--s", "1", "--sweep", "2"});
  CHECK(r.code == 0);
  CHECK(r.out.find("cutoff,8,20,") != std::string::npos);
  CHECK(r.out.find("edge_in_A") != std::string::npos);
  const auto pos = r.out.find("cutoff,", r.out.find("lemma,drift"));
  CHECK(std::stod(r.out.substr(pos + 7)) <= 1.5);
  CHECK(run({"testfn-check", "--R", "1"}).code == 2);
}

TEST_CASE("growth-check verdicts") {
  auto tree = run({"growth-check", "--family", "tree", "--V", "const", "--sigma", "2", "--R0", "2", "--Rmax", "6",
                   "--Rsteps", "3"});
  CHECK(tree.code == 1);
  CHECK(field(tree.out, "verdict") == "growing");
  auto path = run({"growth-check", "--family", "path", "--R0", "2", "--Rmax", "256", "--Rsteps", "8"});
  CHECK(path.code == 0);
  auto steep = run({"growth-check", "--family", "path", "--V", "powerlaw:2", "--R0", "2", "--Rmax", "256",
                    "--Rsteps", "8"});
  CHECK(steep.code == 1);
  auto weighted = run({"growth-check", "--family", "path", "--delta", "1", "--R0", "2", "--Rmax", "16",
                       "--Rsteps", "4"});
  CHECK(weighted.code == 0);
  CHECK(run({"growth-check", "--R0", "8", "--Rmax", "4"}).code == 2);
  CHECK(run({"growth-check", "--V", "cubic"}).code == 2);
}

TEST_CASE("solve, then certify the result") {
  TempDir tmp;
  auto r = run({"solve", "--family", "path", "--n", "6", "--R", "3", "--bv", "0.05", "--n-per-edge", "31",
                "--domain-out", tmp.file("ball.txt"), "--out", tmp.file("sol.csv")});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  const std::string sol = slurp(tmp.file("sol.csv"));
  CHECK(field(sol, "converged") == "true");
  CHECK(field(sol, "v:v3") == "0.05");
  CHECK(!fs::exists(tmp.file("sol.csv") + ".tmp." + std::to_string(::getpid())));

  // The report is a valid function table on the ball; the summary block after it is ignored.
  auto c = run({"certify", "--graph", tmp.file("ball.txt"), "--function", tmp.file("sol.csv"), "--caps", "v3",
                "--tol", "1e-3"});
  CHECK(field(c.out, "edge_ok") == "true");
  CHECK(field(c.out, "kirchhoff_ok") == "true");

  // Data beyond what the path can carry: Newton reports failure.
  auto f = run({"solve", "--family", "path", "--n", "6", "--R", "3", "--bv", "0.1"});
  CHECK(f.code == 1);
  CHECK(field(f.out, "converged") == "false");
}

TEST_CASE("certify on hand-written tables") {
  TempDir tmp;
  // eps sin(pi x) on one unit edge with eps below and above pi^2, ends capped.
  auto table = [&](double eps) {
    std::ostringstream s;
    s << "v:v0,0\nv:v1,0\n";
    for (int k = 1; k < 64; ++k) {
      const double x = k / 64.0;
      s.precision(17);
      s << "e:e1:" << x << "," << eps * std::sin(M_PI * x) << "\n";
    }
    return s.str();
  };
  put(tmp.file("lo.csv"), table(0.5 * M_PI * M_PI));
  put(tmp.file("hi.csv"), table(1.5 * M_PI * M_PI));
  auto lo = run({"certify", "--family", "path", "--n", "1", "--function", tmp.file("lo.csv"), "--caps", "v0,v1",
                 "--tol", "1e-4"});
  auto hi = run({"certify", "--family", "path", "--n", "1", "--function", tmp.file("hi.csv"), "--caps", "v0,v1",
                 "--tol", "1e-4"});
  CHECK(lo.code == 0);
  CHECK(field(lo.out, "verdict") == "PASS");
  CHECK(hi.code == 1);
  CHECK(field(hi.out, "verdict") == "FAIL");

  put(tmp.file("missing.csv"), "v:v0,0\n");
  CHECK(run({"certify", "--family", "path", "--n", "1", "--function", tmp.file("missing.csv")}).code == 2);
  put(tmp.file("garbled.csv"), "v:v0,zero\nv:v1,0\n");
  CHECK(run({"certify", "--family", "path", "--n", "1", "--function", tmp.file("garbled.csv")}).code == 2);
  put(tmp.file("outside.csv"), "v:v0,0\nv:v1,0\ne:e1:1.5,2\n");
  CHECK(run({"certify", "--family", "path", "--n", "1", "--function", tmp.file("outside.csv")}).code == 2);
  CHECK(run({"certify", "--family", "path", "--n", "1", "--function", tmp.file("lo.csv"), "--caps", "nope"}).code ==
        2);
}

TEST_CASE("probe") {
  auto r = run({"probe", "--family", "path", "--R-list", "4,8,16"});
  CHECK(r.code == 0);
  CHECK(field(r.out, "strictly_decreasing") == "true");
  CHECK(std::stod(field(r.out, "final_ratio")) < 0.5);
  auto z = nlohmann::json::parse(run({"probe", "--family", "path", "--R-list", "4,8", "--bv", "0", "--json"}).out);
  for (const auto& row : z["probe"]) CHECK(row["core_sup"] == 0.0);
  auto t = run({"probe", "--family", "tree:2", "--R-list", "4,8"});
  CHECK(std::stod(field(t.out, "final_ratio")) > 0.5);
}

TEST_CASE("chain-check") {
  for (const char* mode : {"compact", "weighted"}) {
    auto r = run({"chain-check", "--family", "path", "--n", "1", "--mode", mode});
    CHECK(r.code == 0);
    auto j = nlohmann::json::parse(run({"chain-check", "--family", "path", "--n", "1", "--mode", mode, "--json"}).out);
    for (const auto& line : j["lines"]) CHECK(line["slack"].get<double>() >= -1e-8);
    auto zero = nlohmann::json::parse(
        run({"chain-check", "--family", "path", "--n", "4", "--mode", mode, "--eps", "0", "--json"}).out);
    for (const auto& line : zero["lines"]) {
      CHECK(line["lhs"] == 0.0);
      CHECK(line["rhs"].get<double>() - line["u_free"].get<double>() == 0.0);
    }
  }
  TempDir tmp;
  put(tmp.file("one.csv"), "v:v0,1\nv:v1,1\nv:v2,1\nv:v3,1\n");
  auto c = run({"chain-check", "--family", "path", "--n", "3", "--function", tmp.file("one.csv")});
  CHECK(c.code == 1);
}

TEST_CASE("identical invocations give identical bytes") {
  const std::vector<std::string> args{"growth-check", "--family", "tree:2", "--R0", "2", "--Rmax", "4", "--Rsteps", "3"};
  CHECK(run(args).out == run(args).out);
  const std::vector<std::string> probe{"probe", "--family", "star:3", "--R-list", "4,8"};
  setenv("QG_THREADS", "1", 1);
  const auto one = run(probe).out;
  setenv("QG_THREADS", "5", 1);
  const auto five = run(probe).out;
  unsetenv("QG_THREADS");
  CHECK(one == five);
}

TEST_CASE("function tables round-trip") {
  // exp(0.3 t), t the depth along the tree: continuous at every vertex.
  auto g = qg::tree_graph(2, 2);
  std::vector<qg::EdgeFunction> ef;
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const double t0 = e < 2 ? 0.0 : 1.0;
    ef.push_back({[t0](double x) {
                    const double v = std::exp(0.3 * (t0 + x));
                    return qg::Jet{v, 0.3 * v, 0.09 * v};
                  },
                  2});
  }
  auto f = qg::GraphFunction::from_edges(g, ef);
  auto rows = qg::sample_function(g, f, 31);
  std::string text = "location,value\n";
  for (const auto& r : rows) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", r.value);
    text += r.location + "," + buf + "\n";
  }
  auto back = qg::function_from_table(g, qg::parse_function_table(text));
  for (std::size_t e = 0; e < g.num_edges(); ++e)
    for (double x : {0.013, 0.5, 0.97}) {
      const auto a = f.edge(e).jet(x), b = back.edge(e).jet(x);
      CHECK(std::abs(a.v - b.v) < 1e-10);
      CHECK(std::abs(a.d2 - b.d2) < 1e-5);
    }
  CHECK_THROWS_AS(qg::parse_function_table("x:1,2\n"), qg::ParseError);
  CHECK(qg::parse_function_table("location,value\n\nv:a,1\n\nkey,value\nR,3\n").size() == 1);
  CHECK_THROWS_AS(qg::parse_function_table("v:a,1\nv:a,2\n"), qg::ParseError);
  CHECK_THROWS_AS(qg::function_from_table(g, qg::parse_function_table("v:zz,1\n")), qg::ParseError);
}

#include "qg/generators.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qg {

namespace {
std::string s(std::size_t k) { return std::to_string(k); }
}  // namespace

MetricGraph path_graph(std::size_t n, double length) {
  MetricGraph::Builder b;
  for (std::size_t k = 0; k <= n; ++k) b.vertex("v" + s(k));
  for (std::size_t k = 1; k <= n; ++k) b.edge("e" + s(k), "v" + s(k - 1), "v" + s(k), length);
  b.base("v0");
  return std::move(b).build();
}

MetricGraph star_graph(std::size_t k, double length) {
  MetricGraph::Builder b;
  b.vertex("c");
  for (std::size_t i = 1; i <= k; ++i) b.vertex("l" + s(i));
  for (std::size_t i = 1; i <= k; ++i) b.edge("s" + s(i), "c", "l" + s(i), length);
  b.base("c");
  return std::move(b).build();
}

MetricGraph spider_graph(std::size_t legs, std::size_t segments, double length) {
  MetricGraph::Builder b;
  b.vertex("c");
  for (std::size_t i = 1; i <= legs; ++i)
    for (std::size_t k = 1; k <= segments; ++k) b.vertex("l" + s(i) + "_" + s(k));
  for (std::size_t i = 1; i <= legs; ++i)
    for (std::size_t k = 1; k <= segments; ++k)
      b.edge("s" + s(i) + "_" + s(k), k == 1 ? std::string("c") : "l" + s(i) + "_" + s(k - 1),
             "l" + s(i) + "_" + s(k), length);
  b.base("c");
  return std::move(b).build();
}

MetricGraph tree_graph(std::size_t branching, std::size_t depth, double length) {
  if (branching < 1) throw std::invalid_argument("tree branching must be >= 1");
  MetricGraph::Builder b;
  // BFS numbering: children of node k are k*b+1 .. k*b+b.
  std::size_t count = 1, level = 1;
  for (std::size_t d = 1; d <= depth; ++d) {
    level *= branching;
    count += level;
  }
  for (std::size_t k = 0; k < count; ++k) b.vertex("t" + s(k));
  for (std::size_t k = 1; k < count; ++k)
    b.edge("b" + s(k), "t" + s((k - 1) / branching), "t" + s(k), length);
  b.base("t0");
  return std::move(b).build();
}

MetricGraph parallel_chain(std::size_t links, const std::vector<double>& lengths) {
  if (lengths.empty()) throw std::invalid_argument("parallel chain needs at least one length");
  MetricGraph::Builder b;
  if (links == 1) {
    b.vertex("a").vertex("b");
    for (std::size_t m = 0; m < lengths.size(); ++m) b.edge("p" + s(m + 1), "a", "b", lengths[m]);
    b.base("a");
    return std::move(b).build();
  }
  for (std::size_t k = 0; k <= links; ++k) b.vertex("v" + s(k));
  for (std::size_t k = 1; k <= links; ++k)
    for (std::size_t m = 0; m < lengths.size(); ++m)
      b.edge("p" + s(k) + "_" + s(m + 1), "v" + s(k - 1), "v" + s(k), lengths[m]);
  b.base("v0");
  return std::move(b).build();
}

MetricGraph ladder_graph(std::size_t n, double length) {
  MetricGraph::Builder b;
  for (std::size_t k = 0; k <= n; ++k) b.vertex("u" + s(k)).vertex("w" + s(k));
  for (std::size_t k = 1; k <= n; ++k) {
    b.edge("ru" + s(k), "u" + s(k - 1), "u" + s(k), length);
    b.edge("rw" + s(k), "w" + s(k - 1), "w" + s(k), length);
  }
  for (std::size_t k = 0; k <= n; ++k) b.edge("r" + s(k), "u" + s(k), "w" + s(k), length);
  b.base("u0");
  return std::move(b).build();
}

MetricGraph Family::truncate(double radius) const {
  if (!(radius >= 0.0)) throw std::invalid_argument("truncation radius must be nonnegative");
  auto gens = [&](double step) { return static_cast<std::size_t>(std::ceil(radius / step)) + 1; };
  switch (kind) {
    case Kind::Path:
      return path_graph(gens(length), length);
    case Kind::Star:
      return spider_graph(param, gens(length), length);
    case Kind::Tree:
      return tree_graph(param, gens(length), length);
    case Kind::Parallel: {
      double shortest = parallel_lengths.front();
      for (double l : parallel_lengths) shortest = std::min(shortest, l);
      return parallel_chain(gens(shortest), parallel_lengths);
    }
    case Kind::Ladder:
      return ladder_graph(gens(length), length);
  }
  throw std::logic_error("bad family");
}

MetricGraph Family::make(std::size_t n) const {
  switch (kind) {
    case Kind::Path:
      return path_graph(n, length);
    case Kind::Star:
      return spider_graph(param, n, length);
    case Kind::Tree:
      return tree_graph(param, n, length);
    case Kind::Parallel:
      return parallel_chain(n, parallel_lengths);
    case Kind::Ladder:
      return ladder_graph(n, length);
  }
  throw std::logic_error("bad family");
}

std::string Family::name() const {
  switch (kind) {
    case Kind::Path:
      return "path";
    case Kind::Star:
      return "star:" + s(param);
    case Kind::Tree:
      return "tree:" + s(param);
    case Kind::Parallel:
      return "parallel";
    case Kind::Ladder:
      return "ladder";
  }
  return "?";
}

Family parse_family(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.empty()) throw std::invalid_argument("empty family name");
  Family f;
  const std::string& k = parts[0];
  auto num = [&](std::size_t i, double dflt) {
    return parts.size() > i && !parts[i].empty() ? std::stod(parts[i]) : dflt;
  };
  if (k == "path") {
    f.kind = Family::Kind::Path;
    f.length = num(1, 1.0);
  } else if (k == "star") {
    f.kind = Family::Kind::Star;
    f.param = static_cast<std::size_t>(num(1, 3));
    f.length = num(2, 1.0);
  } else if (k == "tree") {
    f.kind = Family::Kind::Tree;
    f.param = static_cast<std::size_t>(num(1, 2));
    f.length = num(2, 1.0);
  } else if (k == "parallel") {
    f.kind = Family::Kind::Parallel;
    if (parts.size() > 1) {
      f.parallel_lengths.clear();
      std::stringstream ls(parts[1]);
      for (std::string x; std::getline(ls, x, ',');) f.parallel_lengths.push_back(std::stod(x));
    }
  } else if (k == "ladder") {
    f.kind = Family::Kind::Ladder;
    f.length = num(1, 1.0);
  } else {
    throw std::invalid_argument("unknown family '" + k + "'");
  }
  if (!(f.length > 0.0)) throw std::invalid_argument("family edge length must be positive");
  if (f.param < 1) throw std::invalid_argument("family parameter must be >= 1");
  return f;
}

}  // namespace qg

#include "qg/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "qg/parallel.hpp"

namespace qg {

namespace {

constexpr std::array<double, 5> kGlX = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                        0.5384693101056831, 0.9061798459386640};
constexpr std::array<double, 5> kGlW = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                        0.4786286704993665, 0.2369268850561891};

}  // namespace

void QuadratureRule::validate() const {
  if (panels < 4) throw std::invalid_argument("quadrature needs at least 4 panels");
  if (kind == Kind::Simpson && panels % 2 != 0)
    throw std::invalid_argument("Simpson rule needs an even panel count");
}

double QuadratureRule::integrate(const std::function<double(double)>& f, double a, double b) const {
  validate();
  if (!(b > a)) return 0.0;
  std::vector<double> terms;
  if (kind == Kind::Simpson) {
    const int n = 2 * panels;
    const double h = (b - a) / n;
    terms.resize(n + 1);
    for (int k = 0; k <= n; ++k) {
      const double x = k == n ? b : a + k * h;
      const double w = (k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
      terms[k] = w * f(x);
    }
    return pairwise_sum(terms) * h / 3.0;
  }
  const double h = (b - a) / panels;
  terms.resize(static_cast<std::size_t>(panels) * 5);
  for (int k = 0; k < panels; ++k) {
    const double c = a + (k + 0.5) * h;
    for (int i = 0; i < 5; ++i) terms[k * 5 + i] = kGlW[i] * f(c + 0.5 * h * kGlX[i]);
  }
  return pairwise_sum(terms) * 0.5 * h;
}

double QuadratureRule::integrate(const std::function<double(double)>& f, double a, double b,
                                 const std::vector<double>& breaks) const {
  std::vector<double> pts{a};
  for (double x : breaks)
    if (x > a && x < b) pts.push_back(x);
  std::sort(pts.begin(), pts.end());
  pts.push_back(b);
  std::vector<double> parts;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) parts.push_back(integrate(f, pts[i], pts[i + 1]));
  return pairwise_sum(parts);
}

std::vector<double> QuadratureRule::nodes(double a, double b, const std::vector<double>& breaks) const {
  std::vector<double> pts{a};
  for (double x : breaks)
    if (x > a && x < b) pts.push_back(x);
  std::sort(pts.begin(), pts.end());
  pts.push_back(b);
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    auto part = nodes(pts[i], pts[i + 1]);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

std::vector<double> QuadratureRule::nodes(double a, double b) const {
  validate();
  std::vector<double> out;
  if (kind == Kind::Simpson) {
    const int n = 2 * panels;
    const double h = (b - a) / n;
    for (int k = 0; k <= n; ++k) out.push_back(k == n ? b : a + k * h);
  } else {
    const double h = (b - a) / panels;
    for (int k = 0; k < panels; ++k)
      for (int i = 0; i < 5; ++i) out.push_back(a + (k + 0.5) * h + 0.5 * h * kGlX[i]);
  }
  return out;
}

}  // namespace qg

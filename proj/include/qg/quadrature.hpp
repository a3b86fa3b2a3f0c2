#pragma once

#include <functional>
#include <vector>

namespace qg {

struct QuadratureRule {
  enum class Kind { Simpson, GaussLegendre5 };
  Kind kind = Kind::Simpson;
  // Per integration interval. A Simpson panel is one parabola (two subintervals, three nodes);
  // a Gauss-Legendre panel carries five nodes.
  int panels = 64;

  static QuadratureRule simpson(int panels = 64) { return {Kind::Simpson, panels}; }
  static QuadratureRule gauss5(int panels = 16) { return {Kind::GaussLegendre5, panels}; }

  // Throws unless panels >= 4 and, for Simpson, even.
  void validate() const;

  // Integral over [a, b]; nodes and weights in a fixed order.
  double integrate(const std::function<double(double)>& f, double a, double b) const;
  // Same, split at the given breakpoints (those outside (a, b) are ignored).
  double integrate(const std::function<double(double)>& f, double a, double b,
                   const std::vector<double>& breaks) const;
  // Node abscissae used by integrate(f, a, b).
  std::vector<double> nodes(double a, double b) const;
  // Node abscissae used by the split integrate(f, a, b, breaks).
  std::vector<double> nodes(double a, double b, const std::vector<double>& breaks) const;
};

}  // namespace qg

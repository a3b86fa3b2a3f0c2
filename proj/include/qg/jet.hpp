#pragma once

namespace qg {

// Value with first and second derivative.
struct Jet {
  double v = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

}  // namespace qg

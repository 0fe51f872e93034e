#pragma once

#include <cmath>
#include <cstdlib>

namespace lmg {

/// Integer-order Bessel function of the first kind, valid for any real
/// argument and negative orders (std::cyl_bessel_j only accepts x >= 0).
inline double bessel_j(int order, double x) {
  const int n = std::abs(order);
  double value = std::cyl_bessel_j(static_cast<double>(n), std::abs(x));
  // J_{-n} = (-1)^n J_n and J_n(-x) = (-1)^n J_n(x)
  if ((order < 0) != (x < 0.0) && (n % 2 == 1)) value = -value;
  return value;
}

inline double bessel_j0(double x) { return std::cyl_bessel_j(0.0, std::abs(x)); }

}  // namespace lmg

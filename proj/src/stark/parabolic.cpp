#include "vdet/parabolic.hpp"

#include <cmath>

namespace vdet {

ParabolicPoint to_parabolic(double x, double y) {
  const double r = std::hypot(x, y);
  const double y2 = y * y;
  // xi = r + x and eta = r - x; take the cancellation-prone one from xi * eta = y^2
  double xi, eta;
  if (x >= 0.0) {
    xi = r + x;
    eta = xi > 0.0 ? y2 / xi : 0.0;
  } else {
    eta = r - x;
    xi = y2 / eta;
  }
  return {xi, eta, y >= 0.0};
}

CartesianPoint to_cartesian(const ParabolicPoint& p) {
  const double y = std::sqrt(p.xi * p.eta);
  return {0.5 * (p.xi - p.eta), p.upper ? y : -y};
}

}  // namespace vdet

#pragma once

namespace vdet {

/// Parabolic coordinates x = (xi - eta)/2, y = +-sqrt(xi eta).
struct ParabolicPoint {
  double xi = 0.0;
  double eta = 0.0;
  bool upper = true;  ///< y >= 0
};

struct CartesianPoint {
  double x = 0.0;
  double y = 0.0;
};

ParabolicPoint to_parabolic(double x, double y);
CartesianPoint to_cartesian(const ParabolicPoint& p);

}  // namespace vdet

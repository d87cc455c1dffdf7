#include "vdet/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "vdet/error.hpp"

namespace vdet {

GridSpec::GridSpec(double x_min, double x_max, std::size_t nx, double y_min, double y_max, std::size_t ny)
    : x_min_(x_min), x_max_(x_max), y_min_(y_min), y_max_(y_max), nx_(nx), ny_(ny) {
  if (nx < 8 || ny < 8) throw ConfigError("grid needs at least 8 nodes per axis");
  if (!(x_max > x_min) || !(y_max > y_min)) throw ConfigError("grid extent must be positive");
  dx_ = (x_max - x_min) / static_cast<double>(nx);
  dy_ = (y_max - y_min) / static_cast<double>(ny);
  if (min_r2() <= 1e-18 * (dx_ * dx_ + dy_ * dy_))
    throw ConfigError("a grid node coincides with the Coulomb singularity at the origin");
}

GridSpec GridSpec::with_spacing(double x_lo, double x_hi, double y_lo, double y_hi, double h) {
  if (!(h > 0.0)) throw ConfigError("grid spacing must be positive");
  const double ix0 = std::floor(x_lo / h + 1e-9);
  const double ix1 = std::ceil(x_hi / h - 1e-9);
  const double iy0 = std::floor(y_lo / h + 1e-9);
  const double iy1 = std::ceil(y_hi / h - 1e-9);
  return GridSpec(ix0 * h, ix1 * h, static_cast<std::size_t>(ix1 - ix0), iy0 * h, iy1 * h,
                  static_cast<std::size_t>(iy1 - iy0));
}

double GridSpec::min_r2() const {
  auto nearest = [](double lo, double d, std::size_t n) {
    // node coordinate closest to zero
    double f = -lo / d - 0.5;
    double k = std::clamp(std::round(f), 0.0, static_cast<double>(n - 1));
    double best = std::numeric_limits<double>::infinity();
    for (double kk : {k - 1.0, k, k + 1.0}) {
      if (kk < 0.0 || kk > static_cast<double>(n - 1)) continue;
      best = std::min(best, std::abs(lo + (kk + 0.5) * d));
    }
    return best;
  };
  const double ax = nearest(x_min_, dx_, nx_);
  const double ay = nearest(y_min_, dy_, ny_);
  return ax * ax + ay * ay;
}

}  // namespace vdet

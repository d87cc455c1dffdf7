#pragma once

#include <span>
#include <vector>

#include <math.h>  // pchip.hpp calls unqualified isnan

#include <boost/math/interpolators/pchip.hpp>

namespace vdet {

/// Shape-preserving piecewise cubic through strictly increasing abscissae.
class MonotoneCubic {
public:
  MonotoneCubic(std::vector<double> x, std::vector<double> y);

  double operator()(double x) const;
  double derivative(double x) const;
  double lo() const { return lo_; }
  double hi() const { return hi_; }

private:
  double lo_, hi_;
  boost::math::interpolators::pchip<std::vector<double>> impl_;
};

/// Each value replaced by a least-squares quadratic over the `window` nearest
/// points (shifted inward at the ends), evaluated at its own abscissa.
/// Quadratic data passes through unchanged.
std::vector<double> local_quadratic_smooth(std::span<const double> x, std::span<const double> y, std::size_t window = 5);

}  // namespace vdet

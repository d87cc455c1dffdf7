#include "vdet/interpolation.hpp"

#include <Eigen/Dense>
#include <algorithm>

#include "vdet/error.hpp"

namespace vdet {

namespace {

boost::math::interpolators::pchip<std::vector<double>> build(std::vector<double>& x, std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 4) throw NumericalError("monotone cubic needs at least four points");
  for (std::size_t k = 1; k < x.size(); ++k)
    if (!(x[k] > x[k - 1])) throw NumericalError("monotone cubic abscissae must increase strictly");
  return {std::move(x), std::move(y)};
}

}  // namespace

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : lo_(x.empty() ? 0.0 : x.front()), hi_(x.empty() ? 0.0 : x.back()), impl_(build(x, y)) {}

double MonotoneCubic::operator()(double x) const { return impl_(std::clamp(x, lo_, hi_)); }

double MonotoneCubic::derivative(double x) const { return impl_.prime(std::clamp(x, lo_, hi_)); }

std::vector<double> local_quadratic_smooth(std::span<const double> x, std::span<const double> y, std::size_t window) {
  const std::size_t n = x.size();
  if (y.size() != n) throw ConfigError("smoothing: x and y differ in length");
  if (window < 3 || n < window) return {y.begin(), y.end()};
  std::vector<double> out(n);
  const std::size_t half = window / 2;
  Eigen::MatrixXd a(window, 3);
  Eigen::VectorXd b(window);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t start = std::min(i > half ? i - half : 0, n - window);
    for (std::size_t k = 0; k < window; ++k) {
      const double d = x[start + k] - x[i];
      a(k, 0) = 1.0;
      a(k, 1) = d;
      a(k, 2) = d * d;
      b[k] = y[start + k];
    }
    out[i] = a.colPivHouseholderQr().solve(b)[0];
  }
  return out;
}

}  // namespace vdet

#pragma once

#include <cstddef>

namespace vdet {

/// Uniform cell-centred grid in atomic units. Node (i, j) sits at
///   x_i = x_min + (i + 1/2) dx,   y_j = y_min + (j + 1/2) dy,
/// so x_min/x_max are cell faces. Storage index is i * ny + j (y fastest).
class GridSpec {
public:
  GridSpec(double x_min, double x_max, std::size_t nx, double y_min, double y_max, std::size_t ny);

  /// Grid with spacing h covering at least [x_lo, x_hi] x [y_lo, y_hi]. Faces
  /// are snapped outward to integer multiples of h so every node lies at a
  /// half-integer multiple of h and the origin is never a node.
  static GridSpec with_spacing(double x_lo, double x_hi, double y_lo, double y_hi, double h);

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  double y_min() const { return y_min_; }
  double y_max() const { return y_max_; }
  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }
  std::size_t size() const { return nx_ * ny_; }
  double dx() const { return dx_; }
  double dy() const { return dy_; }
  double cell_area() const { return dx_ * dy_; }

  double x(std::size_t i) const { return x_min_ + (static_cast<double>(i) + 0.5) * dx_; }
  double y(std::size_t j) const { return y_min_ + (static_cast<double>(j) + 0.5) * dy_; }
  std::size_t index(std::size_t i, std::size_t j) const { return i * ny_ + j; }

  /// Fractional node coordinates: x = x(0) + fx * dx.
  double fx(double x) const { return (x - x_min_) / dx_ - 0.5; }
  double fy(double y) const { return (y - y_min_) / dy_ - 0.5; }

  /// Smallest squared distance from any node to the origin.
  double min_r2() const;

  bool operator==(const GridSpec&) const = default;

private:
  double x_min_, x_max_, y_min_, y_max_;
  std::size_t nx_, ny_;
  double dx_, dy_;
};

}  // namespace vdet

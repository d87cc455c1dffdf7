#pragma once

#include <array>
#include <span>
#include <vector>

#include "vdet/wave_field.hpp"

namespace vdet {

struct AbsorberConfig {
  double fraction = 0.1;   ///< layer width as a fraction of the box extent, per side
  double strength = 8.0;   ///< absorption rate at the outer edge (1/a.u. time)
};

enum class BoxSide { x_min = 0, x_max = 1, y_min = 2, y_max = 3 };

/// Multiplicative boundary mask. Per step of length dt a node at depth d into a
/// layer of width w is multiplied by exp(-strength dt sin^2(pi d / (2 w))),
/// i.e. the mask profile is cos^2-shaped from the inner edge to the outer wall.
class Absorber {
public:
  Absorber(const GridSpec& grid, AbsorberConfig config);

  /// Applies the mask for a step dt and returns the removed probability
  /// attributed to the nearest box side.
  double apply(std::span<complex> psi, double dt);

  /// True when (x, y) lies inside any absorbing layer.
  bool in_layer(double x, double y) const;

  /// Inner (unmasked) rectangle.
  double inner_x_min() const { return inner_[0]; }
  double inner_x_max() const { return inner_[1]; }
  double inner_y_min() const { return inner_[2]; }
  double inner_y_max() const { return inner_[3]; }

  const std::array<double, 4>& absorbed_by_side() const { return absorbed_; }

private:
  void rebuild(double dt);

  GridSpec grid_;
  AbsorberConfig config_;
  std::array<double, 4> inner_{};
  std::vector<double> profile_;  // sin^2 ramp value per node, 0 in the interior
  std::vector<unsigned char> side_;
  std::vector<std::size_t> layer_nodes_;
  std::vector<double> factor_;
  double factor_dt_ = -1.0;
  std::array<double, 4> absorbed_{};
};

}  // namespace vdet

#include "vdet/absorber.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vdet/error.hpp"
#include "vdet/operators.hpp"

namespace vdet {

Absorber::Absorber(const GridSpec& grid, AbsorberConfig config)
    : grid_(grid), config_(config), profile_(grid.size(), 0.0), side_(grid.size(), 0) {
  if (!(config.fraction >= 0.0 && config.fraction < 0.5)) throw ConfigError("absorber fraction must lie in [0, 0.5)");
  if (!(config.strength >= 0.0)) throw ConfigError("absorber strength must be >= 0");
  const double wx = config.fraction * (grid.x_max() - grid.x_min());
  const double wy = config.fraction * (grid.y_max() - grid.y_min());
  inner_ = {grid.x_min() + wx, grid.x_max() - wx, grid.y_min() + wy, grid.y_max() - wy};

  for (std::size_t i = 0; i < grid.nx(); ++i)
    for (std::size_t j = 0; j < grid.ny(); ++j) {
      const double x = grid.x(i), y = grid.y(j);
      // depth fractions into each layer
      const std::array<double, 4> depth{
          wx > 0 ? (inner_[0] - x) / wx : -1.0, wx > 0 ? (x - inner_[1]) / wx : -1.0,
          wy > 0 ? (inner_[2] - y) / wy : -1.0, wy > 0 ? (y - inner_[3]) / wy : -1.0};
      const auto it = std::max_element(depth.begin(), depth.end());
      if (*it <= 0.0) continue;
      const double s = std::sin(0.5 * std::numbers::pi * std::min(*it, 1.0));
      const std::size_t k = grid.index(i, j);
      profile_[k] = s * s;
      side_[k] = static_cast<unsigned char>(it - depth.begin());
      layer_nodes_.push_back(k);
    }
}

void Absorber::rebuild(double dt) {
  factor_.resize(layer_nodes_.size());
  for (std::size_t n = 0; n < layer_nodes_.size(); ++n)
    factor_[n] = std::exp(-config_.strength * dt * profile_[layer_nodes_[n]]);
  factor_dt_ = dt;
}

double Absorber::apply(std::span<complex> psi, double dt) {
  if (dt != factor_dt_) rebuild(dt);
  double removed = 0.0;
  for (std::size_t n = 0; n < layer_nodes_.size(); ++n) {
    const std::size_t k = layer_nodes_[n];
    const double before = std::norm(psi[k]);
    psi[k] *= factor_[n];
    const double lost = before * (1.0 - factor_[n] * factor_[n]) * grid_.cell_area();
    absorbed_[side_[k]] += lost;
    removed += lost;
  }
  return removed;
}

bool Absorber::in_layer(double x, double y) const {
  return x < inner_[0] || x > inner_[1] || y < inner_[2] || y > inner_[3];
}

}  // namespace vdet

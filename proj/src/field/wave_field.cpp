#include "vdet/wave_field.hpp"

#include <cmath>

#include "vdet/error.hpp"
#include "vdet/operators.hpp"

namespace vdet {

WaveField::WaveField(GridSpec grid) : grid_(grid), data_(grid.size(), complex{}) {}

WaveField::WaveField(GridSpec grid, std::vector<complex> amplitudes)
    : grid_(grid), data_(std::move(amplitudes)) {
  if (data_.size() != grid_.size()) throw ConfigError("amplitude count does not match grid size");
}

bool WaveField::all_finite() const {
  for (const auto& z : data_)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

void WaveField::normalize() {
  const double n = norm(*this);
  if (!(n > 0.0) || !std::isfinite(n)) throw NumericalError("cannot normalize a field with norm " + std::to_string(n));
  const double s = 1.0 / std::sqrt(n);
  for (auto& z : data_) z *= s;
}

WaveField& WaveField::operator*=(complex s) {
  for (auto& z : data_) z *= s;
  return *this;
}

WaveField& WaveField::operator+=(const WaveField& other) {
  if (!(other.grid_ == grid_)) throw ConfigError("grid mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

WaveField& WaveField::operator-=(const WaveField& other) {
  if (!(other.grid_ == grid_)) throw ConfigError("grid mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

}  // namespace vdet

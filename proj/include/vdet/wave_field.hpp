#pragma once

#include <complex>
#include <span>
#include <vector>

#include "vdet/grid.hpp"

namespace vdet {

using complex = std::complex<double>;

/// Complex amplitudes on a GridSpec.
class WaveField {
public:
  explicit WaveField(GridSpec grid);
  WaveField(GridSpec grid, std::vector<complex> amplitudes);

  /// Samples f(x, y) at every node.
  template <class F>
  static WaveField sample(const GridSpec& grid, F&& f) {
    WaveField w(grid);
    for (std::size_t i = 0; i < grid.nx(); ++i)
      for (std::size_t j = 0; j < grid.ny(); ++j) w.data_[grid.index(i, j)] = f(grid.x(i), grid.y(j));
    return w;
  }

  const GridSpec& grid() const { return grid_; }
  std::size_t size() const { return data_.size(); }

  std::span<complex> data() { return data_; }
  std::span<const complex> data() const { return data_; }

  complex& operator()(std::size_t i, std::size_t j) { return data_[grid_.index(i, j)]; }
  const complex& operator()(std::size_t i, std::size_t j) const { return data_[grid_.index(i, j)]; }

  bool all_finite() const;

  /// Rescales so that norm() == 1. Throws NumericalError for a zero field.
  void normalize();

  WaveField& operator*=(complex s);
  WaveField& operator+=(const WaveField& other);
  WaveField& operator-=(const WaveField& other);

private:
  GridSpec grid_;
  std::vector<complex> data_;
};

}  // namespace vdet

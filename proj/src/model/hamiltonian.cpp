#include "vdet/hamiltonian.hpp"

#include <cmath>
#include <sstream>

#include "vdet/error.hpp"
#include "vdet/operators.hpp"

namespace vdet {

Hamiltonian::Hamiltonian(const GridSpec& grid, PotentialSpec potential)
    : grid_(grid), potential_(potential), coulomb_(grid.size()) {
  const double a2 = potential.softening;
  if (!std::isfinite(a2) || grid.min_r2() + a2 <= 0.0) {
    std::ostringstream msg;
    msg << "softening " << a2 << " makes r^2 + a^2 <= 0 on the node nearest the origin (r^2 = " << grid.min_r2()
        << ")";
    throw ConfigError(msg.str());
  }
  for (std::size_t i = 0; i < grid.nx(); ++i)
    for (std::size_t j = 0; j < grid.ny(); ++j) {
      const double x = grid.x(i), y = grid.y(j);
      coulomb_[grid.index(i, j)] = -1.0 / std::sqrt(x * x + y * y + a2);
    }
}

void Hamiltonian::apply(std::span<const complex> in, std::span<complex> out, double field) const {
  laplacian(grid_, in, out);
  const std::size_t ny = grid_.ny();
  for (std::size_t i = 0; i < grid_.nx(); ++i) {
    const double xe = grid_.x(i) * field;
    const std::size_t base = i * ny;
    for (std::size_t j = 0; j < ny; ++j) {
      const std::size_t k = base + j;
      const double v = coulomb_[k] - xe;
      out[k] = complex(-0.5 * out[k].real() + v * in[k].real(), -0.5 * out[k].imag() + v * in[k].imag());
    }
  }
}

WaveField Hamiltonian::apply(const WaveField& in, double field) const {
  if (!(in.grid() == grid_)) throw ConfigError("field grid differs from Hamiltonian grid");
  WaveField out(grid_);
  apply(in.data(), out.data(), field);
  return out;
}

double Hamiltonian::energy(const WaveField& psi, double field) const {
  const auto hpsi = apply(psi, field);
  return inner_product(psi, hpsi).real() / inner_product(psi, psi).real();
}

WaveField apply_hamiltonian(const WaveField& field, const PulseSpec& pulse, const PotentialSpec& potential, double t) {
  return Hamiltonian(field.grid(), potential).apply(field, pulse.field_at(t));
}

}  // namespace vdet

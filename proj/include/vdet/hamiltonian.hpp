#pragma once

#include <span>
#include <vector>

#include "vdet/pulse.hpp"
#include "vdet/wave_field.hpp"

namespace vdet {

/// Regularised Coulomb potential -1/sqrt(r^2 + softening). The softening is a
/// grid calibration constant and may be negative as long as r^2 + softening > 0
/// on every node.
struct PotentialSpec {
  double softening = 0.0;
};

/// Length-gauge Hamiltonian  -1/2 lap - 1/sqrt(r^2 + a^2) - x E  on a grid.
class Hamiltonian {
public:
  Hamiltonian(const GridSpec& grid, PotentialSpec potential);

  const GridSpec& grid() const { return grid_; }
  const PotentialSpec& potential() const { return potential_; }
  std::span<const double> coulomb() const { return coulomb_; }

  /// out = H(field) in, for a given instantaneous field strength.
  void apply(std::span<const complex> in, std::span<complex> out, double field) const;
  WaveField apply(const WaveField& in, double field) const;

  /// Rayleigh quotient <psi|H|psi> / <psi|psi>.
  double energy(const WaveField& psi, double field) const;

private:
  GridSpec grid_;
  PotentialSpec potential_;
  std::vector<double> coulomb_;
};

WaveField apply_hamiltonian(const WaveField& field, const PulseSpec& pulse, const PotentialSpec& potential, double t);

}  // namespace vdet

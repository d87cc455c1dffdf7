#pragma once

#include <optional>

#include "vdet/hamiltonian.hpp"

namespace vdet {

struct RelaxOptions {
  double dtau = 1.0;           ///< imaginary time step
  int krylov_dim = 16;
  double tolerance = 1e-10;    ///< stop when |E_k - E_{k-1}| falls below this
  double residual = 1e-11;     ///< and |H psi - E psi| / |psi| falls below this
  int max_iterations = 2000;
};

struct GroundState {
  WaveField field;
  double energy;
  int iterations;
};

/// Imaginary-time relaxation of the field-free Hamiltonian with renormalisation
/// after every step until both the energy change and the eigen-residual are
/// below their tolerances. Starts from `seed` or, if absent, from a Gaussian exp(-r^2).
/// Throws NumericalError if the energy has not converged after max_iterations.
GroundState relax_ground_state(const GridSpec& grid, PotentialSpec potential, const RelaxOptions& options = {},
                               std::optional<WaveField> seed = std::nullopt);

/// Normalised analytic ground state proportional to exp(-2r) sampled on the grid.
WaveField analytic_ground_state(const GridSpec& grid);

/// |<a|b>| / (|a| |b|).
double overlap(const WaveField& a, const WaveField& b);

/// Softening a^2 for which the relaxed ground-state energy on a grid of the
/// given spacing equals `target`. Calibrates on a square box of half-width
/// `half_width`; the result may be negative (bounded by r^2 + a^2 > 0).
double calibrate_softening(double spacing, double target = kCoulombGroundEnergy, double half_width = 6.0);

}  // namespace vdet

#pragma once

#include <span>
#include <vector>

#include "vdet/hamiltonian.hpp"

namespace vdet {

struct KrylovStepInfo {
  int dimension = 0;            ///< Krylov dimension actually used (< m after breakdown)
  double error_estimate = 0.0;  ///< |beta_m * [exp(.)e1]_m| * |psi|
  bool reorthogonalized = false;
};

/// Short-iterative Lanczos propagator. Owns the Krylov workspace so repeated
/// steps on the same grid do not allocate.
class LanczosPropagator {
public:
  LanczosPropagator(std::size_t size, int krylov_dim);

  int krylov_dim() const { return m_; }

  /// psi <- exp(-i H(field) dt) psi.
  KrylovStepInfo step(const Hamiltonian& h, double field, std::span<complex> psi, double dt);

  /// psi <- c exp(-H dtau) psi (field-free) for some c > 0; callers renormalise.
  KrylovStepInfo imaginary_step(const Hamiltonian& h, std::span<complex> psi, double dtau);

private:
  template <class ExpFn>
  KrylovStepInfo run(const Hamiltonian& h, double field, std::span<complex> psi, ExpFn&& coefficients);

  int m_;
  std::vector<std::vector<complex>> basis_;
  std::vector<complex> w_;
};

/// One real-time step exp(-i H(t + dt/2) dt) psi with the field sampled at the step midpoint.
WaveField krylov_step(const WaveField& field, const Hamiltonian& h, const PulseSpec& pulse, double t, double dt,
                      int krylov_dim);

}  // namespace vdet

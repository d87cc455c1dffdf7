#pragma once

namespace vdet {

/// Second-order perturbative coefficient of the separation constants,
/// beta^(2) = kStarkSecondOrder * sqrt(-2E) * F^2 / E^3.
inline constexpr double kStarkSecondOrder = 0.2004642410;

/// Bound-state energy of the 2D Coulomb problem, -1 / (2 (n1 + n2 + 1/2)^2).
double coulomb_energy(int n1, int n2);

/// Terminating confluent hypergeometric series M(-n; b; z), a polynomial of degree n.
double hypergeometric_m_terminating(int n, double b, double z);

/// Normalised separated factor
///   f_n(s) = sqrt(k / (1 + 4n)) exp(-k s / 2) M(-n; 1/2; k s),  k = sqrt(-2E),
/// so that the integral of f_n^2 over [0, inf) is one.
double eigenfactor(int n, double energy, double s);

struct StarkParameters {
  double field = 0.0;
  double energy = 0.0;
  double beta1 = 0.5;
  double beta2 = 0.5;
};

/// beta1 + beta2 - 1 from the second-order expansion at trial energy E.
/// The first-order terms cancel, leaving 2 sqrt(-E/8) + 2 c sqrt(-2E) F^2 / E^3 - 1.
double stark_closure_residual(double energy, double field);

/// Self-consistent ground-state (E, beta1, beta2) for a static field F >= 0,
/// from the root of stark_closure_residual in E in [-8, -1e-3].
/// beta2 is stored as 1 - beta1 so the separation constraint holds exactly.
StarkParameters stark_parameters(double field);

struct TunnelingPotentials {
  double v1 = 0.0;  ///< along xi, contains the barrier
  double v2 = 0.0;  ///< along eta, confining
};

/// V1(s) = -3/(32 s^2) - beta1/(2s) - s F/8,  V2(s) = -3/(32 s^2) - beta2/(2s) + s F/8.
TunnelingPotentials tunneling_potentials(const StarkParameters& p, double s);

struct StarkSolution {
  StarkParameters params;
  double xi_in = 0.0;
  double xi_exit = 0.0;
  double eta0 = 0.0;
  double xi_barrier_top = 0.0;  ///< maximum of V1

  double e_field() const { return params.field; }
  double energy() const { return params.energy; }
};

/// Barrier borders where V1 and V2 cross E/4 for field F > 0. Throws
/// PhysicsFlag when max V1 < E/4 (over-the-barrier regime).
StarkSolution barrier_geometry(double field);

}  // namespace vdet

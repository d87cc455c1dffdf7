#pragma once

namespace vdet {

/// Ground-state energy of the two-dimensional Coulomb problem (a.u.).
inline constexpr double kCoulombGroundEnergy = -2.0;

/// omega such that the Keldysh parameter omega * sqrt(-2 E0) / e0 equals gamma,
/// with E0 = -2 a.u.
double omega_for_keldysh(double gamma, double e0);

/// Gaussian field envelope E(t) = e0 exp(-omega^2 (t - t0)^2 / 2).
/// A positive field pushes the electron toward +x.
struct PulseSpec {
  double e0 = 0.0;
  double omega = 1.0;
  double t0 = 0.0;

  PulseSpec(double e0, double omega, double t0);
  static PulseSpec from_keldysh(double e0, double gamma, double t0);

  /// Rise/decay time scale sqrt(2) / omega.
  double tau() const;
  double keldysh() const;
  double field_at(double t) const;
};

double field_at(const PulseSpec& pulse, double t);

}  // namespace vdet

#include "vdet/pulse.hpp"

#include <cmath>
#include <numbers>

#include "vdet/error.hpp"

namespace vdet {

double omega_for_keldysh(double gamma, double e0) {
  if (!(gamma > 0.0) || !(e0 > 0.0)) throw ConfigError("Keldysh inversion needs gamma > 0 and e0 > 0");
  return gamma * e0 / std::sqrt(-2.0 * kCoulombGroundEnergy);
}

PulseSpec::PulseSpec(double e0_, double omega_, double t0_) : e0(e0_), omega(omega_), t0(t0_) {
  // e0 = 0 is accepted for drive-free reference runs
  if (!(e0 >= 0.0) || !std::isfinite(e0)) throw ConfigError("pulse amplitude must be finite and >= 0");
  if (!(omega > 0.0) || !std::isfinite(omega)) throw ConfigError("pulse frequency must be > 0");
  if (!std::isfinite(t0)) throw ConfigError("pulse peak time must be finite");
}

PulseSpec PulseSpec::from_keldysh(double e0, double gamma, double t0) {
  return PulseSpec(e0, omega_for_keldysh(gamma, e0), t0);
}

double PulseSpec::tau() const { return std::numbers::sqrt2 / omega; }

double PulseSpec::keldysh() const { return omega * std::sqrt(-2.0 * kCoulombGroundEnergy) / e0; }

double PulseSpec::field_at(double t) const {
  const double s = omega * (t - t0);
  return e0 * std::exp(-0.5 * s * s);
}

double field_at(const PulseSpec& pulse, double t) { return pulse.field_at(t); }

}  // namespace vdet

#pragma once

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "vdet/absorber.hpp"
#include "vdet/hamiltonian.hpp"
#include "vdet/pulse.hpp"

namespace vdet {

struct PropagatorConfig {
  double dt = 0.01;
  int krylov_dim = 16;
  double t_start = 0.0;
  double t_end = 1.0;
  bool absorber_enabled = true;
  AbsorberConfig absorber{};

  void validate() const;
  std::size_t steps() const;

  /// Window t0 +- span_tau * tau around the pulse peak.
  static PropagatorConfig around_pulse(const PulseSpec& pulse, double span_tau = 5.0);
};

/// Observer callback, invoked after every `stride`-th step with the current time
/// and a read-only view of the field.
struct ObserverHook {
  std::size_t stride = 1;
  std::function<void(double, const WaveField&)> callback;
};

struct PropagationReport {
  std::size_t steps = 0;
  double t_final = 0.0;
  double absorbed = 0.0;
  std::array<double, 4> absorbed_by_side{};  ///< indexed by BoxSide
  double final_norm = 0.0;
  double max_error_estimate = 0.0;
  std::vector<std::string> warnings;
};

/// Steps `field` from cfg.t_start to cfg.t_end with midpoint field sampling,
/// applying the absorber after every step. Aborts with NumericalError on NaN.
WaveField propagate(WaveField field, const Hamiltonian& h, const PulseSpec& pulse, const PropagatorConfig& cfg,
                    std::span<const ObserverHook> observers, PropagationReport* report = nullptr);

}  // namespace vdet

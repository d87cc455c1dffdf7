#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "vdet/absorber.hpp"
#include "vdet/grid.hpp"
#include "vdet/propagate.hpp"
#include "vdet/pulse.hpp"

namespace vdet {

inline constexpr const char* kToolVersion = "vdet 1.0.0";

/// Everything that determines a run. Text form is INI:
///
///   [run]        id, output_dir
///   [pulse]      e0, gamma | omega, t0
///   [grid]       spacing, x_min, x_max (auto), y_half_width, softening (auto)
///   [propagator] dt, krylov_dim, t_span_tau, absorber, absorber_frac, absorber_strength, snapshot_stride
///   [detectors]  samples, fan_lines, fan_far_factor, density_floor, geometry_field
///
/// "auto" for x_max fits the farthest detector inside the unmasked box;
/// "auto" for softening calibrates the grid ground state to -2 a.u.
struct RunConfig {
  std::string run_id = "run";
  std::string output_dir = "runs";

  double e0 = 1.1;
  std::optional<double> gamma = 0.25;
  std::optional<double> omega;
  double t0 = 0.0;

  double spacing = 0.15;
  double x_min = -10.0;
  std::optional<double> x_max;
  double y_half_width = 10.0;
  std::optional<double> softening;

  double dt = 0.02;
  int krylov_dim = 16;
  double t_span_tau = 5.0;
  bool absorber = true;
  double absorber_frac = 0.1;
  double absorber_strength = 8.0;
  std::size_t snapshot_stride = 0;  ///< steps between field checkpoints in the bundle, 0 = none

  std::size_t samples = 64;
  std::size_t fan_lines = 40;
  double fan_far_factor = 10.0;
  double density_floor = 1e-12;
  double geometry_field = 1.0;  ///< barrier geometry used for the detectors when e0 = 0

  void validate() const;

  /// Pulse; for e0 = 0 the frequency follows from gamma and geometry_field.
  PulseSpec pulse() const;
  /// Field that fixes the detector geometry.
  double barrier_field() const { return e0 > 0.0 ? e0 : geometry_field; }

  /// Grid covering [x_min, x_max] x [-y_half_width, y_half_width]; `far_xi` feeds x_max = auto.
  GridSpec grid(double far_xi) const;
  AbsorberConfig absorber_config() const { return {absorber_frac, absorber_strength}; }
  PropagatorConfig propagator() const;

  /// Normalised INI text with every key present; parse_config(canonical()) reproduces the config.
  std::string canonical() const;
  /// SHA-256 of canonical(), lowercase hex.
  std::string hash() const;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

std::string sha256_hex(const std::string& data);

/// Output root: VDET_OUTPUT_ROOT if set, otherwise `fallback`.
std::filesystem::path output_root(const std::string& fallback);

}  // namespace vdet

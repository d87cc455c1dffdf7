#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vdet/detectors.hpp"
#include "vdet/interpolation.hpp"
#include "vdet/peaks.hpp"
#include "vdet/pulse.hpp"

namespace vdet {

/// Sampled solution of xi'' = -coulomb / xi^2 + 2 E(t).
struct ClassicalTrajectory {
  std::vector<double> times;
  std::vector<double> xi;
  std::vector<double> velocity;

  double at(double t) const;  ///< linear interpolation, clamped to the sampled range
};

enum class ClassicalMode { two_step, corrected };

struct ClassicalOptions {
  double coulomb = 8.0;  ///< strength of the -coulomb / xi^2 term; zero gives the field-only motion
};

/// Fixed-step RK4 from (t_start, xi_start, v0) to t_end. Throws PhysicsFlag
/// when xi reaches zero (the electron is recaptured).
ClassicalTrajectory classical_trajectory(const PulseSpec& pulse, double xi_start, double v0, double t_start,
                                         double t_end, double dt, const ClassicalOptions& opt = {});

/// Two-step: starts at rest at t0. Corrected: starts at t_start with velocity v0.
ClassicalTrajectory classical_trajectory(const PulseSpec& pulse, double xi_exit, ClassicalMode mode, double v0,
                                         double t_start, double t_end, double dt, const ClassicalOptions& opt = {});

struct TrajectoryRecord {
  std::vector<double> xi_lines;          ///< lines kept for the inversion
  std::vector<double> t_peak;            ///< raw flux peak times for xi_lines
  std::vector<double> t_peak_smoothed;   ///< after the local quadratic fit in xi
  std::vector<double> rejected_xi;       ///< lines whose peak broke monotonicity or failed
  std::vector<std::string> flags;
  std::optional<MonotoneCubic> xi_q;     ///< xi as a function of t

  double t_lo() const { return xi_q ? xi_q->lo() : 0.0; }
  double t_hi() const { return xi_q ? xi_q->hi() : 0.0; }
  double operator()(double t) const { return (*xi_q)(t); }
};

/// Inverts the map xi -> t_peak(xi) over a fan of traces. Lines whose peak
/// is missing or not later than every peak at smaller xi are rejected and
/// listed; at least `min_lines` must remain (NumericalError otherwise).
TrajectoryRecord quantum_trajectory(std::span<const DetectorTrace> fan, const PulseSpec& pulse,
                                    std::size_t min_lines = 20);

struct ExitVelocity {
  double value = 0.0;
  bool near_edge = false;
};

/// d xi_q / dt at t_exit. near_edge is set when t_exit lies within one line
/// spacing of the domain boundary.
ExitVelocity exit_velocity(const TrajectoryRecord& record, double t_exit);

struct TrajectoryComparison {
  double t_lo = 0.0, t_hi = 0.0;
  double max_two_step = 0.0, final_two_step = 0.0;
  double max_corrected = 0.0, final_corrected = 0.0;

  bool corrected_better() const { return final_corrected < final_two_step; }
};

/// |reference - a| and |reference - b| on [t_lo, t_hi], sampled every dt.
TrajectoryComparison compare_trajectories(const std::function<double(double)>& reference,
                                          const ClassicalTrajectory& two_step, const ClassicalTrajectory& corrected,
                                          double t_lo, double t_hi, double dt);

}  // namespace vdet

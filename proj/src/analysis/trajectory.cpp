#include "vdet/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vdet/error.hpp"

namespace vdet {

double ClassicalTrajectory::at(double t) const {
  if (times.empty()) throw NumericalError("empty classical trajectory");
  if (t <= times.front()) return xi.front();
  if (t >= times.back()) return xi.back();
  const auto k = static_cast<std::size_t>(std::upper_bound(times.begin(), times.end(), t) - times.begin());
  const double s = (t - times[k - 1]) / (times[k] - times[k - 1]);
  return (1.0 - s) * xi[k - 1] + s * xi[k];
}

ClassicalTrajectory classical_trajectory(const PulseSpec& pulse, double xi_start, double v0, double t_start,
                                         double t_end, double dt, const ClassicalOptions& opt) {
  if (!(dt > 0.0) || !(t_end >= t_start) || !(xi_start > 0.0))
    throw ConfigError("classical trajectory needs dt > 0, t_end >= t_start and xi > 0");
  const auto accel = [&](double t, double x) { return -opt.coulomb / (x * x) + 2.0 * pulse.field_at(t); };
  const auto steps = static_cast<std::size_t>(std::ceil((t_end - t_start) / dt - 1e-9));
  ClassicalTrajectory tr;
  tr.times.reserve(steps + 1);
  double t = t_start, x = xi_start, v = v0;
  tr.times.push_back(t);
  tr.xi.push_back(x);
  tr.velocity.push_back(v);
  for (std::size_t s = 0; s < steps; ++s) {
    const double h = std::min(dt, t_end - t);
    const double k1x = v, k1v = accel(t, x);
    const double k2x = v + 0.5 * h * k1v, k2v = accel(t + 0.5 * h, x + 0.5 * h * k1x);
    const double k3x = v + 0.5 * h * k2v, k3v = accel(t + 0.5 * h, x + 0.5 * h * k2x);
    const double k4x = v + h * k3v, k4v = accel(t + h, x + h * k3x);
    x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    t = t_start + static_cast<double>(s + 1) * dt;
    if (s + 1 == steps) t = t_end;
    if (!(x > 0.0) || !std::isfinite(x)) {
      std::ostringstream msg;
      msg << "classical trajectory recaptured (xi <= 0) at t = " << t;
      throw PhysicsFlag(msg.str());
    }
    tr.times.push_back(t);
    tr.xi.push_back(x);
    tr.velocity.push_back(v);
  }
  return tr;
}

ClassicalTrajectory classical_trajectory(const PulseSpec& pulse, double xi_exit, ClassicalMode mode, double v0,
                                         double t_start, double t_end, double dt, const ClassicalOptions& opt) {
  if (mode == ClassicalMode::two_step && (v0 != 0.0 || t_start != pulse.t0))
    throw ConfigError("two-step trajectory starts at rest at the field maximum");
  return classical_trajectory(pulse, xi_exit, v0, t_start, t_end, dt, opt);
}

TrajectoryRecord quantum_trajectory(std::span<const DetectorTrace> fan, const PulseSpec& pulse, std::size_t min_lines) {
  std::vector<const DetectorTrace*> order;
  for (const auto& tr : fan) order.push_back(&tr);
  std::sort(order.begin(), order.end(), [](auto* a, auto* b) { return a->xi < b->xi; });

  TrajectoryRecord rec;
  const auto window = pulse_window(pulse);
  for (const auto* tr : order) {
    const auto p = peak_time(tr->times, tr->flux, window);
    if (!p.ok()) {
      rec.rejected_xi.push_back(tr->xi);
      std::ostringstream msg;
      msg << "xi = " << tr->xi << ": " << to_string(p.status);
      rec.flags.push_back(msg.str());
      continue;
    }
    if (!rec.t_peak.empty() && !(p.time > rec.t_peak.back())) {
      rec.rejected_xi.push_back(tr->xi);
      std::ostringstream msg;
      msg << "xi = " << tr->xi << ": peak time " << p.time << " not after " << rec.t_peak.back();
      rec.flags.push_back(msg.str());
      continue;
    }
    rec.xi_lines.push_back(tr->xi);
    rec.t_peak.push_back(p.time);
  }
  if (rec.xi_lines.size() < min_lines) {
    std::ostringstream msg;
    msg << "quantum trajectory: only " << rec.xi_lines.size() << " monotone lines (need " << min_lines << ")";
    throw NumericalError(msg.str());
  }

  rec.t_peak_smoothed = local_quadratic_smooth(rec.xi_lines, rec.t_peak);
  const bool monotone = std::adjacent_find(rec.t_peak_smoothed.begin(), rec.t_peak_smoothed.end(),
                                           std::greater_equal<>()) == rec.t_peak_smoothed.end();
  if (!monotone) {
    rec.flags.push_back("smoothed peak times not monotone; raw times used");
    rec.t_peak_smoothed = rec.t_peak;
  }
  rec.xi_q.emplace(rec.t_peak_smoothed, rec.xi_lines);
  return rec;
}

ExitVelocity exit_velocity(const TrajectoryRecord& record, double t_exit) {
  if (!record.xi_q) throw NumericalError("exit velocity: no quantum trajectory");
  const auto& ts = record.t_peak_smoothed;
  if (t_exit < ts.front() || t_exit > ts.back()) {
    std::ostringstream msg;
    msg << "exit velocity: t_exit = " << t_exit << " outside [" << ts.front() << ", " << ts.back() << "]";
    throw NumericalError(msg.str());
  }
  ExitVelocity ev;
  ev.value = record.xi_q->derivative(t_exit);
  ev.near_edge = t_exit < ts[1] || t_exit > ts[ts.size() - 2];
  return ev;
}

TrajectoryComparison compare_trajectories(const std::function<double(double)>& reference,
                                          const ClassicalTrajectory& two_step, const ClassicalTrajectory& corrected,
                                          double t_lo, double t_hi, double dt) {
  if (!(t_hi >= t_lo) || !(dt > 0.0)) throw ConfigError("compare_trajectories: empty window");
  TrajectoryComparison c;
  c.t_lo = t_lo;
  c.t_hi = t_hi;
  const auto n = static_cast<std::size_t>(std::ceil((t_hi - t_lo) / dt));
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = k == n ? t_hi : t_lo + static_cast<double>(k) * dt;
    const double q = reference(t);
    const double d1 = std::abs(q - two_step.at(t)), d2 = std::abs(q - corrected.at(t));
    c.max_two_step = std::max(c.max_two_step, d1);
    c.max_corrected = std::max(c.max_corrected, d2);
    c.final_two_step = d1;
    c.final_corrected = d2;
  }
  return c;
}

}  // namespace vdet

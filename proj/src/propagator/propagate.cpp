#include "vdet/propagate.hpp"

#include <cmath>
#include <sstream>

#include "vdet/error.hpp"
#include "vdet/krylov.hpp"
#include "vdet/operators.hpp"

namespace vdet {

namespace {

// Absorbed probability above which the box is flagged as too small. Behind the
// atom nothing should arrive; the transverse walls catch the spreading tail of
// the outgoing packet and get a looser limit.
constexpr double kBackWallWarning = 1e-3;
constexpr double kTransverseWallWarning = 5e-2;

}  // namespace

void PropagatorConfig::validate() const {
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  if (krylov_dim < 4 || krylov_dim > 64) throw ConfigError("krylov_dim must lie in [4, 64]");
  if (!(t_start < t_end)) throw ConfigError("t_start must precede t_end");
}

std::size_t PropagatorConfig::steps() const {
  return static_cast<std::size_t>(std::llround(std::ceil((t_end - t_start) / dt - 1e-9)));
}

PropagatorConfig PropagatorConfig::around_pulse(const PulseSpec& pulse, double span_tau) {
  PropagatorConfig cfg;
  cfg.t_start = pulse.t0 - span_tau * pulse.tau();
  cfg.t_end = pulse.t0 + span_tau * pulse.tau();
  return cfg;
}

WaveField propagate(WaveField field, const Hamiltonian& h, const PulseSpec& pulse, const PropagatorConfig& cfg,
                    std::span<const ObserverHook> observers, PropagationReport* report) {
  cfg.validate();
  if (!(field.grid() == h.grid())) throw ConfigError("field grid differs from Hamiltonian grid");
  for (const auto& o : observers)
    if (o.stride == 0) throw ConfigError("observer stride must be positive");

  LanczosPropagator prop(field.size(), cfg.krylov_dim);
  Absorber absorber(field.grid(), cfg.absorber);
  PropagationReport local;
  const std::size_t n = cfg.steps();

  for (std::size_t s = 1; s <= n; ++s) {
    const double t = cfg.t_start + static_cast<double>(s - 1) * cfg.dt;
    const auto info = prop.step(h, pulse.field_at(t + 0.5 * cfg.dt), field.data(), cfg.dt);
    local.max_error_estimate = std::max(local.max_error_estimate, info.error_estimate);
    if (cfg.absorber_enabled) local.absorbed += absorber.apply(field.data(), cfg.dt);
    if (!std::isfinite(info.error_estimate) || !std::isfinite(local.absorbed)) {
      std::ostringstream msg;
      msg << "NaN detected at step " << s << " (t = " << t + cfg.dt << ")";
      throw NumericalError(msg.str());
    }
    const double now = cfg.t_start + static_cast<double>(s) * cfg.dt;
    for (const auto& o : observers)
      if (s % o.stride == 0) o.callback(now, field);
  }

  if (!field.all_finite()) throw NumericalError("non-finite amplitudes after propagation");
  local.steps = n;
  local.t_final = cfg.t_start + static_cast<double>(n) * cfg.dt;
  local.absorbed_by_side = absorber.absorbed_by_side();
  local.final_norm = norm(field);
  const auto& side = local.absorbed_by_side;
  const double back = side[static_cast<int>(BoxSide::x_min)];
  const double transverse = side[static_cast<int>(BoxSide::y_min)] + side[static_cast<int>(BoxSide::y_max)];
  if (back > kBackWallWarning) {
    std::ostringstream msg;
    msg << "probability " << back << " absorbed at the x_min wall; the box may be too small";
    local.warnings.push_back(msg.str());
  }
  if (transverse > kTransverseWallWarning) {
    std::ostringstream msg;
    msg << "probability " << transverse << " absorbed at the y walls; the box may be too narrow";
    local.warnings.push_back(msg.str());
  }
  if (report) *report = std::move(local);
  return field;
}

}  // namespace vdet

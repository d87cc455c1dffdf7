#include "vdet/peaks.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vdet/error.hpp"

namespace vdet {

const char* to_string(PeakStatus s) {
  switch (s) {
    case PeakStatus::ok: return "ok";
    case PeakStatus::no_peak: return "no peak";
    case PeakStatus::multimodal: return "multimodal";
    case PeakStatus::at_window_edge: return "peak at window edge";
  }
  return "unknown";
}

PeakResult peak_time(std::span<const double> times, std::span<const double> values, const PeakOptions& opt) {
  if (times.size() != values.size()) throw ConfigError("peak_time: times and values differ in length");
  PeakResult r;
  const auto lo = static_cast<std::size_t>(std::lower_bound(times.begin(), times.end(), opt.window_lo) - times.begin());
  const auto hi = static_cast<std::size_t>(std::upper_bound(times.begin(), times.end(), opt.window_hi) - times.begin());
  if (hi <= lo + 2) return r;

  std::size_t best = lo;
  for (std::size_t k = lo + 1; k < hi; ++k)
    if (values[k] > values[best]) best = k;
  r.index = best;
  r.value = values[best];
  r.time = times[best];
  if (!(r.value > opt.min_height)) return r;
  for (std::size_t k = best + 1; k < hi; ++k)
    if (values[k] == r.value) r.tie = true;

  // other humps: local maxima above the ratio, separated from the main one by a dip
  const double level = opt.secondary_ratio * r.value;
  for (std::size_t k = lo + 1; k + 1 < hi; ++k) {
    if (k == best || values[k] < level || values[k] < values[k - 1] || values[k] < values[k + 1]) continue;
    const auto [a, b] = std::minmax(k, best);
    const double dip = *std::min_element(values.begin() + a, values.begin() + b + 1);
    if (dip < opt.secondary_ratio * values[k]) {
      r.status = PeakStatus::multimodal;
      return r;
    }
  }

  if (best == lo || best + 1 == hi) {
    r.status = PeakStatus::at_window_edge;
    return r;
  }
  const double t0 = times[best - 1], t1 = times[best], t2 = times[best + 1];
  const double y0 = values[best - 1], y1 = values[best], y2 = values[best + 1];
  // vertex of the interpolating parabola
  const double d01 = (y1 - y0) / (t1 - t0), d12 = (y2 - y1) / (t2 - t1);
  const double curv = (d12 - d01) / (t2 - t0);
  if (curv < 0.0) {
    const double vertex = 0.5 * (t0 + t1) - d01 / (2.0 * curv);
    r.offset = std::clamp(vertex, t0, t2) - t1;
  }
  r.time = t1 + r.offset;
  r.status = PeakStatus::ok;
  return r;
}

PeakOptions pulse_window(const PulseSpec& pulse, double half_width_tau) {
  PeakOptions opt;
  opt.window_lo = pulse.t0 - half_width_tau * pulse.tau();
  opt.window_hi = pulse.t0 + half_width_tau * pulse.tau();
  return opt;
}

PeakResult peak_time(const DetectorTrace& trace, const PulseSpec& pulse) {
  return peak_time(trace.times, trace.flux, pulse_window(pulse));
}

TimingResult timing(const DetectorTrace& entry, const DetectorTrace& exit, const PulseSpec& pulse,
                    const StarkSolution& barrier) {
  TimingResult r;
  r.t0 = pulse.t0;
  r.xi_in = barrier.xi_in;
  r.xi_exit = barrier.xi_exit;
  r.eta0 = barrier.eta0;
  r.entry = peak_time(entry, pulse);
  r.exit = peak_time(exit, pulse);
  auto note = [&](const char* which, const PeakResult& p) {
    std::ostringstream msg;
    if (!p.ok()) {
      msg << which << ": " << to_string(p.status);
      r.flags.push_back(msg.str());
    } else if (p.tie) {
      msg << which << ": equal maxima, earliest used";
      r.flags.push_back(msg.str());
    }
  };
  note("entry", r.entry);
  note("exit", r.exit);
  if (!r.valid()) return r;
  r.t_in = r.entry.time;
  r.t_exit = r.exit.time;
  r.tau_exit = r.t_exit - r.t0;
  r.tau_tsub = r.t_exit - r.t_in;
  r.v_avg = (r.xi_exit - r.xi_in) / (2.0 * r.tau_tsub);
  if (!(r.tau_tsub > 0.0)) r.flags.push_back("exit peak does not follow entry peak");
  return r;
}

}  // namespace vdet

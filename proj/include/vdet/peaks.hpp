#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "vdet/detectors.hpp"
#include "vdet/pulse.hpp"
#include "vdet/stark.hpp"

namespace vdet {

enum class PeakStatus { ok, no_peak, multimodal, at_window_edge };

const char* to_string(PeakStatus s);

struct PeakOptions {
  double window_lo = -1e300;
  double window_hi = 1e300;
  double secondary_ratio = 0.9;  ///< a separate hump at least this high flags the trace
  double min_height = 1e-6;      ///< maxima below this count as no peak (absorber noise floor)
};

struct PeakResult {
  PeakStatus status = PeakStatus::no_peak;
  double time = 0.0;    ///< refined peak time
  double value = 0.0;   ///< discrete maximum
  double offset = 0.0;  ///< refined minus discrete time
  std::size_t index = 0;
  bool tie = false;     ///< several samples share the maximum; the earliest was used

  bool ok() const { return status == PeakStatus::ok; }
};

/// Discrete argmax inside the window, refined by the parabola through the
/// maximum and its two neighbours.
PeakResult peak_time(std::span<const double> times, std::span<const double> values, const PeakOptions& opt = {});

/// Window |t - t0| <= half_width_tau * tau of the pulse.
PeakOptions pulse_window(const PulseSpec& pulse, double half_width_tau = 3.0);

/// Peak of the flux series of a trace within the pulse window.
PeakResult peak_time(const DetectorTrace& trace, const PulseSpec& pulse);

struct TimingResult {
  double t_in = 0.0;
  double t_exit = 0.0;
  double t0 = 0.0;
  double tau_exit = 0.0;
  double tau_tsub = 0.0;
  double v_avg = 0.0;
  double xi_in = 0.0;
  double xi_exit = 0.0;
  double eta0 = 0.0;
  PeakResult entry;
  PeakResult exit;
  std::vector<std::string> flags;

  bool valid() const { return entry.ok() && exit.ok(); }
};

/// Delays and average barrier velocity from the entry and exit traces.
TimingResult timing(const DetectorTrace& entry, const DetectorTrace& exit, const PulseSpec& pulse,
                    const StarkSolution& barrier);

}  // namespace vdet

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "vdet/config.hpp"
#include "vdet/detectors.hpp"
#include "vdet/peaks.hpp"
#include "vdet/propagate.hpp"
#include "vdet/stark.hpp"
#include "vdet/trajectory.hpp"

namespace vdet {

using nlohmann::json;

struct Analysis {
  TimingResult timing;
  PeakResult entry_density_peak;
  PeakResult entry_velocity_peak;
  double entry_density_initial = 0.0;
  double entry_density_final = 0.0;
  double exit_flux_max = 0.0;
  double exit_flux_min = 0.0;

  std::optional<TrajectoryRecord> trajectory;
  std::optional<ExitVelocity> v_exit;
  std::optional<ClassicalTrajectory> two_step;
  std::optional<ClassicalTrajectory> corrected;
  std::optional<TrajectoryComparison> comparison;
  std::optional<double> xi_q_at_t0;
  std::vector<std::string> flags;
};

/// Post-processing of a finished run. Never throws for physics reasons; problems become flags.
Analysis analyze_traces(const std::vector<DetectorTrace>& traces, std::size_t entry, std::size_t exit,
                        const PulseSpec& pulse, const StarkSolution& barrier, double dt, double t_end);

json to_json(const Analysis& a, const std::string& config_hash);

struct RunResult {
  RunResult(RunConfig cfg, GridSpec g, PulseSpec p, StarkSolution b)
      : config(std::move(cfg)), grid(g), barrier(b), pulse(p) {}

  RunConfig config;
  std::string config_hash;
  std::filesystem::path directory;
  GridSpec grid;
  double softening = 0.0;
  double ground_energy = 0.0;
  double ground_overlap = 0.0;
  StarkSolution barrier;
  PulseSpec pulse;
  PropagationReport report;
  std::vector<DetectorTrace> traces;
  std::size_t entry_index = 0;
  std::size_t exit_index = 0;
  Analysis analysis;
};

/// Ground state, barrier, propagation with detectors, analysis. When `root` is
/// given the bundle root/<run id>/ receives manifest.json, config.ini, one trace
/// CSV per line and analysis.json (plus snapshot_<step>.bin checkpoints when
/// snapshot_stride is set); the manifest says "incomplete" until the end.
/// `extra` observers run alongside the detector recorder.
RunResult run(const RunConfig& config, const std::optional<std::filesystem::path>& root,
              std::span<const ObserverHook> extra = {});

/// Re-analyses a bundle directory. Rejects bundles whose trace files carry a
/// config hash different from the manifest's.
json analyze_bundle(const std::filesystem::path& directory);

json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const json& j);

/// Softening for a grid spacing, calibrated once per process and cached.
double softening_for(double spacing);

}  // namespace vdet

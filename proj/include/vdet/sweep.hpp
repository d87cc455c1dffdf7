#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vdet/config.hpp"

namespace vdet {

struct SweepSpec {
  std::vector<double> e0_values;
  double gamma = 0.25;
  std::size_t jobs = 1;

  /// Sorts and deduplicates e0_values; rejects non-positive entries.
  void normalize();
};

struct SweepRow {
  double e0 = 0.0;
  std::string status = "ok";
  std::string error;
  std::optional<double> tau_exit, tau_tsub, v_avg, v_exit;
  std::optional<double> t_in, t_exit, t0, xi_exit, xi_q_at_t0;
  std::optional<double> final_two_step, final_corrected;
  double exit_flux_min = 0.0, exit_flux_max = 0.0;
};

/// Parallelism: explicit value if nonzero, else VDET_JOBS, else 1.
std::size_t sweep_jobs(std::size_t requested);

/// Runs base with each e0 (gamma fixed) as run id "<base id>_e0_<value>".
/// Failed runs are recorded and do not stop the sweep. Rows follow the e0 order
/// regardless of scheduling. With a root, writes root/<base id>/sweep.csv and bundles.
std::vector<SweepRow> sweep(const RunConfig& base, SweepSpec spec, const std::optional<std::filesystem::path>& root);

/// CSV: e0,status,tau_exit,tau_tsub,v_avg,v_exit,t_in,t_exit,t0,xi_exit,xi_q_at_t0,final_two_step,final_corrected,exit_flux_min,exit_flux_max
std::string sweep_csv(const std::vector<SweepRow>& rows);

std::string run_id_for(const std::string& base, double e0);

}  // namespace vdet

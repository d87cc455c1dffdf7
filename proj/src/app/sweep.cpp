#include "vdet/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "vdet/error.hpp"
#include "vdet/run.hpp"

namespace vdet {

void SweepSpec::normalize() {
  if (e0_values.empty()) throw ConfigError("sweep needs at least one e0 value");
  for (double e : e0_values)
    if (!(e > 0.0)) throw ConfigError("sweep e0 values must be positive");
  if (!(gamma > 0.0)) throw ConfigError("sweep gamma must be positive");
  std::sort(e0_values.begin(), e0_values.end());
  e0_values.erase(std::unique(e0_values.begin(), e0_values.end()), e0_values.end());
}

std::size_t sweep_jobs(std::size_t requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("VDET_JOBS"); env && *env) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1) throw ConfigError("VDET_JOBS must be a positive integer");
    return static_cast<std::size_t>(v);
  }
  return 1;
}

std::string run_id_for(const std::string& base, double e0) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "_e0_%.4g", e0);
  return base + buf;
}

namespace {

SweepRow run_one(const RunConfig& base, double e0, double gamma, const std::optional<std::filesystem::path>& root) {
  SweepRow row;
  row.e0 = e0;
  RunConfig cfg = base;
  cfg.e0 = e0;
  cfg.gamma = gamma;
  cfg.omega.reset();
  cfg.run_id = run_id_for(base.run_id, e0);
  try {
    const auto r = run(cfg, root);
    const auto& a = r.analysis;
    row.t0 = a.timing.t0;
    row.xi_exit = a.timing.xi_exit;
    row.exit_flux_min = a.exit_flux_min;
    row.exit_flux_max = a.exit_flux_max;
    if (a.timing.valid()) {
      row.tau_exit = a.timing.tau_exit;
      row.tau_tsub = a.timing.tau_tsub;
      row.v_avg = a.timing.v_avg;
      row.t_in = a.timing.t_in;
      row.t_exit = a.timing.t_exit;
    } else {
      row.status = "flagged";
    }
    if (a.v_exit) row.v_exit = a.v_exit->value;
    row.xi_q_at_t0 = a.xi_q_at_t0;
    if (a.comparison) {
      row.final_two_step = a.comparison->final_two_step;
      row.final_corrected = a.comparison->final_corrected;
    }
    for (const auto& f : a.flags) row.error += (row.error.empty() ? "" : "; ") + f;
  } catch (const std::exception& e) {
    row.status = "failed";
    row.error = e.what();
  }
  return row;
}

}  // namespace

std::vector<SweepRow> sweep(const RunConfig& base, SweepSpec spec, const std::optional<std::filesystem::path>& root) {
  spec.normalize();
  base.validate();
  const auto dir = root ? std::optional(*root / base.run_id) : std::nullopt;
  if (dir) std::filesystem::create_directories(*dir);

  // warm the softening cache once so worker threads do not repeat the calibration
  if (!base.softening) softening_for(base.spacing);

  std::vector<SweepRow> rows(spec.e0_values.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next++) < rows.size();) rows[k] = run_one(base, spec.e0_values[k], spec.gamma, dir);
  };
  const std::size_t jobs = std::min(sweep_jobs(spec.jobs), rows.size());
  std::vector<std::thread> pool;
  for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  if (dir) {
    std::ofstream out(*dir / "sweep.csv");
    out << "# config_hash=" << base.hash() << "\n" << sweep_csv(rows);
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream s;
  s << "e0,status,tau_exit,tau_tsub,v_avg,v_exit,t_in,t_exit,t0,xi_exit,xi_q_at_t0,final_two_step,final_corrected,"
       "exit_flux_min,exit_flux_max\n";
  auto put = [&](const std::optional<double>& v) {
    char buf[32];
    if (v)
      std::snprintf(buf, sizeof buf, ",%.17g", *v);
    else
      std::snprintf(buf, sizeof buf, ",");
    s << buf;
  };
  for (const auto& r : rows) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", r.e0);
    s << buf << "," << r.status;
    for (const auto& v : {r.tau_exit, r.tau_tsub, r.v_avg, r.v_exit, r.t_in, r.t_exit, r.t0, r.xi_exit, r.xi_q_at_t0,
                          r.final_two_step, r.final_corrected})
      put(v);
    put(r.exit_flux_min);
    put(r.exit_flux_max);
    s << "\n";
  }
  return s.str();
}

}  // namespace vdet

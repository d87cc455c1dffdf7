#include "vdet/run.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>

#include "vdet/error.hpp"
#include "vdet/field_io.hpp"
#include "vdet/ground_state.hpp"
#include "vdet/trace_io.hpp"

namespace vdet {

namespace fs = std::filesystem;

namespace {

json nullable(const std::optional<double>& v) { return v && std::isfinite(*v) ? json(*v) : json(nullptr); }

json peak_json(const PeakResult& p) {
  json j{{"status", to_string(p.status)}, {"tie", p.tie}};
  j["time"] = p.ok() ? json(p.time) : json(nullptr);
  j["offset"] = p.ok() ? json(p.offset) : json(nullptr);
  j["value"] = p.value;
  return j;
}

std::size_t closest_line(const std::vector<DetectorTrace>& traces, double xi) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < traces.size(); ++k)
    if (std::abs(traces[k].xi - xi) < std::abs(traces[best].xi - xi)) best = k;
  return best;
}

double tail_mean(const std::vector<double>& v, double fraction) {
  const auto n = std::max<std::size_t>(1, static_cast<std::size_t>(fraction * static_cast<double>(v.size())));
  double s = 0.0;
  for (std::size_t k = v.size() - n; k < v.size(); ++k) s += v[k];
  return s / static_cast<double>(n);
}

}  // namespace

double softening_for(double spacing) {
  static std::mutex mu;
  static std::map<double, double> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(spacing);
  if (it == cache.end()) it = cache.emplace(spacing, calibrate_softening(spacing)).first;
  return it->second;
}

Analysis analyze_traces(const std::vector<DetectorTrace>& traces, std::size_t entry, std::size_t exit,
                        const PulseSpec& pulse, const StarkSolution& barrier, double dt, double t_end) {
  Analysis a;
  const auto& in = traces.at(entry);
  const auto& out = traces.at(exit);
  a.timing = timing(in, out, pulse, barrier);
  a.flags = a.timing.flags;

  const auto window = pulse_window(pulse);
  a.entry_density_peak = peak_time(in.times, in.line_density, window);
  a.entry_velocity_peak = peak_time(in.times, in.line_velocity, window);
  if (!in.line_density.empty()) {
    a.entry_density_initial = in.line_density.front();
    a.entry_density_final = tail_mean(in.line_density, 0.05);
  }
  if (!out.flux.empty()) {
    a.exit_flux_max = *std::max_element(out.flux.begin(), out.flux.end());
    a.exit_flux_min = *std::min_element(out.flux.begin(), out.flux.end());
  }
  if (!a.timing.valid()) {
    a.flags.push_back("no trajectory without entry and exit peaks");
    return a;
  }

  try {
    a.trajectory = quantum_trajectory(traces, pulse);
    for (const auto& f : a.trajectory->flags) a.flags.push_back("trajectory: " + f);
    const auto& rec = *a.trajectory;
    if (pulse.t0 >= rec.t_lo() && pulse.t0 <= rec.t_hi()) a.xi_q_at_t0 = rec(pulse.t0);
    a.v_exit = exit_velocity(rec, a.timing.t_exit);
    if (a.v_exit->near_edge) a.flags.push_back("t_exit within one line of the trajectory domain edge");
    a.two_step = classical_trajectory(pulse, barrier.xi_exit, ClassicalMode::two_step, 0.0, pulse.t0, t_end, dt);
    a.corrected = classical_trajectory(pulse, barrier.xi_exit, ClassicalMode::corrected, a.v_exit->value,
                                       a.timing.t_exit, t_end, dt);
    const double lo = std::max(pulse.t0, a.timing.t_exit), hi = std::min(rec.t_hi(), t_end);
    if (hi > lo)
      a.comparison = compare_trajectories([&](double t) { return rec(t); }, *a.two_step, *a.corrected, lo, hi, dt);
    else
      a.flags.push_back("trajectory ends before the comparison window");
  } catch (const Error& e) {
    a.flags.push_back(std::string("trajectory: ") + e.what());
  }
  return a;
}

json to_json(const Analysis& a, const std::string& config_hash) {
  json j;
  j["config_hash"] = config_hash;
  const auto& t = a.timing;
  const bool ok = t.valid();
  auto opt = [&](double v) { return ok ? json(v) : json(nullptr); };
  j["timing"] = {{"t0", t.t0},
                 {"t_in", opt(t.t_in)},
                 {"t_exit", opt(t.t_exit)},
                 {"tau_exit", opt(t.tau_exit)},
                 {"tau_tsub", opt(t.tau_tsub)},
                 {"v_avg", opt(t.v_avg)},
                 {"xi_in", t.xi_in},
                 {"xi_exit", t.xi_exit},
                 {"eta0", t.eta0},
                 {"entry_peak", peak_json(t.entry)},
                 {"exit_peak", peak_json(t.exit)}};
  j["v_exit"] = a.v_exit ? json(a.v_exit->value) : json(nullptr);
  j["xi_q_at_t0"] = nullable(a.xi_q_at_t0);
  j["entry_line"] = {{"density_peak", peak_json(a.entry_density_peak)},
                     {"velocity_peak", peak_json(a.entry_velocity_peak)},
                     {"density_initial", a.entry_density_initial},
                     {"density_final", a.entry_density_final}};
  j["exit_flux"] = {{"max", a.exit_flux_max}, {"min", a.exit_flux_min}};

  if (a.trajectory) {
    const auto& r = *a.trajectory;
    json table = {{"t", json::array()}, {"xi_q", json::array()}, {"xi_c", json::array()}, {"xi_cc", json::array()}};
    const std::size_t n = 200;
    for (std::size_t k = 0; k <= n; ++k) {
      const double time = r.t_lo() + (r.t_hi() - r.t_lo()) * static_cast<double>(k) / n;
      table["t"].push_back(time);
      table["xi_q"].push_back(r(time));
      const bool c = a.two_step && time >= a.two_step->times.front();
      const bool cc = a.corrected && time >= a.corrected->times.front();
      table["xi_c"].push_back(c ? json(a.two_step->at(time)) : json(nullptr));
      table["xi_cc"].push_back(cc ? json(a.corrected->at(time)) : json(nullptr));
    }
    j["trajectory"] = {{"xi_lines", r.xi_lines},
                       {"t_peak", r.t_peak},
                       {"t_peak_smoothed", r.t_peak_smoothed},
                       {"rejected_xi", r.rejected_xi},
                       {"table", table}};
  } else {
    j["trajectory"] = nullptr;
  }
  if (a.comparison) {
    const auto& c = *a.comparison;
    j["comparison"] = {{"t_lo", c.t_lo},
                       {"t_hi", c.t_hi},
                       {"max_two_step", c.max_two_step},
                       {"final_two_step", c.final_two_step},
                       {"max_corrected", c.max_corrected},
                       {"final_corrected", c.final_corrected},
                       {"corrected_better", c.corrected_better()}};
  } else {
    j["comparison"] = nullptr;
  }
  j["flags"] = a.flags;
  return j;
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("invalid JSON in " + path.string() + ": " + e.what());
  }
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

RunResult run(const RunConfig& config, const std::optional<fs::path>& root, std::span<const ObserverHook> extra) {
  config.validate();
  const auto barrier = barrier_geometry(config.barrier_field());
  const auto pulse = config.pulse();
  const double far_xi = config.fan_far_factor * barrier.xi_exit;
  const auto xis = detector_fan(barrier.xi_in, far_xi, config.fan_lines, std::vector{barrier.xi_in, barrier.xi_exit});
  RunResult r(config, config.grid(far_xi), pulse, barrier);
  r.config_hash = config.hash();

  json manifest;
  auto flush_manifest = [&](const char* status) {
    if (!root) return;
    manifest["status"] = status;
    write_json(r.directory / "manifest.json", manifest);
  };
  if (root) {
    r.directory = *root / config.run_id;
    fs::create_directories(r.directory);
    std::ofstream(r.directory / "config.ini") << config.canonical();
  }
  manifest = {{"tool_version", kToolVersion},
              {"config_hash", r.config_hash},
              {"run_id", config.run_id},
              {"pulse", {{"e0", pulse.e0}, {"omega", pulse.omega}, {"t0", pulse.t0}, {"tau", pulse.tau()}}},
              {"barrier",
               {{"field", barrier.params.field},
                {"energy", barrier.params.energy},
                {"beta1", barrier.params.beta1},
                {"beta2", barrier.params.beta2},
                {"xi_in", barrier.xi_in},
                {"xi_exit", barrier.xi_exit},
                {"eta0", barrier.eta0},
                {"xi_barrier_top", barrier.xi_barrier_top}}},
              {"grid",
               {{"x_min", r.grid.x_min()},
                {"x_max", r.grid.x_max()},
                {"nx", r.grid.nx()},
                {"y_min", r.grid.y_min()},
                {"y_max", r.grid.y_max()},
                {"ny", r.grid.ny()}}}};
  flush_manifest("incomplete");

  try {
    r.softening = config.softening ? *config.softening : softening_for(config.spacing);
    const Hamiltonian h(r.grid, {r.softening});
    const auto gs = relax_ground_state(r.grid, {r.softening});
    r.ground_energy = gs.energy;
    r.ground_overlap = overlap(gs.field, analytic_ground_state(r.grid));

    std::vector<DetectorLine> lines;
    for (double xi : xis) lines.push_back(make_line(xi, barrier.eta0, config.samples));
    const auto prop = config.propagator();
    const Absorber mask(r.grid, prop.absorber);
    std::vector<std::string> line_warnings;
    for (const auto& l : lines) {
      const double far_x = 0.5 * (l.xi - l.eta_max), far_y = std::sqrt(l.xi * l.eta_max);
      if (mask.in_layer(0.5 * l.xi, 0.0) || mask.in_layer(far_x, far_y) || mask.in_layer(far_x, -far_y)) {
        std::ostringstream msg;
        msg << "detector line xi = " << l.xi << " reaches into the absorbing layer";
        line_warnings.push_back(msg.str());
      }
    }

    TraceRecorder recorder(r.grid, std::move(lines), config.density_floor);
    std::vector<ObserverHook> hooks{recorder.hook()};
    hooks.insert(hooks.end(), extra.begin(), extra.end());
    if (root && config.snapshot_stride > 0) {
      hooks.push_back({config.snapshot_stride, [&, step = std::size_t{0}](double t, const WaveField& f) mutable {
                         step += config.snapshot_stride;
                         char name[40];
                         std::snprintf(name, sizeof name, "snapshot_%07zu.bin", step);
                         write_checkpoint(f, t, r.directory / name);
                       }});
    }
    propagate(gs.field, h, pulse, prop, hooks, &r.report);
    r.report.warnings.insert(r.report.warnings.begin(), line_warnings.begin(), line_warnings.end());
    r.traces = recorder.take();
    r.entry_index = closest_line(r.traces, barrier.xi_in);
    r.exit_index = closest_line(r.traces, barrier.xi_exit);
    r.analysis = analyze_traces(r.traces, r.entry_index, r.exit_index, pulse, barrier, prop.dt, prop.t_end);

    if (root) {
      json jl = json::array();
      for (std::size_t k = 0; k < r.traces.size(); ++k) {
        const auto name = trace_file_name(k, r.traces[k].xi);
        write_trace_csv(r.directory / name, r.traces[k], r.config_hash);
        const char* role = k == r.entry_index ? "entry" : k == r.exit_index ? "exit" : "fan";
        jl.push_back({{"xi", r.traces[k].xi}, {"eta_max", r.traces[k].eta_max}, {"file", name}, {"role", role}});
      }
      manifest["lines"] = jl;
      manifest["softening"] = r.softening;
      manifest["ground_state"] = {{"energy", r.ground_energy}, {"overlap", r.ground_overlap}};
      manifest["propagation"] = {{"dt", prop.dt},
                                 {"krylov_dim", prop.krylov_dim},
                                 {"t_start", prop.t_start},
                                 {"t_end", prop.t_end},
                                 {"steps", r.report.steps},
                                 {"absorbed", r.report.absorbed},
                                 {"absorbed_by_side", r.report.absorbed_by_side},
                                 {"final_norm", r.report.final_norm},
                                 {"max_error_estimate", r.report.max_error_estimate},
                                 {"warnings", r.report.warnings}};
      write_json(r.directory / "analysis.json", to_json(r.analysis, r.config_hash));
      flush_manifest("complete");
    }
  } catch (const std::exception& e) {
    manifest["error"] = e.what();
    flush_manifest("incomplete");
    throw;
  }
  return r;
}

json analyze_bundle(const fs::path& directory) {
  const auto manifest = read_json(directory / "manifest.json");
  if (manifest.value("status", "") != "complete") throw ConfigError("bundle " + directory.string() + " is incomplete");
  const auto hash = manifest.at("config_hash").get<std::string>();
  const auto config = load_config(directory / "config.ini");
  if (config.hash() != hash) throw ConfigError("config.ini does not match the manifest config hash");

  std::vector<DetectorTrace> traces;
  std::size_t entry = 0, exit = 0;
  for (const auto& l : manifest.at("lines")) {
    auto tf = read_trace_csv(directory / l.at("file").get<std::string>());
    if (tf.config_hash != hash)
      throw ConfigError("trace " + l.at("file").get<std::string>() + " carries a different config hash");
    const auto role = l.at("role").get<std::string>();
    if (role == "entry") entry = traces.size();
    if (role == "exit") exit = traces.size();
    traces.push_back(std::move(tf.trace));
  }
  if (traces.empty()) throw ConfigError("bundle has no traces");
  const auto barrier = barrier_geometry(config.barrier_field());
  const auto prop = config.propagator();
  const auto a = analyze_traces(traces, entry, exit, config.pulse(), barrier, prop.dt, prop.t_end);
  return to_json(a, hash);
}

}  // namespace vdet

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

#include "vdet/config.hpp"
#include "vdet/error.hpp"
#include "vdet/figures.hpp"
#include "vdet/ground_state.hpp"
#include "vdet/run.hpp"
#include "vdet/stark.hpp"
#include "vdet/sweep.hpp"

namespace {

using namespace vdet;

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << text;
}

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::config: return 2;
    case ErrorKind::numerical: return 3;
    case ErrorKind::physics: return 4;
  }
  return 1;
}

RunConfig config_from(const std::string& path) { return path.empty() ? RunConfig{} : load_config(path); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Virtual-detector tunneling time solver"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  double spacing = 0.15, half_width = 6.0, field = 1.1;
  std::string softening = "auto", config_path, output, out_file, bundle, sweep_dir, figure;
  std::vector<double> e0_values;
  double gamma = 0.25;
  std::size_t jobs = 0;

  auto* gs = app.add_subcommand("groundstate", "relax the field-free ground state and report its energy");
  gs->add_option("--spacing", spacing, "grid spacing (a.u.)")->capture_default_str();
  gs->add_option("--half-width", half_width, "half-width of the square box (a.u.)")->capture_default_str();
  gs->add_option("--softening", softening, "Coulomb softening a^2, or auto")->capture_default_str();

  auto* bar = app.add_subcommand("barrier", "Stark parameters and barrier geometry for a static field");
  bar->add_option("--e0,--field", field, "field strength (a.u.)")->required();

  auto* pot = app.add_subcommand("potentials", "separated potentials V1, V2 and E/4 as CSV");
  pot->add_option("--e0,--field", field, "field strength (a.u.)")->required();
  pot->add_option("-o,--out", out_file, "output file (default stdout)");

  auto* run_cmd = app.add_subcommand("run", "run one simulation and write its bundle");
  run_cmd->add_option("-c,--config", config_path, "INI config (defaults if omitted)")->check(CLI::ExistingFile);
  run_cmd->add_option("--output", output, "output root (overrides VDET_OUTPUT_ROOT and run.output_dir)");

  auto* sw = app.add_subcommand("sweep", "run a field sweep at fixed Keldysh parameter");
  sw->add_option("-c,--config", config_path, "base INI config")->check(CLI::ExistingFile);
  sw->add_option("--e0", e0_values, "field amplitudes")->required()->delimiter(',');
  sw->add_option("--gamma", gamma, "Keldysh parameter")->capture_default_str();
  sw->add_option("-j,--jobs", jobs, "parallel runs (default VDET_JOBS or 1)");
  sw->add_option("--output", output, "output root (overrides VDET_OUTPUT_ROOT and run.output_dir)");

  auto* an = app.add_subcommand("analyze", "re-analyse a run bundle");
  an->add_option("bundle", bundle, "bundle directory")->required()->check(CLI::ExistingDirectory);
  an->add_option("-o,--out", out_file, "output file (default stdout)");

  auto* em = app.add_subcommand("emit", "write plot data for a figure");
  em->add_option("--figure", figure, "fig1..fig9")->required();
  em->add_option("--bundle", bundle, "run bundle (fig3, fig5, fig7)")->check(CLI::ExistingDirectory);
  em->add_option("--sweep", sweep_dir, "sweep directory (fig4, fig6, fig8)")->check(CLI::ExistingDirectory);
  em->add_option("--field", field, "field strength for fig1, fig2")->capture_default_str();
  em->add_option("-o,--out", out_file, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    auto root_for = [&](const RunConfig& cfg) {
      return output.empty() ? output_root(cfg.output_dir) : std::filesystem::path(output);
    };
    if (*gs) {
      const auto grid = GridSpec::with_spacing(-half_width, half_width, -half_width, half_width, spacing);
      double a2 = 0.0;
      if (softening == "auto") {
        a2 = calibrate_softening(spacing, kCoulombGroundEnergy, half_width);
      } else {
        try {
          a2 = std::stod(softening);
        } catch (const std::exception&) {
          throw ConfigError("--softening must be a number or auto");
        }
      }
      const auto g = relax_ground_state(grid, {a2});
      const json j{{"spacing", spacing},
                   {"softening", a2},
                   {"energy", g.energy},
                   {"overlap", overlap(g.field, analytic_ground_state(grid))},
                   {"iterations", g.iterations}};
      std::cout << j.dump(2) << "\n";
    } else if (*bar) {
      const auto s = barrier_geometry(field);
      const json j{{"field", field},
                   {"energy", s.params.energy},
                   {"beta1", s.params.beta1},
                   {"beta2", s.params.beta2},
                   {"xi_in", s.xi_in},
                   {"xi_exit", s.xi_exit},
                   {"eta0", s.eta0},
                   {"xi_barrier_top", s.xi_barrier_top}};
      std::cout << j.dump(2) << "\n";
    } else if (*pot) {
      emit(emit_figure(Figure::fig1, {std::nullopt, field}), out_file);
    } else if (*run_cmd) {
      const auto cfg = config_from(config_path);
      const auto r = run(cfg, root_for(cfg));
      for (const auto& w : r.report.warnings) std::cerr << "warning: " << w << "\n";
      for (const auto& f : r.analysis.flags) std::cerr << "flag: " << f << "\n";
      std::cout << r.directory.string() << "\n";
    } else if (*sw) {
      const auto cfg = config_from(config_path);
      SweepSpec spec{e0_values, gamma, jobs};
      const auto rows = sweep(cfg, spec, root_for(cfg));
      std::cout << sweep_csv(rows);
      for (const auto& r : rows)
        if (r.status == "failed") std::cerr << "run e0 = " << r.e0 << " failed: " << r.error << "\n";
    } else if (*an) {
      emit(analyze_bundle(bundle).dump(2) + "\n", out_file);
    } else if (*em) {
      const auto f = parse_figure(figure);
      FigureInput in{std::nullopt, field};
      if (figure_source(f) == FigureSource::bundle && !bundle.empty()) in.path = bundle;
      if (figure_source(f) == FigureSource::sweep && !sweep_dir.empty()) in.path = sweep_dir;
      emit(emit_figure(f, in), out_file);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

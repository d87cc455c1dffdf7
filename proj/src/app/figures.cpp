#include "vdet/figures.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "vdet/config.hpp"
#include "vdet/error.hpp"
#include "vdet/run.hpp"
#include "vdet/stark.hpp"
#include "vdet/trace_io.hpp"

namespace vdet {

namespace fs = std::filesystem;

namespace {

class Csv {
public:
  explicit Csv(const char* header) { s_ << header << "\n"; }
  Csv& operator<<(double v) {
    sep();
    if (std::isfinite(v)) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.12g", v);
      s_ << buf;
    }
    return *this;
  }
  Csv& operator<<(const std::string& v) {
    sep();
    s_ << v;
    return *this;
  }
  void end() {
    s_ << "\n";
    first_ = true;
  }
  std::string str() const { return s_.str(); }

private:
  void sep() {
    if (!first_) s_ << ",";
    first_ = false;
  }
  std::ostringstream s_;
  bool first_ = true;
};

const fs::path& require_path(const FigureInput& in) {
  if (!in.path) throw ConfigError("this figure needs a bundle or sweep directory");
  return *in.path;
}

struct Bundle {
  json manifest;
  RunConfig config;
  std::vector<DetectorTrace> traces;
  std::size_t entry = 0, exit = 0;
};

Bundle load_bundle(const fs::path& dir) {
  Bundle b{read_json(dir / "manifest.json"), load_config(dir / "config.ini"), {}};
  if (b.manifest.value("status", "") != "complete") throw ConfigError("bundle " + dir.string() + " is incomplete");
  const auto hash = b.manifest.at("config_hash").get<std::string>();
  if (b.config.hash() != hash) throw ConfigError("config.ini does not match the manifest config hash");
  for (const auto& l : b.manifest.at("lines")) {
    const auto role = l.at("role").get<std::string>();
    if (role == "fan") continue;
    auto tf = read_trace_csv(dir / l.at("file").get<std::string>());
    if (tf.config_hash != hash) throw ConfigError("trace carries a different config hash");
    (role == "entry" ? b.entry : b.exit) = b.traces.size();
    b.traces.push_back(std::move(tf.trace));
  }
  if (b.traces.size() != 2) throw ConfigError("bundle lacks entry or exit trace");
  return b;
}

std::vector<std::map<std::string, std::string>> read_sweep(const fs::path& dir) {
  std::ifstream in(dir / "sweep.csv");
  if (!in) throw ConfigError("cannot read " + (dir / "sweep.csv").string());
  std::vector<std::string> header;
  std::vector<std::map<std::string, std::string>> rows;
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!s.empty() && s.back() == ',') out.emplace_back();
    return out;
  };
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header.empty()) {
      header = split(line);
      continue;
    }
    const auto cells = split(line);
    std::map<std::string, std::string> row;
    for (std::size_t k = 0; k < header.size() && k < cells.size(); ++k) row[header[k]] = cells[k];
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string sweep_figure(const FigureInput& in, const char* header, std::vector<std::string> columns) {
  Csv csv(header);
  for (const auto& row : read_sweep(require_path(in))) {
    csv << row.at("e0");
    for (const auto& c : columns) csv << row.at(c);
    csv.end();
  }
  return csv.str();
}

double figure_field(const FigureInput& in) {
  if (!(in.field > 0.0)) throw ConfigError("figure field must be positive");
  return in.field;
}

}  // namespace

Figure parse_figure(const std::string& id) {
  std::string s = id.rfind("fig", 0) == 0 ? id.substr(3) : id;
  if (s.size() == 1 && s[0] >= '1' && s[0] <= '9') return static_cast<Figure>(s[0] - '0');
  throw ConfigError("unknown figure id '" + id + "' (expected fig1..fig9)");
}

const char* figure_columns(Figure f) {
  switch (f) {
    case Figure::fig1: return "s,V1,V2,E_over_4";
    case Figure::fig2: return "curve,x,y";
    case Figure::fig3: return "t,field,D_in,D_exit";
    case Figure::fig4: return "e0,tau_exit,tau_tsub";
    case Figure::fig5: return "t,field,D_rho,D_phi,D";
    case Figure::fig6: return "e0,v_avg";
    case Figure::fig7: return "t,xi_q,xi_c,xi_cc";
    case Figure::fig8: return "e0,v_exit";
    case Figure::fig9: return "field,E,beta1,beta2";
  }
  return "";
}

FigureSource figure_source(Figure f) {
  switch (f) {
    case Figure::fig3:
    case Figure::fig5:
    case Figure::fig7: return FigureSource::bundle;
    case Figure::fig4:
    case Figure::fig6:
    case Figure::fig8: return FigureSource::sweep;
    default: return FigureSource::none;
  }
}

std::string emit_figure(Figure f, const FigureInput& in) {
  Csv csv(figure_columns(f));
  switch (f) {
    case Figure::fig1: {
      const auto sol = barrier_geometry(figure_field(in));
      const double s_max = std::max(20.0, 1.5 * sol.xi_exit);
      for (int k = 1; k <= 800; ++k) {
        const double s = s_max * k / 800.0;
        const auto v = tunneling_potentials(sol.params, s);
        csv << s << v.v1 << v.v2 << sol.params.energy / 4.0;
        csv.end();
      }
      break;
    }
    case Figure::fig2: {
      const auto sol = barrier_geometry(figure_field(in));
      auto parabola_xi = [&](const std::string& name, double xi) {
        for (int k = -100; k <= 100; ++k) {
          const double u = std::sqrt(sol.eta0) * k / 100.0;
          csv << name << 0.5 * (xi - u * u) << std::sqrt(xi) * u;
          csv.end();
        }
      };
      parabola_xi("xi_in", sol.xi_in);
      parabola_xi("xi_exit", sol.xi_exit);
      for (int sign : {1, -1})
        for (int k = 0; k <= 100; ++k) {
          const double xi = sol.xi_in + (sol.xi_exit - sol.xi_in) * k / 100.0;
          csv << std::string(sign > 0 ? "eta0_upper" : "eta0_lower") << 0.5 * (xi - sol.eta0)
              << sign * std::sqrt(xi * sol.eta0);
          csv.end();
        }
      break;
    }
    case Figure::fig3:
    case Figure::fig5: {
      const auto b = load_bundle(require_path(in));
      const auto pulse = b.config.pulse();
      const auto& en = b.traces[b.entry];
      const auto& ex = b.traces[b.exit];
      for (std::size_t k = 0; k < en.size(); ++k) {
        csv << en.times[k] << pulse.field_at(en.times[k]);
        if (f == Figure::fig3)
          csv << en.flux[k] << ex.flux[k];
        else
          csv << en.line_density[k] << en.line_velocity[k] << en.flux[k];
        csv.end();
      }
      break;
    }
    case Figure::fig7: {
      const auto a = analyze_bundle(require_path(in));
      if (a.at("trajectory").is_null()) throw PhysicsFlag("bundle has no quantum trajectory");
      const auto& t = a.at("trajectory").at("table");
      for (std::size_t k = 0; k < t.at("t").size(); ++k) {
        auto val = [&](const char* key) {
          const auto& v = t.at(key)[k];
          return v.is_null() ? NAN : v.get<double>();
        };
        csv << val("t") << val("xi_q") << val("xi_c") << val("xi_cc");
        csv.end();
      }
      break;
    }
    case Figure::fig4: return sweep_figure(in, figure_columns(f), {"tau_exit", "tau_tsub"});
    case Figure::fig6: return sweep_figure(in, figure_columns(f), {"v_avg"});
    case Figure::fig8: return sweep_figure(in, figure_columns(f), {"v_exit"});
    case Figure::fig9: {
      for (int k = 0; k <= 80; ++k) {
        const double field = 0.02 * k;
        const auto p = stark_parameters(field);
        csv << field << p.energy << p.beta1 << p.beta2;
        csv.end();
      }
      break;
    }
  }
  return csv.str();
}

}  // namespace vdet

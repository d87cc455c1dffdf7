#include "vdet/config.hpp"

#include <openssl/evp.h>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "vdet/error.hpp"

namespace vdet {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>> kKeys = {
    {"run", {"id", "output_dir"}},
    {"pulse", {"e0", "gamma", "omega", "t0"}},
    {"grid", {"spacing", "x_min", "x_max", "y_half_width", "softening"}},
    {"propagator", {"dt", "krylov_dim", "t_span_tau", "absorber", "absorber_frac", "absorber_strength", "snapshot_stride"}},
    {"detectors", {"samples", "fan_lines", "fan_far_factor", "density_floor", "geometry_field"}},
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string opt_num(const std::optional<double>& v) { return v ? num(*v) : "auto"; }

template <class T>
T get(const pt::ptree& tree, const std::string& key, T fallback) {
  const auto node = tree.get_child_optional(pt::ptree::path_type(key, '.'));
  if (!node) return fallback;
  try {
    return node->get_value<T>();
  } catch (const pt::ptree_bad_data&) {
    throw ConfigError("bad value for " + key + ": '" + node->data() + "'");
  }
}

std::optional<double> get_auto(const pt::ptree& tree, const std::string& key, std::optional<double> fallback) {
  const auto node = tree.get_child_optional(pt::ptree::path_type(key, '.'));
  if (!node) return fallback;
  if (node->data() == "auto") return std::nullopt;
  return get<double>(tree, key, 0.0);
}

bool get_bool(const pt::ptree& tree, const std::string& key, bool fallback) {
  const auto node = tree.get_child_optional(pt::ptree::path_type(key, '.'));
  if (!node) return fallback;
  const auto& v = node->data();
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("bad boolean for " + key + ": '" + v + "'");
}

}  // namespace

void RunConfig::validate() const {
  auto need = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(what);
  };
  need(!run_id.empty() && run_id.find('/') == std::string::npos, "run.id must be a non-empty name without '/'");
  need(std::isfinite(e0) && e0 >= 0.0, "pulse.e0 must be >= 0");
  need(gamma.has_value() != omega.has_value(), "give exactly one of pulse.gamma and pulse.omega");
  need(!gamma || *gamma > 0.0, "pulse.gamma must be positive");
  need(!omega || *omega > 0.0, "pulse.omega must be positive");
  need(std::isfinite(t0), "pulse.t0 must be finite");
  need(spacing > 0.0 && spacing <= 0.5, "grid.spacing must be in (0, 0.5]");
  need(x_min < 0.0, "grid.x_min must be negative");
  need(!x_max || *x_max > 0.0, "grid.x_max must be positive");
  need(y_half_width > 0.0, "grid.y_half_width must be positive");
  need(dt > 0.0, "propagator.dt must be positive");
  need(krylov_dim >= 4 && krylov_dim <= 64, "propagator.krylov_dim must be in [4, 64]");
  need(t_span_tau > 0.0, "propagator.t_span_tau must be positive");
  need(absorber_frac > 0.0 && absorber_frac < 0.5, "propagator.absorber_frac must be in (0, 0.5)");
  need(absorber_strength >= 0.0, "propagator.absorber_strength must be >= 0");
  need(samples >= 16, "detectors.samples must be >= 16");
  need(fan_lines >= 2, "detectors.fan_lines must be >= 2");
  need(fan_far_factor > 1.0, "detectors.fan_far_factor must exceed 1");
  need(density_floor > 0.0 && density_floor < 1.0, "detectors.density_floor must be in (0, 1)");
  need(geometry_field > 0.0, "detectors.geometry_field must be positive");
}

PulseSpec RunConfig::pulse() const {
  if (omega) return PulseSpec(e0, *omega, t0);
  return PulseSpec(e0, omega_for_keldysh(*gamma, barrier_field()), t0);
}

GridSpec RunConfig::grid(double far_xi) const {
  double hi;
  if (x_max) {
    hi = *x_max;
  } else {
    // inner edge x_hi - f (x_hi - x_min) must clear the far line by a margin
    const double target = 0.5 * far_xi + 2.0;
    hi = (target - absorber_frac * x_min) / (1.0 - absorber_frac);
  }
  return GridSpec::with_spacing(x_min, hi, -y_half_width, y_half_width, spacing);
}

PropagatorConfig RunConfig::propagator() const {
  auto cfg = PropagatorConfig::around_pulse(pulse(), t_span_tau);
  cfg.dt = dt;
  cfg.krylov_dim = krylov_dim;
  cfg.absorber_enabled = absorber;
  cfg.absorber = absorber_config();
  return cfg;
}

std::string RunConfig::canonical() const {
  std::ostringstream s;
  s << "[run]\nid = " << run_id << "\noutput_dir = " << output_dir << "\n\n";
  s << "[pulse]\ne0 = " << num(e0) << "\n";
  if (gamma) s << "gamma = " << num(*gamma) << "\n";
  if (omega) s << "omega = " << num(*omega) << "\n";
  s << "t0 = " << num(t0) << "\n\n";
  s << "[grid]\nspacing = " << num(spacing) << "\nx_min = " << num(x_min) << "\nx_max = " << opt_num(x_max)
    << "\ny_half_width = " << num(y_half_width) << "\nsoftening = " << opt_num(softening) << "\n\n";
  s << "[propagator]\ndt = " << num(dt) << "\nkrylov_dim = " << krylov_dim << "\nt_span_tau = " << num(t_span_tau)
    << "\nabsorber = " << (absorber ? "true" : "false") << "\nabsorber_frac = " << num(absorber_frac)
    << "\nabsorber_strength = " << num(absorber_strength) << "\nsnapshot_stride = " << snapshot_stride << "\n\n";
  s << "[detectors]\nsamples = " << samples << "\nfan_lines = " << fan_lines << "\nfan_far_factor = "
    << num(fan_far_factor) << "\ndensity_floor = " << num(density_floor) << "\ngeometry_field = " << num(geometry_field)
    << "\n";
  return s.str();
}

std::string RunConfig::hash() const { return sha256_hex(canonical()); }

RunConfig parse_config(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  for (const auto& [section, body] : tree) {
    const auto it = kKeys.find(section);
    if (it == kKeys.end()) throw ConfigError("unknown config section [" + section + "]");
    for (const auto& [key, value] : body)
      if (!it->second.count(key)) throw ConfigError("unknown config key " + section + "." + key);
  }

  RunConfig c;
  c.run_id = get<std::string>(tree, "run.id", c.run_id);
  c.output_dir = get<std::string>(tree, "run.output_dir", c.output_dir);
  c.e0 = get<double>(tree, "pulse.e0", c.e0);
  if (tree.get_child_optional("pulse.omega")) {
    c.omega = get<double>(tree, "pulse.omega", 0.0);
    c.gamma.reset();
    if (tree.get_child_optional("pulse.gamma")) throw ConfigError("give exactly one of pulse.gamma and pulse.omega");
  } else {
    c.gamma = get<double>(tree, "pulse.gamma", *c.gamma);
  }
  c.t0 = get<double>(tree, "pulse.t0", c.t0);
  c.spacing = get<double>(tree, "grid.spacing", c.spacing);
  c.x_min = get<double>(tree, "grid.x_min", c.x_min);
  c.x_max = get_auto(tree, "grid.x_max", c.x_max);
  c.y_half_width = get<double>(tree, "grid.y_half_width", c.y_half_width);
  c.softening = get_auto(tree, "grid.softening", c.softening);
  c.dt = get<double>(tree, "propagator.dt", c.dt);
  c.krylov_dim = get<int>(tree, "propagator.krylov_dim", c.krylov_dim);
  c.t_span_tau = get<double>(tree, "propagator.t_span_tau", c.t_span_tau);
  c.absorber = get_bool(tree, "propagator.absorber", c.absorber);
  c.absorber_frac = get<double>(tree, "propagator.absorber_frac", c.absorber_frac);
  c.absorber_strength = get<double>(tree, "propagator.absorber_strength", c.absorber_strength);
  c.snapshot_stride = get<std::size_t>(tree, "propagator.snapshot_stride", c.snapshot_stride);
  c.samples = get<std::size_t>(tree, "detectors.samples", c.samples);
  c.fan_lines = get<std::size_t>(tree, "detectors.fan_lines", c.fan_lines);
  c.fan_far_factor = get<double>(tree, "detectors.fan_far_factor", c.fan_far_factor);
  c.density_floor = get<double>(tree, "detectors.density_floor", c.density_floor);
  c.geometry_field = get<double>(tree, "detectors.geometry_field", c.geometry_field);
  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw NumericalError("SHA-256 failed");
  std::string out;
  char buf[3];
  for (unsigned int k = 0; k < len; ++k) {
    std::snprintf(buf, sizeof buf, "%02x", md[k]);
    out += buf;
  }
  return out;
}

std::filesystem::path output_root(const std::string& fallback) {
  if (const char* env = std::getenv("VDET_OUTPUT_ROOT"); env && *env) return env;
  return fallback;
}

}  // namespace vdet

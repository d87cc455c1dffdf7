#include "vdet/trace_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "vdet/error.hpp"

namespace vdet {

namespace {

double parse_double(std::string_view s, const std::filesystem::path& path) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || ptr != end) throw ConfigError("malformed number '" + std::string(s) + "' in " + path.string());
  return v;
}

}  // namespace

void write_trace_csv(const std::filesystem::path& path, const DetectorTrace& trace, const std::string& config_hash) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  char buf[160];
  std::snprintf(buf, sizeof buf, "# xi=%.17g\n# eta_max=%.17g\n", trace.xi, trace.eta_max);
  out << buf << "# config_hash=" << config_hash << "\n" << "t,D,D_rho,D_phi\n";
  for (std::size_t k = 0; k < trace.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", trace.times[k], trace.flux[k], trace.line_density[k],
                  trace.line_velocity[k]);
    out << buf;
  }
  if (!out) throw ConfigError("write failed for " + path.string());
}

TraceFile read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  TraceFile tf;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      auto key = line.substr(1, eq - 1);
      key.erase(0, key.find_first_not_of(' '));
      const auto value = line.substr(eq + 1);
      if (key == "xi") tf.trace.xi = parse_double(value, path);
      else if (key == "eta_max") tf.trace.eta_max = parse_double(value, path);
      else if (key == "config_hash") tf.config_hash = value;
      continue;
    }
    if (!header) {
      if (line != "t,D,D_rho,D_phi") throw ConfigError("unexpected trace header in " + path.string());
      header = true;
      continue;
    }
    double v[4];
    std::string_view rest(line);
    for (int c = 0; c < 4; ++c) {
      const auto comma = rest.find(',');
      if ((c < 3) == (comma == std::string_view::npos)) throw ConfigError("malformed trace row in " + path.string());
      v[c] = parse_double(rest.substr(0, comma), path);
      if (c < 3) rest.remove_prefix(comma + 1);
    }
    tf.trace.times.push_back(v[0]);
    tf.trace.flux.push_back(v[1]);
    tf.trace.line_density.push_back(v[2]);
    tf.trace.line_velocity.push_back(v[3]);
    tf.trace.masked_fraction.push_back(0.0);
  }
  if (!header) throw ConfigError("no trace data in " + path.string());
  return tf;
}

std::string trace_file_name(std::size_t index, double xi) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "trace_%03zu_xi%.6f.csv", index, xi);
  return buf;
}

}  // namespace vdet

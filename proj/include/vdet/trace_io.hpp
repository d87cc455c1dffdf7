#pragma once

#include <filesystem>
#include <string>

#include "vdet/detectors.hpp"

namespace vdet {

struct TraceFile {
  DetectorTrace trace;
  std::string config_hash;
};

/// CSV with leading "# key=value" lines (xi, eta_max, config_hash) and
/// columns t,D,D_rho,D_phi. Values are written with 17 significant digits.
void write_trace_csv(const std::filesystem::path& path, const DetectorTrace& trace, const std::string& config_hash);
TraceFile read_trace_csv(const std::filesystem::path& path);

/// File name used for the trace of line xi inside a run bundle.
std::string trace_file_name(std::size_t index, double xi);

}  // namespace vdet

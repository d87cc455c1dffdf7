#pragma once

#include <filesystem>

#include "vdet/wave_field.hpp"

namespace vdet {

/// CSV snapshot with header `x,y,re,im`, one node per row, x outermost.
void write_field_csv(const WaveField& field, const std::filesystem::path& path);

/// Binary checkpoint, little-endian:
///   char[8]  magic "VDETWF01"
///   uint64   nx, ny
///   double   x_min, x_max, y_min, y_max, time
///   double   (re, im) * nx * ny, storage order i * ny + j
void write_checkpoint(const WaveField& field, double time, const std::filesystem::path& path);

struct Checkpoint {
  WaveField field;
  double time;
};
Checkpoint read_checkpoint(const std::filesystem::path& path);

}  // namespace vdet

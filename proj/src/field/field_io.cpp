#include "vdet/field_io.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>

#include "vdet/error.hpp"

namespace vdet {

static_assert(std::endian::native == std::endian::little, "checkpoint layout assumes a little-endian host");

namespace {

constexpr std::array<char, 8> kMagic{'V', 'D', 'E', 'T', 'W', 'F', '0', '1'};

template <class T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw ConfigError("truncated checkpoint");
  return v;
}

}  // namespace

void write_field_csv(const WaveField& field, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open " + path.string());
  out << std::setprecision(17) << "x,y,re,im\n";
  const auto& g = field.grid();
  for (std::size_t i = 0; i < g.nx(); ++i)
    for (std::size_t j = 0; j < g.ny(); ++j) {
      const auto z = field(i, j);
      out << g.x(i) << ',' << g.y(j) << ',' << z.real() << ',' << z.imag() << '\n';
    }
}

void write_checkpoint(const WaveField& field, double time, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open " + path.string());
  const auto& g = field.grid();
  out.write(kMagic.data(), kMagic.size());
  put<std::uint64_t>(out, g.nx());
  put<std::uint64_t>(out, g.ny());
  for (double v : {g.x_min(), g.x_max(), g.y_min(), g.y_max(), time}) put(out, v);
  for (const auto& z : field.data()) {
    put(out, z.real());
    put(out, z.imag());
  }
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw ConfigError(path.string() + " is not a field checkpoint");
  const auto nx = get<std::uint64_t>(in);
  const auto ny = get<std::uint64_t>(in);
  const double x0 = get<double>(in), x1 = get<double>(in), y0 = get<double>(in), y1 = get<double>(in);
  const double t = get<double>(in);
  GridSpec grid(x0, x1, nx, y0, y1, ny);
  std::vector<complex> amps(grid.size());
  for (auto& z : amps) {
    const double re = get<double>(in);
    const double im = get<double>(in);
    z = {re, im};
  }
  return {WaveField(grid, std::move(amps)), t};
}

}  // namespace vdet

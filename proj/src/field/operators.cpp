#include "vdet/operators.hpp"

#include <algorithm>
#include <cmath>

#include "vdet/error.hpp"

namespace vdet {

namespace {

constexpr double kD2Far = -1.0 / 12.0;
constexpr double kD2Near = 4.0 / 3.0;
constexpr double kD2Centre = -5.0 / 2.0;

// Imaginary part of conj(a) * b without going through complex multiply.
inline double im_conj_mul(complex a, complex b) { return a.real() * b.imag() - a.imag() * b.real(); }

}  // namespace

void laplacian(const GridSpec& grid, std::span<const complex> in, std::span<complex> out) {
  const std::size_t nx = grid.nx();
  const std::size_t ny = grid.ny();
  if (nx < 5 || ny < 5) throw ConfigError("grid smaller than the five-point stencil");
  const double cx = 1.0 / (grid.dx() * grid.dx());
  const double cy = 1.0 / (grid.dy() * grid.dy());
  const complex* p = in.data();
  complex* q = out.data();

  for (std::size_t i = 0; i < nx; ++i) {
    const complex* row = p + i * ny;
    const complex* xm1 = i >= 1 ? row - ny : nullptr;
    const complex* xm2 = i >= 2 ? row - 2 * ny : nullptr;
    const complex* xp1 = i + 1 < nx ? row + ny : nullptr;
    const complex* xp2 = i + 2 < nx ? row + 2 * ny : nullptr;
    complex* dst = q + i * ny;

    // y direction, with explicit edge handling on the two outer nodes
    auto ycomp = [&](std::size_t j) {
      complex s = kD2Centre * row[j];
      if (j >= 1) s += kD2Near * row[j - 1];
      if (j >= 2) s += kD2Far * row[j - 2];
      if (j + 1 < ny) s += kD2Near * row[j + 1];
      if (j + 2 < ny) s += kD2Far * row[j + 2];
      return s;
    };
    for (std::size_t j = 0; j < 2; ++j) dst[j] = cy * ycomp(j);
    for (std::size_t j = 2; j + 2 < ny; ++j) {
      const double re = kD2Centre * row[j].real() + kD2Near * (row[j - 1].real() + row[j + 1].real()) +
                        kD2Far * (row[j - 2].real() + row[j + 2].real());
      const double im = kD2Centre * row[j].imag() + kD2Near * (row[j - 1].imag() + row[j + 1].imag()) +
                        kD2Far * (row[j - 2].imag() + row[j + 2].imag());
      dst[j] = complex(cy * re, cy * im);
    }
    for (std::size_t j = ny - 2; j < ny; ++j) dst[j] = cy * ycomp(j);

    // x direction
    for (std::size_t j = 0; j < ny; ++j) {
      double re = kD2Centre * row[j].real();
      double im = kD2Centre * row[j].imag();
      if (xm1) { re += kD2Near * xm1[j].real(); im += kD2Near * xm1[j].imag(); }
      if (xp1) { re += kD2Near * xp1[j].real(); im += kD2Near * xp1[j].imag(); }
      if (xm2) { re += kD2Far * xm2[j].real(); im += kD2Far * xm2[j].imag(); }
      if (xp2) { re += kD2Far * xp2[j].real(); im += kD2Far * xp2[j].imag(); }
      dst[j] += complex(cx * re, cx * im);
    }
  }
}

WaveField laplacian(const WaveField& field) {
  WaveField out(field.grid());
  laplacian(field.grid(), field.data(), out.data());
  return out;
}

std::vector<double> density(const WaveField& field) {
  std::vector<double> rho(field.size());
  auto d = field.data();
  for (std::size_t k = 0; k < rho.size(); ++k) rho[k] = std::norm(d[k]);
  return rho;
}

complex gradient_x_at(const WaveField& field, std::size_t i, std::size_t j) {
  const auto& g = field.grid();
  auto at = [&](std::ptrdiff_t ii) {
    return (ii < 0 || ii >= static_cast<std::ptrdiff_t>(g.nx())) ? complex{} : field(static_cast<std::size_t>(ii), j);
  };
  const auto ii = static_cast<std::ptrdiff_t>(i);
  return (at(ii - 2) - 8.0 * at(ii - 1) + 8.0 * at(ii + 1) - at(ii + 2)) / (12.0 * g.dx());
}

complex gradient_y_at(const WaveField& field, std::size_t i, std::size_t j) {
  const auto& g = field.grid();
  auto at = [&](std::ptrdiff_t jj) {
    return (jj < 0 || jj >= static_cast<std::ptrdiff_t>(g.ny())) ? complex{} : field(i, static_cast<std::size_t>(jj));
  };
  const auto jj = static_cast<std::ptrdiff_t>(j);
  return (at(jj - 2) - 8.0 * at(jj - 1) + 8.0 * at(jj + 1) - at(jj + 2)) / (12.0 * g.dy());
}

VectorFieldSample current_at(const WaveField& field, std::size_t i, std::size_t j) {
  const complex psi = field(i, j);
  return {im_conj_mul(psi, gradient_x_at(field, i, j)), im_conj_mul(psi, gradient_y_at(field, i, j))};
}

VectorField current(const WaveField& field) {
  const auto& g = field.grid();
  VectorField out{std::vector<double>(g.size()), std::vector<double>(g.size()), std::vector<bool>(g.size(), true)};
  for (std::size_t i = 0; i < g.nx(); ++i)
    for (std::size_t j = 0; j < g.ny(); ++j) {
      const auto s = current_at(field, i, j);
      out.x[g.index(i, j)] = s.jx;
      out.y[g.index(i, j)] = s.jy;
    }
  return out;
}

VectorField phase_gradient(const WaveField& field, double relative_floor) {
  const auto& g = field.grid();
  const auto rho = density(field);
  const double peak = rho.empty() ? 0.0 : *std::max_element(rho.begin(), rho.end());
  const double floor = relative_floor * peak;
  VectorField out{std::vector<double>(g.size(), 0.0), std::vector<double>(g.size(), 0.0),
                  std::vector<bool>(g.size(), false)};
  if (!(peak > 0.0)) return out;
  for (std::size_t i = 0; i < g.nx(); ++i)
    for (std::size_t j = 0; j < g.ny(); ++j) {
      const std::size_t k = g.index(i, j);
      if (rho[k] < floor || rho[k] <= 0.0) continue;
      const auto s = current_at(field, i, j);
      out.x[k] = s.jx / rho[k];
      out.y[k] = s.jy / rho[k];
      out.valid[k] = true;
    }
  return out;
}

double integrate(const GridSpec& grid, std::span<const double> values) {
  // midpoint rule: every node stands for its cell; fixed summation order
  double total = 0.0;
  for (double v : values) total += v;
  return total * grid.cell_area();
}

double norm(const WaveField& field) { return squared_norm(field.data()) * field.grid().cell_area(); }

complex inner_product(std::span<const complex> a, std::span<const complex> b) {
  double re = 0.0, im = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    re += a[k].real() * b[k].real() + a[k].imag() * b[k].imag();
    im += a[k].real() * b[k].imag() - a[k].imag() * b[k].real();
  }
  return {re, im};
}

double squared_norm(std::span<const complex> a) {
  double s = 0.0;
  for (const auto& z : a) s += z.real() * z.real() + z.imag() * z.imag();
  return s;
}

complex inner_product(const WaveField& a, const WaveField& b) {
  if (!(a.grid() == b.grid())) throw ConfigError("grid mismatch");
  return inner_product(a.data(), b.data()) * a.grid().cell_area();
}

}  // namespace vdet

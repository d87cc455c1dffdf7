#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "vdet/propagate.hpp"
#include "vdet/wave_field.hpp"

namespace vdet {

/// Quadrature node on a detector parabola xi = const. Nodes are Gauss-Legendre
/// in u = sqrt(eta), which removes the 1/sqrt(eta) endpoint behaviour of the
/// line element. Positions refer to the upper half-plane; the lower mirror is (x, -y).
struct LineSample {
  double eta = 0.0;
  double x = 0.0;
  double y = 0.0;
  double tx = 0.0, ty = 0.0;  ///< tangent (dx/deta, dy/deta) in the upper half
  double weight = 0.0;        ///< Gauss-Legendre weight in u
  double nx = 0.0, ny = 0.0;  ///< upper-half normal toward increasing xi times deta/du
  double length = 0.0;        ///< deta/du = 2u
};

struct DetectorLine {
  double xi = 0.0;
  double eta_max = 0.0;
  std::vector<LineSample> samples;
};

/// Line xi = const for eta in (0, eta_max] with n Gauss-Legendre nodes.
DetectorLine make_line(double xi, double eta_max, std::size_t n = 64);

/// Gauss-Legendre nodes and weights on [a, b].
void gauss_legendre(std::size_t n, double a, double b, std::vector<double>& nodes, std::vector<double>& weights);

struct LineReading {
  double flux = 0.0;             ///< D_xi: probability per unit time crossing toward larger xi
  double density = 0.0;          ///< D^rho_xi
  double velocity = 0.0;         ///< D^grad(phi)_xi over unmasked samples
  double masked_fraction = 0.0;  ///< share of samples below the density floor
};

/// Evaluates all detector integrals for a fixed set of lines on a fixed grid.
/// j and rho are computed at the grid nodes surrounding each sample and
/// interpolated bilinearly; both half-planes are summed. Each line is
/// re-sampled so that the quadrature breaks at every crossing of a grid row or
/// column, which integrates the interpolant exactly; a line of n samples keeps
/// at least n quadrature nodes. lines() returns the re-sampled lines.
class DetectorBank {
public:
  DetectorBank(const GridSpec& grid, std::vector<DetectorLine> lines, double relative_floor = 1e-12);

  const std::vector<DetectorLine>& lines() const { return lines_; }
  const GridSpec& grid() const { return grid_; }

  std::vector<LineReading> read(const WaveField& field) const;

  /// Largest |y| and smallest/largest x touched by any sample.
  std::array<double, 3> extent() const;

private:
  struct Stencil {
    std::array<std::size_t, 4> slot;
    std::array<double, 4> weight;
  };

  GridSpec grid_;
  std::vector<DetectorLine> lines_;
  double relative_floor_;
  std::vector<std::size_t> nodes_;                   // grid index per slot
  std::vector<std::vector<std::array<Stencil, 2>>> stencils_;  // [line][sample][half]
};

double flux(const DetectorLine& line, const WaveField& field);
double line_density(const DetectorLine& line, const WaveField& field);

struct LineVelocity {
  double value = 0.0;
  double masked_fraction = 0.0;
};
/// Throws NumericalError when more than half of the samples are masked.
LineVelocity line_velocity(const DetectorLine& line, const WaveField& field, double relative_floor = 1e-12);

struct DetectorTrace {
  double xi = 0.0;
  double eta_max = 0.0;
  std::vector<double> times;
  std::vector<double> flux;
  std::vector<double> line_density;
  std::vector<double> line_velocity;
  std::vector<double> masked_fraction;

  std::size_t size() const { return times.size(); }
};

/// Accumulates one DetectorTrace per line from propagation observer calls.
class TraceRecorder {
public:
  TraceRecorder(const GridSpec& grid, std::vector<DetectorLine> lines, double relative_floor = 1e-12);

  ObserverHook hook(std::size_t stride = 1);
  const std::vector<DetectorTrace>& traces() const { return traces_; }
  std::vector<DetectorTrace> take() { return std::move(traces_); }
  const DetectorBank& bank() const { return bank_; }

  void observe(double t, const WaveField& field);

private:
  DetectorBank bank_;
  std::vector<DetectorTrace> traces_;
};

/// Log-spaced xi values in [xi_lo, xi_hi] merged with the `extra` values, sorted, deduplicated.
std::vector<double> detector_fan(double xi_lo, double xi_hi, std::size_t count, std::span<const double> extra = {});

}  // namespace vdet

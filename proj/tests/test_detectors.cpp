#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "vdet/detectors.hpp"
#include "vdet/error.hpp"
#include "vdet/ground_state.hpp"
#include "vdet/operators.hpp"
#include "vdet/parabolic.hpp"
#include "vdet/stark.hpp"
#include "vdet/trace_io.hpp"

using namespace vdet;

namespace {

// sqrt(a + b x + c y) exp(i (kx x + ky y)): rho is linear and j = rho k.
WaveField ramp_wave(const GridSpec& g, double a, double b, double c, double kx, double ky) {
  return WaveField::sample(g, [=](double x, double y) {
    return std::sqrt(a + b * x + c * y) * std::exp(complex(0.0, kx * x + ky * y));
  });
}

// Effective wavenumber seen by the five-point first-derivative stencil.
double stencil_k(double k, double h) { return (8.0 * std::sin(k * h) - std::sin(2.0 * k * h)) / (6.0 * h); }

WaveField mirrored(const WaveField& f) {
  WaveField m(f.grid());
  const auto ny = f.grid().ny();
  for (std::size_t i = 0; i < f.grid().nx(); ++i)
    for (std::size_t j = 0; j < ny; ++j) m(i, j) = f(i, ny - 1 - j);
  return m;
}

}  // namespace

TEST_CASE("detector line geometry") {
  const auto line = make_line(4.0, 0.6, 64);
  REQUIRE(line.samples.size() == 64);
  const auto& first = line.samples.front();
  const auto& last = line.samples.back();
  CHECK(first.x == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(first.y < 0.05);
  CHECK(last.x == doctest::Approx(0.5 * (4.0 - 0.6)).epsilon(1e-3));
  CHECK(last.y == doctest::Approx(std::sqrt(4.0 * 0.6)).epsilon(1e-3));
  double sum = 0.0;
  for (const auto& s : line.samples) {
    const auto p = to_parabolic(s.x, s.y);
    CHECK(std::abs(p.xi - 4.0) < 1e-12);
    CHECK(std::abs(p.eta - s.eta) < 1e-12);
    CHECK(s.eta > 0.0);
    CHECK(s.eta < 0.6);
    CHECK(s.tx == -0.5);
    CHECK(s.ty == doctest::Approx(0.5 * std::sqrt(4.0 / s.eta)).epsilon(1e-14));
    CHECK(s.nx * s.tx + s.ny * s.ty == doctest::Approx(0.0).scale(1.0));
    sum += s.weight;
  }
  CHECK(sum == doctest::Approx(std::sqrt(0.6)).epsilon(1e-14));
  CHECK_THROWS_AS(make_line(0.0, 0.6), ConfigError);
  CHECK_THROWS_AS(make_line(1.0, -0.6), ConfigError);
  CHECK_THROWS_AS(make_line(1.0, 0.6, 8), ConfigError);
}

TEST_CASE("Gauss-Legendre rule") {
  std::vector<double> x, w;
  gauss_legendre(5, -1.0, 2.0, x, w);
  double m0 = 0.0, m9 = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    m0 += w[k];
    m9 += w[k] * std::pow(x[k], 9);
  }
  CHECK(m0 == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(m9 == doctest::Approx((std::pow(2.0, 10) - 1.0) / 10.0).epsilon(1e-13));
}

TEST_CASE("real fields carry no flux or velocity") {
  const auto g = GridSpec::with_spacing(-8.0, 8.0, -8.0, 8.0, 0.15);
  const auto psi = analytic_ground_state(g);
  const auto b = barrier_geometry(1.1);
  const auto line = make_line(b.xi_in, b.eta0);
  CHECK(std::abs(flux(line, psi)) < 1e-12);
  CHECK(std::abs(line_velocity(line, psi).value) < 1e-12);
  CHECK(line_density(line, psi) > 0.0);
}

TEST_CASE("refining the quadrature leaves the readings unchanged") {
  const auto g = GridSpec::with_spacing(-8.0, 8.0, -8.0, 8.0, 0.15);
  const auto psi = WaveField::sample(g, [](double x, double y) {
    return std::exp(complex(-2.0 * std::hypot(x, y), 0.7 * x + 0.2 * y));
  });
  for (double xi : {1.0, 4.0}) {
    const auto a = DetectorBank(g, {make_line(xi, 0.6, 64)}).read(psi)[0];
    const auto b = DetectorBank(g, {make_line(xi, 0.6, 128)}).read(psi)[0];
    CHECK(std::abs(a.flux - b.flux) <= 1e-10 * std::abs(a.flux));
    CHECK(std::abs(a.density - b.density) <= 1e-10 * a.density);
    CHECK(std::abs(a.velocity - b.velocity) <= 1e-10 * std::abs(a.velocity));
  }
  // ground state flux under refinement, as a plain difference
  const auto gs = analytic_ground_state(g);
  CHECK(std::abs(flux(make_line(2.0, 0.5, 64), gs) - flux(make_line(2.0, 0.5, 128), gs)) < 1e-10);
}

TEST_CASE("mirror symmetry of the two half-line integrals") {
  const auto g = GridSpec::with_spacing(-6.0, 6.0, -6.0, 6.0, 0.1);
  const auto psi = WaveField::sample(g, [](double x, double y) {
    return std::exp(complex(-0.3 * ((x - 1.0) * (x - 1.0) + (y - 0.4) * (y - 0.4)), 0.9 * x + 0.6 * y));
  });
  const auto line = make_line(3.0, 0.8);
  CHECK(flux(line, psi) == doctest::Approx(flux(line, mirrored(psi))).epsilon(1e-10));
  CHECK(line_density(line, psi) == doctest::Approx(line_density(line, mirrored(psi))).epsilon(1e-10));
}

TEST_CASE("flux of a plane-wave packet against a dense line integral") {
  const double h = 0.025, xi = 4.0, eta0 = 1.0;
  const double a = 10.0, b = 0.3, c = 0.2, kx = 1.0, ky = 0.5;
  const auto g = GridSpec::with_spacing(0.0, 3.0, -3.0, 3.0, h);
  const auto psi = ramp_wave(g, a, b, c, kx, ky);
  const double d = flux(make_line(xi, eta0), psi);

  // parametrise the parabola by y: x = xi/2 - y^2/(2 xi), n dS = (1, y/xi) dy
  const double ymax = std::sqrt(xi * eta0);
  const int n = 20000;
  double oracle = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double y = -ymax + 2.0 * ymax * k / n;
    const double x = 0.5 * xi - y * y / (2.0 * xi);
    const double rho = a + b * x + c * y;
    const double w = (k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    oracle += w * rho * (kx + ky * y / xi);
  }
  oracle *= 2.0 * ymax / n / 3.0;
  CHECK(std::abs(d - oracle) <= 1e-6 * std::abs(oracle));
}

TEST_CASE("flux equals density times a constant phase gradient") {
  const double h = 0.1, xi = 3.0, eta0 = 0.8, a = 4.0, c = 0.3, k = 0.9;
  const auto g = GridSpec::with_spacing(-4.0, 4.0, -4.0, 4.0, h);
  const auto psi = ramp_wave(g, a, 0.0, c, k, 0.0);
  const auto line = make_line(xi, eta0);
  const double keff = stencil_k(k, h);
  const auto v = line_velocity(line, psi);
  CHECK(v.masked_fraction == 0.0);
  // grad(phi) = (keff, 0) everywhere, so D_phi = 2 keff sqrt(xi) sqrt(eta0)
  CHECK(v.value == doctest::Approx(2.0 * keff * std::sqrt(xi * eta0)).epsilon(1e-12));
  // rho + rho(mirror) = 2a on the line, so j.n integrates to a times D_phi
  CHECK(flux(line, psi) == doctest::Approx(a * v.value).epsilon(1e-8));
}

TEST_CASE("line velocity fails when the density floor masks the line") {
  const auto g = GridSpec::with_spacing(-8.0, 8.0, -8.0, 8.0, 0.15);
  const auto psi = WaveField::sample(g, [](double x, double y) {
    return std::exp(complex(-4.0 * ((x + 5.0) * (x + 5.0) + y * y), 0.0));
  });
  CHECK_THROWS_AS(line_velocity(make_line(4.0, 0.6), psi), NumericalError);
  CHECK(DetectorBank(g, {make_line(4.0, 0.6)}).read(psi)[0].masked_fraction == 1.0);
}

TEST_CASE("lines outside the grid are rejected") {
  const auto g = GridSpec::with_spacing(-2.0, 2.0, -2.0, 2.0, 0.2);
  CHECK_THROWS_AS(DetectorBank(g, {make_line(6.0, 0.5)}), ConfigError);
  const auto ext = DetectorBank(g, {make_line(2.0, 0.5)}).extent();
  CHECK(ext[1] <= 1.0);
  CHECK(ext[0] >= 0.75);
  CHECK(ext[2] <= 1.0);
}

TEST_CASE("recorder appends one sample per observed step") {
  const auto g = GridSpec::with_spacing(-6.0, 6.0, -6.0, 6.0, 0.2);
  const auto gs = relax_ground_state(g, {0.05});
  const Hamiltonian h(g, {0.05});
  TraceRecorder rec(g, {make_line(1.0, 0.5), make_line(3.0, 0.5)});
  PropagatorConfig cfg;
  cfg.dt = 0.05;
  cfg.t_end = 2.0;
  cfg.absorber_enabled = false;
  std::vector<ObserverHook> hooks{rec.hook()};
  PropagationReport rep;
  propagate(gs.field, h, PulseSpec(1e-14, 1.0, 0.0), cfg, hooks, &rep);
  REQUIRE(rec.traces().size() == 2);
  for (const auto& t : rec.traces()) {
    CHECK(t.size() == rep.steps);
    CHECK(t.flux.size() == rep.steps);
    CHECK(t.line_density.size() == rep.steps);
    CHECK(t.line_velocity.size() == rep.steps);
    CHECK(t.times.back() == doctest::Approx(cfg.t_end));
    for (double f : t.flux) CHECK(std::abs(f) < 1e-10);
  }
}

TEST_CASE("detector fan") {
  const double exit = 3.7;
  const std::vector<double> extra{exit, 1.0};
  const auto fan = detector_fan(1.0, 37.0, 40, extra);
  CHECK(fan.size() == 41);
  CHECK(fan.front() == 1.0);
  CHECK(fan.back() == 37.0);
  CHECK(std::is_sorted(fan.begin(), fan.end()));
  CHECK(std::count(fan.begin(), fan.end(), exit) == 1);
  CHECK(fan[1] / fan[0] == doctest::Approx(std::pow(37.0, 1.0 / 39.0)).epsilon(1e-12));
  CHECK_THROWS_AS(detector_fan(2.0, 1.0, 10), ConfigError);
}

TEST_CASE("trace CSV round trip") {
  DetectorTrace t{2.5, 0.6, {0.0, 0.1, 0.2}, {1e-3, 0.5, -1.0 / 3.0}, {1.0, 2.0, 3.0}, {0.0, -0.1, 0.2}, {0, 0, 0}};
  const auto dir = std::filesystem::temp_directory_path() / "vdet_trace_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / trace_file_name(3, 2.5);
  CHECK(path.filename() == "trace_003_xi2.500000.csv");
  write_trace_csv(path, t, "abc123");
  const auto back = read_trace_csv(path);
  CHECK(back.config_hash == "abc123");
  CHECK(back.trace.xi == 2.5);
  CHECK(back.trace.eta_max == 0.6);
  CHECK(back.trace.times == t.times);
  CHECK(back.trace.flux == t.flux);
  CHECK(back.trace.line_density == t.line_density);
  CHECK(back.trace.line_velocity == t.line_velocity);
  std::filesystem::remove_all(dir);
}

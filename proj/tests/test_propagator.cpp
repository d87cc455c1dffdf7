#include <doctest.h>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>
#include <random>

#include "vdet/absorber.hpp"
#include "vdet/error.hpp"
#include "vdet/ground_state.hpp"
#include "vdet/krylov.hpp"
#include "vdet/operators.hpp"
#include "vdet/propagate.hpp"

using namespace vdet;

namespace {

WaveField random_field(const GridSpec& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  WaveField f(g);
  for (auto& z : f.data()) z = complex(n(rng), n(rng));
  f.normalize();
  return f;
}

WaveField gaussian_packet(const GridSpec& g, double x0, double k) {
  auto f = WaveField::sample(g, [&](double x, double y) {
    return std::exp(complex(-((x - x0) * (x - x0) + y * y) / 2.0, k * x));
  });
  f.normalize();
  return f;
}

double distance(const WaveField& a, const WaveField& b) {
  auto d = a;
  d -= b;
  return std::sqrt(norm(d) / norm(b));
}

}  // namespace

TEST_CASE("Lanczos step matches the dense exponential") {
  const GridSpec g(-4.0, 4.0, 16, -4.0, 4.0, 16);
  const Hamiltonian h(g, {0.3});
  const double field = 0.4, dt = 0.01;
  const std::size_t n = g.size();
  Eigen::MatrixXcd dense(n, n);
  std::vector<complex> e(n), out(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::fill(e.begin(), e.end(), complex(0.0));
    e[c] = 1.0;
    h.apply(e, out, field);
    for (std::size_t r = 0; r < n; ++r) dense(r, c) = out[r];
  }
  const Eigen::MatrixXcd u = (complex(0.0, -dt) * dense).exp();
  for (unsigned seed : {1u, 2u, 3u}) {
    auto psi = random_field(g, seed);
    Eigen::VectorXcd v(n);
    for (std::size_t k = 0; k < n; ++k) v(k) = psi.data()[k];
    const Eigen::VectorXcd expect = u * v;
    LanczosPropagator prop(n, 20);
    prop.step(h, field, psi.data(), dt);
    double err = 0.0;
    for (std::size_t k = 0; k < n; ++k) err = std::max(err, std::abs(psi.data()[k] - expect(k)));
    CHECK(err < 1e-9);
  }
}

TEST_CASE("krylov_step samples the field at the step midpoint") {
  const GridSpec g(-4.0, 4.0, 16, -4.0, 4.0, 16);
  const Hamiltonian h(g, {0.3});
  const PulseSpec pulse(1.0, 0.5, 0.0);
  const auto psi = random_field(g, 9);
  const auto a = krylov_step(psi, h, pulse, 0.2, 0.1, 16);
  auto b = psi;
  LanczosPropagator(g.size(), 16).step(h, pulse.field_at(0.25), b.data(), 0.1);
  CHECK(distance(a, b) == 0.0);
  CHECK_THROWS_AS(krylov_step(psi, h, pulse, 0.0, 0.1, 3), ConfigError);
  CHECK_THROWS_AS(krylov_step(psi, h, pulse, 0.0, 0.1, 65), ConfigError);
}

TEST_CASE("single steps and 1000 steps are unitary") {
  const auto g = GridSpec::with_spacing(-6.0, 6.0, -6.0, 6.0, 0.2);
  const Hamiltonian h(g, {0.1});
  auto psi = gaussian_packet(g, -0.5, 0.8);
  LanczosPropagator prop(g.size(), 16);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const double before = norm(psi);
    prop.step(h, 0.3, psi.data(), 0.02);
    worst = std::max(worst, std::abs(norm(psi) - before));
  }
  CHECK(worst < 1e-12);
  CHECK(std::abs(1.0 - norm(psi)) < 1e-8);
}

TEST_CASE("time reversal recovers the state") {
  const auto g = GridSpec::with_spacing(-6.0, 6.0, -6.0, 6.0, 0.2);
  const Hamiltonian h(g, {0.1});
  const PulseSpec pulse(1.0, 0.3, 0.0);
  const auto psi = gaussian_packet(g, 0.5, -0.4);
  const auto fwd = krylov_step(psi, h, pulse, 0.1, 0.05, 16);
  const auto back = krylov_step(fwd, h, pulse, 0.15, -0.05, 16);
  CHECK(distance(back, psi) < 1e-9);
}

TEST_CASE("ground state relaxation") {
  const double a2 = calibrate_softening(0.15);
  const auto g = GridSpec::with_spacing(-8.0, 8.0, -8.0, 8.0, 0.15);
  const auto gs = relax_ground_state(g, {a2});
  CHECK(std::abs(gs.energy + 2.0) < 0.02);
  CHECK(std::abs(norm(gs.field) - 1.0) < 1e-12);
  CHECK(overlap(gs.field, analytic_ground_state(g)) >= 0.999);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  WaveField seed(g);
  for (auto& z : seed.data()) z = u(rng);
  const auto other = relax_ground_state(g, {a2}, {}, seed);
  CHECK(overlap(gs.field, other.field) >= 1.0 - 1e-8);

  SUBCASE("an eigenstate only acquires a phase") {
    const Hamiltonian h(g, {a2});
    auto psi = gs.field;
    LanczosPropagator(g.size(), 16).step(h, 0.0, psi.data(), 0.02);
    const complex ov = inner_product(gs.field, psi);
    CHECK(std::abs(std::abs(ov) - 1.0) < 1e-10);
    CHECK(std::arg(ov) == doctest::Approx(-gs.energy * 0.02).epsilon(1e-6));
  }
}

TEST_CASE("relaxation reports non-convergence") {
  const auto g = GridSpec::with_spacing(-4.0, 4.0, -4.0, 4.0, 0.25);
  RelaxOptions opts;
  opts.max_iterations = 2;
  opts.dtau = 1e-3;
  CHECK_THROWS_AS(relax_ground_state(g, {0.1}, opts), NumericalError);
}

TEST_CASE("absorber layer and bookkeeping") {
  const auto g = GridSpec::with_spacing(-10.0, 10.0, -10.0, 10.0, 0.25);
  Absorber ab(g, {0.1, 8.0});
  CHECK(ab.inner_x_min() == doctest::Approx(-8.0));
  CHECK(ab.inner_x_max() == doctest::Approx(8.0));
  CHECK(ab.in_layer(9.0, 0.0));
  CHECK(ab.in_layer(0.0, -9.5));
  CHECK_FALSE(ab.in_layer(7.9, 7.9));

  // packet moving toward +x is eaten at the x_max side only
  auto psi = gaussian_packet(g, 5.0, 3.0);
  const Hamiltonian h(g, {0.1});
  const PulseSpec pulse(1e-12, 1.0, 0.0);
  PropagatorConfig cfg;
  cfg.dt = 0.02;
  cfg.t_start = 0.0;
  cfg.t_end = 4.0;
  PropagationReport rep;
  const auto out = propagate(psi, h, pulse, cfg, {}, &rep);
  CHECK(rep.steps == 200);
  CHECK(rep.absorbed > 0.5);
  CHECK(std::abs(1.0 - (rep.final_norm + rep.absorbed)) < 1e-10);
  CHECK(rep.absorbed_by_side[static_cast<int>(BoxSide::x_max)] > 0.99 * rep.absorbed);
  CHECK(rep.final_norm == doctest::Approx(norm(out)).epsilon(1e-15));
}

TEST_CASE("driven run closes the probability balance") {
  const double a2 = -0.004864;
  const auto g = GridSpec::with_spacing(-8.0, 16.0, -8.0, 8.0, 0.15);
  const auto gs = relax_ground_state(g, {a2});
  const Hamiltonian h(g, {a2});
  const PulseSpec pulse(1.6, omega_for_keldysh(0.25, 1.6), 0.0);
  auto cfg = PropagatorConfig::around_pulse(pulse, 2.0);
  cfg.dt = 0.02;
  PropagationReport rep;
  propagate(gs.field, h, pulse, cfg, {}, &rep);
  CHECK(rep.absorbed > 0.01);
  CHECK(std::abs(1.0 - (rep.final_norm + rep.absorbed)) <= 1e-9);
  CHECK(rep.max_error_estimate < 1e-8);
}

TEST_CASE("a vanishing pulse leaves the ground state in place") {
  const double a2 = -0.004864;
  const auto g = GridSpec::with_spacing(-8.0, 8.0, -8.0, 8.0, 0.15);
  const auto gs = relax_ground_state(g, {a2});
  const Hamiltonian h(g, {a2});
  const PulseSpec pulse(1e-12, 0.3, 0.0);
  auto cfg = PropagatorConfig::around_pulse(pulse, 0.5);
  cfg.dt = 0.05;
  std::size_t calls = 0;
  std::vector<ObserverHook> hooks{{10, [&](double, const WaveField&) { ++calls; }}};
  PropagationReport rep;
  const auto out = propagate(gs.field, h, pulse, cfg, hooks, &rep);
  CHECK(overlap(out, gs.field) >= 1.0 - 1e-8);
  CHECK(calls == rep.steps / 10);
  CHECK(rep.warnings.empty());
}

TEST_CASE("propagator configuration errors") {
  PropagatorConfig cfg;
  cfg.dt = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.dt = 0.1;
  cfg.t_end = cfg.t_start;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.t_end = 1.0;
  cfg.krylov_dim = 70;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.krylov_dim = 16;
  CHECK(cfg.steps() == 10);

  const auto g = GridSpec::with_spacing(-3.0, 3.0, -3.0, 3.0, 0.25);
  const auto psi = gaussian_packet(g, 0.0, 0.0);
  const Hamiltonian h(g, {0.1});
  std::vector<ObserverHook> bad{{0, [](double, const WaveField&) {}}};
  CHECK_THROWS_AS(propagate(psi, h, PulseSpec(1.0, 1.0, 0.0), cfg, bad), ConfigError);
}

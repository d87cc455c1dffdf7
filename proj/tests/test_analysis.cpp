#include <doctest.h>

#include <cmath>
#include <functional>

#include "vdet/error.hpp"
#include "vdet/interpolation.hpp"
#include "vdet/peaks.hpp"
#include "vdet/stark.hpp"
#include "vdet/trajectory.hpp"

using namespace vdet;

namespace {

std::vector<double> grid_times(double lo, double hi, double dt) {
  std::vector<double> t;
  const auto n = static_cast<std::size_t>(std::llround((hi - lo) / dt));
  for (std::size_t k = 0; k <= n; ++k) t.push_back(lo + static_cast<double>(k) * dt);
  return t;
}

DetectorTrace synthetic(double xi, const std::vector<double>& times, const std::function<double(double)>& f) {
  DetectorTrace tr;
  tr.xi = xi;
  tr.eta_max = 0.5;
  tr.times = times;
  for (double t : times) {
    tr.flux.push_back(f(t));
    tr.line_density.push_back(0.0);
    tr.line_velocity.push_back(0.0);
    tr.masked_fraction.push_back(0.0);
  }
  return tr;
}

// Hump that is exactly parabolic near its top, so three-point refinement is exact.
std::function<double(double)> cap(double center, double width) {
  return [=](double t) { return std::max(0.0, 1.0 - std::pow((t - center) / width, 2)); };
}

// Field-only motion xi'' = 2 E(t) in closed form.
double erf_oracle(const PulseSpec& p, double xi0, double v0, double ts, double t) {
  const double a = p.omega / std::sqrt(2.0);
  const double c = 2.0 * p.e0 * std::sqrt(M_PI / 2.0) / p.omega;
  auto big_f = [a](double u) { return u * std::erf(a * u) + std::exp(-a * a * u * u) / (a * std::sqrt(M_PI)); };
  const double us = ts - p.t0, u = t - p.t0;
  return xi0 + v0 * (t - ts) + c * (big_f(u) - big_f(us) - std::erf(a * us) * (t - ts));
}

}  // namespace

TEST_CASE("peak of a synthetic Gaussian trace") {
  const PulseSpec pulse(1.1, omega_for_keldysh(0.25, 1.1), 15.0);
  const auto t = grid_times(-40.0, 70.0, 0.02);
  std::vector<double> v;
  for (double s : t) v.push_back(std::exp(-std::pow((s - 17.3) / 3.0, 2)));
  const auto p = peak_time(t, v, pulse_window(pulse));
  REQUIRE(p.ok());
  CHECK(std::abs(p.time - 17.3) < 1e-3 * pulse.tau());
  CHECK(std::abs(p.offset) <= 0.02);
  CHECK_FALSE(p.tie);
}

TEST_CASE("symmetric trace refines to its centre") {
  const auto t = grid_times(0.0, 10.0, 0.1);
  std::vector<double> v;
  for (double s : t) v.push_back(1.0 / (1.0 + std::pow(s - 4.63, 2)));
  // refinement is exact for a parabolic top; here the check is the symmetric bracket
  const auto p = peak_time(t, v);
  REQUIRE(p.ok());
  std::vector<double> w;
  for (double s : t) w.push_back(cap(4.63, 2.0)(s));
  const auto q = peak_time(t, w);
  REQUIRE(q.ok());
  CHECK(q.time == doctest::Approx(4.63).epsilon(1e-12));
  CHECK(std::abs(p.time - 4.63) < 0.01);

  std::vector<double> sym;
  for (double s : t) sym.push_back(std::exp(-std::pow(s - 5.0, 2)));
  CHECK(peak_time(t, sym).time == doctest::Approx(5.0).epsilon(1e-14));
}

TEST_CASE("peak flags") {
  const auto t = grid_times(0.0, 20.0, 0.05);
  std::vector<double> two, flat, edge, tie, shoulder;
  for (double s : t) {
    two.push_back(std::exp(-std::pow(s - 6.0, 2)) + 0.95 * std::exp(-std::pow(s - 12.0, 2)));
    shoulder.push_back(std::exp(-std::pow(s - 6.0, 2)) + 0.5 * std::exp(-std::pow(s - 12.0, 2)));
    flat.push_back(1e-14);
    edge.push_back(s);
    tie.push_back(std::abs(s - 6.0) < 1e-9 || std::abs(s - 12.0) < 1e-9 ? 1.0 : 0.0);
  }
  CHECK(peak_time(t, two).status == PeakStatus::multimodal);
  CHECK(peak_time(t, shoulder).ok());
  CHECK(peak_time(t, flat).status == PeakStatus::no_peak);
  CHECK(peak_time(t, edge).status == PeakStatus::at_window_edge);
  const auto p = peak_time(t, tie, {.secondary_ratio = 2.0});
  CHECK(p.tie);
  CHECK(p.time == doctest::Approx(6.0));
  CHECK(peak_time(t, tie).status == PeakStatus::multimodal);
  // a late hump outside the window does not matter
  PeakOptions win;
  win.window_hi = 9.0;
  CHECK(peak_time(t, two, win).ok());
  CHECK_THROWS_AS(peak_time(t, std::vector<double>(3, 0.0)), ConfigError);
}

TEST_CASE("timing assembles delays and the average velocity") {
  const PulseSpec pulse(1.1, omega_for_keldysh(0.25, 1.1), 0.0);
  const auto b = barrier_geometry(1.1);
  const auto t = grid_times(-50.0, 50.0, 0.02);
  const auto entry = synthetic(b.xi_in, t, cap(-1.6, 3.0));
  const auto exit = synthetic(b.xi_exit, t, cap(-0.251, 3.0));
  const auto r = timing(entry, exit, pulse, b);
  REQUIRE(r.valid());
  CHECK(r.flags.empty());
  CHECK(r.t_in == doctest::Approx(-1.6).epsilon(1e-10));
  CHECK(r.t_exit == doctest::Approx(-0.251).epsilon(1e-10));
  CHECK(r.tau_exit == r.t_exit - r.t0);
  CHECK(r.tau_tsub == r.t_exit - r.t_in);
  CHECK(r.v_avg == (b.xi_exit - b.xi_in) / (2.0 * r.tau_tsub));

  const auto reversed = timing(exit, entry, pulse, b);
  CHECK_FALSE(reversed.flags.empty());
  const auto missing = timing(synthetic(b.xi_in, t, [](double) { return 0.0; }), exit, pulse, b);
  CHECK_FALSE(missing.valid());
}

TEST_CASE("monotone cubic and local smoothing") {
  std::vector<double> x{0.0, 1.0, 2.0, 3.0, 4.0, 5.0}, y{0.0, 0.5, 1.5, 1.6, 3.0, 10.0};
  const MonotoneCubic m(x, y);
  for (double s = 0.0; s < 5.0; s += 0.01) CHECK(m(s + 0.01) >= m(s));
  for (std::size_t k = 0; k < x.size(); ++k) CHECK(m(x[k]) == doctest::Approx(y[k]));
  CHECK(m(-1.0) == 0.0);
  CHECK(m(9.0) == 10.0);
  CHECK_THROWS_AS(MonotoneCubic({0.0, 1.0, 1.0, 2.0}, {0.0, 1.0, 2.0, 3.0}), NumericalError);
  CHECK_THROWS_AS(MonotoneCubic({0.0, 1.0, 2.0}, {0.0, 1.0, 2.0}), NumericalError);

  std::vector<double> xs, quad;
  for (int k = 0; k < 12; ++k) {
    xs.push_back(std::pow(1.2, k));
    quad.push_back(3.0 - 2.0 * xs.back() + 0.5 * xs.back() * xs.back());
  }
  const auto s = local_quadratic_smooth(xs, quad);
  for (std::size_t k = 0; k < xs.size(); ++k) CHECK(s[k] == doctest::Approx(quad[k]).epsilon(1e-10));
}

TEST_CASE("forward-synthesised trajectory is recovered") {
  // xi(t) = a + b (t - t1)^2; each line peaks when the trajectory crosses it
  const double a = 2.0, b = 0.5, t1 = -3.0;
  const PulseSpec pulse(1.0, 0.1, 0.0);
  const auto times = grid_times(-40.0, 40.0, 0.02);
  std::vector<DetectorTrace> fan;
  for (int k = 0; k < 40; ++k) {
    const double xi = 2.5 * std::pow(16.0, k / 39.0);
    const double tk = t1 + std::sqrt((xi - a) / b);
    fan.push_back(synthetic(xi, times, [tk](double t) { return std::exp(-std::pow((t - tk) / 1.5, 2)); }));
  }
  const auto rec = quantum_trajectory(fan, pulse);
  REQUIRE(rec.xi_q);
  CHECK(rec.xi_lines.size() == 40);
  CHECK(rec.rejected_xi.empty());
  double worst = 0.0;
  for (double t = rec.t_lo(); t <= rec.t_hi(); t += 0.01) {
    const double exact = a + b * (t - t1) * (t - t1);
    worst = std::max(worst, std::abs(rec(t) - exact) / exact);
  }
  CHECK(worst < 0.01);
  // the inversion passes through each kept line at its (smoothed) peak time
  for (std::size_t k = 0; k < rec.xi_lines.size(); ++k)
    CHECK(rec(rec.t_peak_smoothed[k]) == doctest::Approx(rec.xi_lines[k]).epsilon(1e-12));
}

TEST_CASE("non-monotone and missing lines are flagged") {
  const PulseSpec pulse(1.0, 0.1, 0.0);
  const auto times = grid_times(-40.0, 40.0, 0.02);
  std::vector<DetectorTrace> fan;
  for (int k = 0; k < 25; ++k) {
    const double xi = 1.0 + k;
    double tk = 0.2 * k;
    if (k == 10) tk = -5.0;
    fan.push_back(synthetic(xi, times, cap(tk, 2.0)));
  }
  fan.push_back(synthetic(40.0, times, [](double) { return 0.0; }));
  const auto rec = quantum_trajectory(fan, pulse);
  CHECK(rec.rejected_xi == std::vector<double>{11.0, 40.0});
  CHECK(rec.flags.size() == 2);
  CHECK_THROWS_AS(quantum_trajectory(fan, pulse, 30), NumericalError);
}

TEST_CASE("exit velocity of a linear trajectory") {
  const double a = 1.5, b = 0.8;
  const PulseSpec pulse(1.0, 0.1, 0.0);
  const auto times = grid_times(-40.0, 40.0, 0.01);
  std::vector<DetectorTrace> fan;
  for (int k = 0; k < 30; ++k) {
    const double xi = 2.0 + 0.5 * k;
    fan.push_back(synthetic(xi, times, cap((xi - a) / b, 2.0)));
  }
  const auto rec = quantum_trajectory(fan, pulse);
  const auto v = exit_velocity(rec, 5.0);
  CHECK(v.value == doctest::Approx(b).epsilon(1e-10));
  CHECK_FALSE(v.near_edge);
  CHECK(exit_velocity(rec, rec.t_peak_smoothed[0] + 1e-3).near_edge);
  CHECK_THROWS_AS(exit_velocity(rec, 100.0), NumericalError);
}

TEST_CASE("free motion conserves energy") {
  const PulseSpec none(0.0, 1.0, 0.0);
  const auto tr = classical_trajectory(none, 4.0, 5.0, 0.0, 50.0, 0.01);
  const double e0 = 0.5 * 25.0 - 8.0 / 4.0;
  double drift = 0.0;
  for (std::size_t k = 0; k < tr.times.size(); ++k)
    drift = std::max(drift, std::abs(0.5 * tr.velocity[k] * tr.velocity[k] - 8.0 / tr.xi[k] - e0));
  CHECK(drift < 1e-8);
  CHECK_THROWS_AS(classical_trajectory(none, 1.0, 0.0, 0.0, 50.0, 0.01), PhysicsFlag);
}

TEST_CASE("field-only motion matches the error-function solution") {
  const PulseSpec pulse(1.2, omega_for_keldysh(0.25, 1.2), 2.0);
  const ClassicalOptions field_only{0.0};
  for (double v0 : {0.0, 0.7}) {
    const double ts = -10.0;
    const auto tr = classical_trajectory(pulse, 3.0, v0, ts, 40.0, 0.02, field_only);
    double worst = 0.0;
    for (std::size_t k = 0; k < tr.times.size(); ++k)
      worst = std::max(worst, std::abs(tr.xi[k] - erf_oracle(pulse, 3.0, v0, ts, tr.times[k])));
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("RK4 converges at fourth order") {
  const PulseSpec pulse(1.0, omega_for_keldysh(0.25, 1.0), 0.0);
  auto final_xi = [&](double dt) { return classical_trajectory(pulse, 3.9, 0.3, -0.5, 15.5, dt).xi.back(); };
  const double a = final_xi(0.08), b = final_xi(0.04), c = final_xi(0.02);
  const double order = std::log2((a - b) / (b - c));
  CHECK(order == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("two-step and corrected modes") {
  const PulseSpec pulse(1.0, omega_for_keldysh(0.25, 1.0), 0.0);
  const auto two = classical_trajectory(pulse, 3.9, ClassicalMode::two_step, 0.0, 0.0, 30.0, 0.02);
  CHECK(two.xi.front() == 3.9);
  CHECK(two.velocity.front() == 0.0);
  CHECK(two.times.front() == 0.0);
  CHECK_THROWS_AS(classical_trajectory(pulse, 3.9, ClassicalMode::two_step, 0.5, 0.0, 30.0, 0.02), ConfigError);
  CHECK_THROWS_AS(classical_trajectory(pulse, 3.9, ClassicalMode::two_step, 0.0, -1.0, 30.0, 0.02), ConfigError);
  const auto cc = classical_trajectory(pulse, 3.9, ClassicalMode::corrected, 2.5, -0.3, 30.0, 0.02);
  CHECK(cc.at(-0.3) == doctest::Approx(3.9).epsilon(1e-15));
  CHECK(cc.velocity.front() == 2.5);

  const auto self = compare_trajectories([&](double t) { return two.at(t); }, two, two, 0.0, 30.0, 0.02);
  CHECK(self.max_two_step == 0.0);
  CHECK(self.max_corrected == 0.0);
  CHECK(self.final_corrected == 0.0);

  const auto cmp = compare_trajectories([&](double t) { return cc.at(t); }, two, cc, 0.0, 30.0, 0.02);
  CHECK(cmp.corrected_better());
  CHECK(cmp.final_two_step > 0.0);
}

#include "vdet/stark.hpp"

#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <sstream>
#include <utility>

#include "vdet/error.hpp"

namespace vdet {

namespace {

// Bracketed root with TOMS 748 to (near) full double precision.
template <class F>
double solve_bracketed(F f, double lo, double hi, const char* what) {
  const double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (std::signbit(flo) == std::signbit(fhi)) throw NumericalError(std::string("no sign change bracketing ") + what);
  std::uintmax_t iterations = 200;
  auto tol = boost::math::tools::eps_tolerance<double>(52);
  auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iterations);
  return 0.5 * (a + b);
}

}  // namespace

double coulomb_energy(int n1, int n2) {
  if (n1 < 0 || n2 < 0) throw ConfigError("quantum numbers must be nonnegative");
  const double n = n1 + n2 + 0.5;
  return -1.0 / (2.0 * n * n);
}

double hypergeometric_m_terminating(int n, double b, double z) {
  // sum_k (-n)_k / (b)_k z^k / k!
  double term = 1.0, sum = 1.0;
  for (int k = 0; k < n; ++k) {
    term *= (k - n) * z / ((b + k) * (k + 1));
    sum += term;
  }
  return sum;
}

double eigenfactor(int n, double energy, double s) {
  if (n < 0) throw ConfigError("eigenfactor index must be nonnegative");
  if (!(energy < 0.0)) throw ConfigError("eigenfactor needs a bound energy");
  if (s < 0.0) throw ConfigError("eigenfactor coordinate must be nonnegative");
  const double k = std::sqrt(-2.0 * energy);
  return std::sqrt(k / (1.0 + 4.0 * n)) * std::exp(-0.5 * k * s) * hypergeometric_m_terminating(n, 0.5, k * s);
}

double stark_closure_residual(double energy, double field) {
  return 2.0 * std::sqrt(-energy / 8.0) +
         2.0 * kStarkSecondOrder * std::sqrt(-2.0 * energy) * field * field / (energy * energy * energy) - 1.0;
}

StarkParameters stark_parameters(double field) {
  if (!(field >= 0.0) || !std::isfinite(field)) throw ConfigError("field strength must be >= 0");
  constexpr double lo = -8.0, hi = -1e-3;
  auto f = [field](double e) { return stark_closure_residual(e, field); };
  if (std::signbit(f(lo)) == std::signbit(f(hi))) {
    std::ostringstream msg;
    msg << "no bound Stark energy in [" << lo << ", " << hi << "] for F = " << field
        << " (beyond perturbative validity)";
    throw NumericalError(msg.str());
  }
  const double e = solve_bracketed(f, lo, hi, "the Stark energy");
  const double beta0 = std::sqrt(-e / 8.0);
  const double beta_first = -field / (4.0 * e);
  const double beta_second = kStarkSecondOrder * std::sqrt(-2.0 * e) * field * field / (e * e * e);
  const double beta1 = beta0 + beta_first + beta_second;
  return {field, e, beta1, 1.0 - beta1};
}

TunnelingPotentials tunneling_potentials(const StarkParameters& p, double s) {
  if (!(s > 0.0)) throw ConfigError("tunneling potentials need a positive coordinate");
  const double core = -3.0 / (32.0 * s * s);
  return {core - p.beta1 / (2.0 * s) - s * p.field / 8.0, core - p.beta2 / (2.0 * s) + s * p.field / 8.0};
}

StarkSolution barrier_geometry(double field) {
  if (!(field > 0.0)) throw ConfigError("barrier geometry needs a positive field");
  StarkSolution sol;
  sol.params = stark_parameters(field);
  const auto& p = sol.params;
  const double level = p.energy / 4.0;
  auto v1 = [&](double s) { return tunneling_potentials(p, s).v1 - level; };
  auto v2 = [&](double s) { return tunneling_potentials(p, s).v2 - level; };

  // V1' = 0  <=>  3 + 8 beta1 s - 2 F s^3 = 0, one positive root
  auto dv1 = [&](double s) { return 3.0 + 8.0 * p.beta1 * s - 2.0 * field * s * s * s; };
  double hi = 1.0;
  while (dv1(hi) > 0.0) hi *= 2.0;
  sol.xi_barrier_top = solve_bracketed(dv1, 1e-12, hi, "the barrier top");

  const double top = v1(sol.xi_barrier_top);
  if (!(top > 0.0)) {
    std::ostringstream msg;
    msg << "over-the-barrier: max V1 - E/4 = " << top << " at F = " << field;
    throw PhysicsFlag(msg.str());
  }
  double lo = sol.xi_barrier_top;
  while (v1(lo) > 0.0) lo *= 0.5;
  sol.xi_in = solve_bracketed(v1, lo, sol.xi_barrier_top, "xi_in");
  hi = sol.xi_barrier_top;
  while (v1(hi) > 0.0) hi *= 2.0;
  sol.xi_exit = solve_bracketed(v1, sol.xi_barrier_top, hi, "xi_exit");

  // V2 is strictly increasing for F > 0
  lo = 1.0;
  while (v2(lo) > 0.0) lo *= 0.5;
  hi = 1.0;
  while (v2(hi) < 0.0) hi *= 2.0;
  sol.eta0 = solve_bracketed(v2, lo, hi, "eta0");
  return sol;
}

}  // namespace vdet

#include "vdet/ground_state.hpp"

#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <sstream>

#include "vdet/error.hpp"
#include "vdet/krylov.hpp"
#include "vdet/operators.hpp"

namespace vdet {

namespace {

double residual(const Hamiltonian& h, const WaveField& psi, double energy) {
  auto r = h.apply(psi, 0.0);
  auto scaled = psi;
  scaled *= energy;
  r -= scaled;
  return std::sqrt(norm(r) / norm(psi));
}

}  // namespace

GroundState relax_ground_state(const GridSpec& grid, PotentialSpec potential, const RelaxOptions& options,
                               std::optional<WaveField> seed) {
  const Hamiltonian h(grid, potential);
  WaveField psi = seed ? std::move(*seed) : WaveField::sample(grid, [](double x, double y) {
    return complex(std::exp(-(x * x + y * y)), 0.0);
  });
  if (!(psi.grid() == grid)) throw ConfigError("seed grid differs from relaxation grid");
  psi.normalize();

  LanczosPropagator prop(grid.size(), options.krylov_dim);
  double energy = h.energy(psi, 0.0);
  for (int it = 1; it <= options.max_iterations; ++it) {
    prop.imaginary_step(h, psi.data(), options.dtau);
    psi.normalize();
    const double next = h.energy(psi, 0.0);
    if (!std::isfinite(next)) throw NumericalError("non-finite energy during ground-state relaxation");
    const double change = std::abs(next - energy);
    energy = next;
    if (change < options.tolerance && residual(h, psi, energy) < options.residual) return {std::move(psi), energy, it};
  }
  std::ostringstream msg;
  msg << "ground-state relaxation did not converge in " << options.max_iterations << " iterations";
  throw NumericalError(msg.str());
}

WaveField analytic_ground_state(const GridSpec& grid) {
  WaveField psi = WaveField::sample(grid, [](double x, double y) { return complex(std::exp(-2.0 * std::hypot(x, y)), 0.0); });
  psi.normalize();
  return psi;
}

double overlap(const WaveField& a, const WaveField& b) {
  return std::abs(inner_product(a, b)) / std::sqrt(inner_product(a, a).real() * inner_product(b, b).real());
}

double calibrate_softening(double spacing, double target, double half_width) {
  const auto grid = GridSpec::with_spacing(-half_width, half_width, -half_width, half_width, spacing);
  const double r2 = grid.min_r2();
  RelaxOptions opts;
  opts.tolerance = 1e-12;
  std::optional<WaveField> warm;
  auto residual = [&](double a2) {
    auto gs = relax_ground_state(grid, {a2}, opts, warm);
    warm = gs.field;
    return gs.energy - target;
  };
  // the energy increases monotonically with a^2
  double lo = -0.95 * r2, hi = 0.0;
  double fhi = residual(hi);
  while (fhi < 0.0) {
    lo = hi;
    hi = hi == 0.0 ? r2 : 2.0 * hi;
    fhi = residual(hi);
  }
  double flo = residual(lo);
  if (flo > 0.0) throw NumericalError("cannot reach the target ground-state energy on this grid spacing");
  std::uintmax_t iterations = 60;
  auto tol = [r2](double a, double b) { return std::abs(b - a) < 1e-9 * r2; };
  auto [a, b] = boost::math::tools::toms748_solve(residual, lo, hi, flo, fhi, tol, iterations);
  return 0.5 * (a + b);
}

}  // namespace vdet

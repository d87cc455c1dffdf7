#pragma once

#include <span>
#include <vector>

#include "vdet/wave_field.hpp"

namespace vdet {

/// Fourth-order central difference weights: second derivative
/// (-1/12, 4/3, -5/2, 4/3, -1/12)/h^2 and first derivative (1, -8, 0, 8, -1)/(12h).
/// Values outside the grid are taken as zero (Dirichlet ghosts).

void laplacian(const GridSpec& grid, std::span<const complex> in, std::span<complex> out);
WaveField laplacian(const WaveField& field);

/// Probability density |psi|^2 at every node.
std::vector<double> density(const WaveField& field);

struct VectorFieldSample {
  double jx = 0.0;
  double jy = 0.0;
};

/// Vector quantity on the grid. `valid` is all-true for the current and marks
/// the nodes above the density floor for the phase gradient.
struct VectorField {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<bool> valid;
};

/// d psi / dx and d psi / dy at node (i, j).
complex gradient_x_at(const WaveField& field, std::size_t i, std::size_t j);
complex gradient_y_at(const WaveField& field, std::size_t i, std::size_t j);

/// j = Im(psi* grad psi) (m = hbar = 1, A = 0).
VectorFieldSample current_at(const WaveField& field, std::size_t i, std::size_t j);
VectorField current(const WaveField& field);

/// grad(phi) = Im(psi* grad psi) / rho where rho >= relative_floor * max(rho);
/// nodes below the floor are marked invalid and carry zeros.
VectorField phase_gradient(const WaveField& field, double relative_floor = 1e-12);

/// Integral of a nodal quantity over the box. Nodes are cell centres, so this
/// is the midpoint rule, the quadrature under which the propagation is unitary.
double integrate(const GridSpec& grid, std::span<const double> values);

/// Sum |psi|^2 dx dy.
double norm(const WaveField& field);

/// <a|b> = sum conj(a) b dx dy (uniform weights; the discrete Hamiltonian is
/// symmetric with respect to this product).
complex inner_product(const WaveField& a, const WaveField& b);
complex inner_product(std::span<const complex> a, std::span<const complex> b);
double squared_norm(std::span<const complex> a);

}  // namespace vdet

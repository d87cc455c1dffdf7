#include "vdet/krylov.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

#include "vdet/error.hpp"
#include "vdet/operators.hpp"

namespace vdet {

namespace {

// Orthogonality loss against the first vector that triggers full reorthogonalisation.
constexpr double kOrthogonalityTolerance = 1e-10;

void axpy(complex a, std::span<const complex> x, std::span<complex> y) {
  const double ar = a.real(), ai = a.imag();
  for (std::size_t k = 0; k < y.size(); ++k) {
    const double xr = x[k].real(), xi = x[k].imag();
    y[k] += complex(ar * xr - ai * xi, ar * xi + ai * xr);
  }
}

}  // namespace

LanczosPropagator::LanczosPropagator(std::size_t size, int krylov_dim) : m_(krylov_dim), w_(size) {
  if (krylov_dim < 4 || krylov_dim > 64) throw ConfigError("Krylov dimension must lie in [4, 64]");
  basis_.assign(static_cast<std::size_t>(m_), std::vector<complex>(size));
}

template <class ExpFn>
KrylovStepInfo LanczosPropagator::run(const Hamiltonian& h, double field, std::span<complex> psi, ExpFn&& coefficients) {
  KrylovStepInfo info;
  const double beta0 = std::sqrt(squared_norm(psi));
  if (!std::isfinite(beta0)) throw NumericalError("non-finite wave function entering Krylov step");
  if (beta0 == 0.0) return info;

  std::vector<double> alpha, beta;
  alpha.reserve(m_);
  beta.reserve(m_);
  {
    auto& v0 = basis_[0];
    const double s = 1.0 / beta0;
    for (std::size_t k = 0; k < v0.size(); ++k) v0[k] = psi[k] * s;
  }

  int dim = 0;
  double beta_last = 0.0;
  bool full_reorth = false;
  for (int j = 0; j < m_; ++j) {
    const auto& vj = basis_[j];
    h.apply(vj, w_, field);
    const double a = inner_product(vj, w_).real();
    alpha.push_back(a);
    axpy(-a, vj, w_);
    if (j > 0) axpy(-beta[j - 1], basis_[j - 1], w_);
    if (!full_reorth && j > 0 && std::abs(inner_product(basis_[0], w_)) > kOrthogonalityTolerance * std::sqrt(squared_norm(w_)))
      full_reorth = true;
    if (full_reorth) {
      info.reorthogonalized = true;
      for (int pass = 0; pass < 2; ++pass)
        for (int k = 0; k <= j; ++k) axpy(-inner_product(basis_[k], w_), basis_[k], w_);
    }
    const double b = std::sqrt(squared_norm(w_));
    if (!std::isfinite(a) || !std::isfinite(b)) {
      std::ostringstream msg;
      msg << "non-finite Lanczos coefficient at iteration " << j << " (alpha=" << a << ", beta=" << b << ")";
      throw NumericalError(msg.str());
    }
    dim = j + 1;
    beta_last = b;
    // happy breakdown: the Krylov space is invariant
    if (b <= 1e-14 * (std::abs(a) + (j > 0 ? beta[j - 1] : 0.0) + 1.0)) {
      beta_last = 0.0;
      break;
    }
    if (j + 1 < m_) {
      beta.push_back(b);
      auto& next = basis_[j + 1];
      const double s = 1.0 / b;
      for (std::size_t k = 0; k < next.size(); ++k) next[k] = w_[k] * s;
    }
  }

  Eigen::VectorXd diag(dim), sub(std::max(dim - 1, 0));
  for (int k = 0; k < dim; ++k) diag[k] = alpha[k];
  for (int k = 0; k + 1 < dim; ++k) sub[k] = beta[k];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
  eig.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (eig.info() != Eigen::Success) throw NumericalError("tridiagonal eigensolver failed in Krylov step");
  const Eigen::VectorXcd c = coefficients(eig.eigenvalues(), eig.eigenvectors());

  info.dimension = dim;
  info.error_estimate = beta0 * beta_last * std::abs(c[dim - 1]);

  for (std::size_t k = 0; k < psi.size(); ++k) psi[k] = complex{};
  for (int k = 0; k < dim; ++k) axpy(beta0 * c[k], basis_[k], psi);
  return info;
}

KrylovStepInfo LanczosPropagator::step(const Hamiltonian& h, double field, std::span<complex> psi, double dt) {
  return run(h, field, psi, [dt](const Eigen::VectorXd& lambda, const Eigen::MatrixXd& q) {
    // Q exp(-i Lambda dt) Q^T e1
    Eigen::VectorXcd phase(lambda.size());
    for (Eigen::Index k = 0; k < lambda.size(); ++k) phase[k] = std::polar(q(0, k), -lambda[k] * dt);
    return Eigen::VectorXcd(q.cast<complex>() * phase);
  });
}

KrylovStepInfo LanczosPropagator::imaginary_step(const Hamiltonian& h, std::span<complex> psi, double dtau) {
  return run(h, 0.0, psi, [dtau](const Eigen::VectorXd& lambda, const Eigen::MatrixXd& q) {
    // shift by the lowest Ritz value to keep the exponentials bounded
    const double shift = lambda.minCoeff();
    Eigen::VectorXd decay(lambda.size());
    for (Eigen::Index k = 0; k < lambda.size(); ++k) decay[k] = q(0, k) * std::exp(-(lambda[k] - shift) * dtau);
    return Eigen::VectorXcd((q * decay).cast<complex>());
  });
}

WaveField krylov_step(const WaveField& field, const Hamiltonian& h, const PulseSpec& pulse, double t, double dt,
                      int krylov_dim) {
  WaveField out = field;
  LanczosPropagator prop(field.size(), krylov_dim);
  prop.step(h, pulse.field_at(t + 0.5 * dt), out.data(), dt);
  return out;
}

}  // namespace vdet

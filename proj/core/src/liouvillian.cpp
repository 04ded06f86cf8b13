#include "mollow/liouvillian.hpp"

#include <cmath>
#include <string>

#include "mollow/errors.hpp"
#include "mollow/hamiltonian.hpp"
#include "mollow/operators.hpp"

namespace mollow {

namespace {

constexpr double kHermiticityTolerance = 1e-12;

}  // namespace

double Liouvillian::norm1() const {
  double best = 0.0;
  for (int k = 0; k < superop.outerSize(); ++k) {
    double col = 0.0;
    for (SparseMatrix::InnerIterator it(superop, k); it; ++it) col += std::abs(it.value());
    best = std::max(best, col);
  }
  return best;
}

double Liouvillian::trace_defect() const {
  const Vector t = trace_functional(hilbert_dim);
  const Vector sums = superop.transpose() * t;
  return sums.cwiseAbs().maxCoeff();
}

Liouvillian build_liouvillian(const SparseMatrix& hamiltonian, std::span<const Dissipator> dissipators) {
  const int d = static_cast<int>(hamiltonian.rows());
  if (hamiltonian.cols() != d || d == 0) {
    throw InvalidDimension("build_liouvillian: Hamiltonian must be square and non-empty");
  }
  if (hermiticity_defect(hamiltonian) > kHermiticityTolerance) {
    throw InvalidParameter("build_liouvillian: Hamiltonian is not Hermitian");
  }
  const SparseMatrix id = identity(d);

  // vec(X rho Y) = (Y^T (x) X) vec(rho)
  SparseMatrix l = -kI * (tensor(id, hamiltonian) - tensor(SparseMatrix(hamiltonian.transpose()), id));
  for (const auto& diss : dissipators) {
    if (diss.op.rows() != d || diss.op.cols() != d) {
      throw InvalidDimension("build_liouvillian: dissipator is " + std::to_string(diss.op.rows()) + "x" +
                             std::to_string(diss.op.cols()) + ", Hamiltonian is " + std::to_string(d));
    }
    if (!std::isfinite(diss.rate) || diss.rate < 0.0) {
      throw InvalidParameter("build_liouvillian: dissipator rate must be finite and >= 0");
    }
    if (diss.rate == 0.0) continue;
    const SparseMatrix ada = diss.op.adjoint() * diss.op;
    l += diss.rate * (2.0 * tensor(SparseMatrix(diss.op.conjugate()), diss.op) - tensor(id, ada) -
                      tensor(SparseMatrix(ada.transpose()), id));
  }
  // Keep an explicit diagonal so shifted copies L - z*I share one sparsity pattern.
  l += 0.0 * identity(d * d);
  l.makeCompressed();

  Liouvillian out;
  out.superop = std::move(l);
  out.dissipators.assign(dissipators.begin(), dissipators.end());
  out.hilbert_dim = d;
  return out;
}

std::vector<Dissipator> default_dissipators(const SystemParams& p) {
  const auto ops = product_operators(p.n_max);
  return {Dissipator{ops.sigma_lower, 0.5 * p.gamma1}, Dissipator{ops.a, 0.5 * p.kappa}};
}

Liouvillian build_system_liouvillian(const SystemParams& p) {
  const SparseMatrix h = build_hamiltonian_rwa(p);
  const auto diss = default_dissipators(p);
  return build_liouvillian(h, diss);
}

Vector trace_functional(int hilbert_dim) {
  Vector t = Vector::Zero(static_cast<Eigen::Index>(hilbert_dim) * hilbert_dim);
  for (int i = 0; i < hilbert_dim; ++i) t(i + hilbert_dim * i) = 1.0;
  return t;
}

}  // namespace mollow

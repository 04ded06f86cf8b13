#include "mollow/hamiltonian.hpp"

#include "mollow/operators.hpp"

namespace mollow {

SparseMatrix build_hamiltonian_rwa(const SystemParams& p) {
  p.validate();
  const auto ops = product_operators(p.n_max);
  SparseMatrix h = p.cavity_detuning() * ops.photon_number +
                   p.atom_detuning() * ops.excited_projector +
                   p.g * (SparseMatrix(ops.a_dag * ops.sigma_lower) + SparseMatrix(ops.a * ops.sigma_raise)) +
                   (0.5 * p.rabi_omega) * (ops.a + ops.a_dag);
  h.prune(cplx(0.0));
  h.makeCompressed();
  return h;
}

double hermiticity_defect(const SparseMatrix& h) {
  const double scale = h.norm();
  if (scale == 0.0) return 0.0;
  return SparseMatrix(h - SparseMatrix(h.adjoint())).norm() / scale;
}

}  // namespace mollow

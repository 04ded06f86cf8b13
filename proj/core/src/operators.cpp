#include "mollow/operators.hpp"

#include <cmath>
#include <string>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>

#include "mollow/errors.hpp"

namespace mollow {

FockOperators fock_operators(int n_max) {
  if (n_max < 2) {
    throw InvalidDimension("fock_operators: n_max must be >= 2, got " + std::to_string(n_max));
  }
  std::vector<Eigen::Triplet<cplx>> entries;
  entries.reserve(n_max - 1);
  for (int n = 1; n < n_max; ++n) {
    entries.emplace_back(n - 1, n, std::sqrt(static_cast<double>(n)));
  }
  FockOperators ops;
  ops.annihilate.resize(n_max, n_max);
  ops.annihilate.setFromTriplets(entries.begin(), entries.end());
  ops.create = ops.annihilate.adjoint();
  ops.number = ops.create * ops.annihilate;
  return ops;
}

AtomOperators atom_operators() {
  AtomOperators ops;
  std::vector<Eigen::Triplet<cplx>> z{{0, 0, 1.0}, {1, 1, -1.0}};
  std::vector<Eigen::Triplet<cplx>> x{{1, 0, 1.0}, {0, 1, 1.0}};
  std::vector<Eigen::Triplet<cplx>> lower{{0, 1, 1.0}};
  ops.sigma_z.resize(2, 2);
  ops.sigma_z.setFromTriplets(z.begin(), z.end());
  ops.sigma_x.resize(2, 2);
  ops.sigma_x.setFromTriplets(x.begin(), x.end());
  ops.lower.resize(2, 2);
  ops.lower.setFromTriplets(lower.begin(), lower.end());
  ops.raise = ops.lower.adjoint();
  return ops;
}

SparseMatrix identity(int dim) {
  SparseMatrix id(dim, dim);
  id.setIdentity();
  return id;
}

SparseMatrix tensor(const SparseMatrix& a, const SparseMatrix& b) {
  SparseMatrix out = Eigen::kroneckerProduct(a, b);
  out.makeCompressed();
  return out;
}

DenseMatrix tensor(const DenseMatrix& a, const DenseMatrix& b) {
  return Eigen::kroneckerProduct(a, b);
}

ProductOperators product_operators(int n_max) {
  const auto fock = fock_operators(n_max);
  const auto atom = atom_operators();
  const SparseMatrix id_cavity = identity(n_max);
  const SparseMatrix id_atom = identity(2);

  ProductOperators ops;
  ops.n_max = n_max;
  ops.a = tensor(fock.annihilate, id_atom);
  ops.a_dag = tensor(fock.create, id_atom);
  ops.photon_number = tensor(fock.number, id_atom);
  ops.sigma_lower = tensor(id_cavity, atom.lower);
  ops.sigma_raise = tensor(id_cavity, atom.raise);
  ops.excited_projector = ops.sigma_raise * ops.sigma_lower;
  return ops;
}

SparseMatrix emitter_lowering(int hilbert_dim) {
  if (hilbert_dim < 2 || hilbert_dim % 2 != 0) {
    throw InvalidDimension("emitter_lowering: dimension must be a positive even number, got " +
                           std::to_string(hilbert_dim));
  }
  return tensor(identity(hilbert_dim / 2), atom_operators().lower);
}

}  // namespace mollow

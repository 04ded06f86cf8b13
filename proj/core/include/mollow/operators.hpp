#pragma once

#include "mollow/types.hpp"

namespace mollow {

struct FockOperators {
  SparseMatrix annihilate;
  SparseMatrix create;
  SparseMatrix number;
};

/// Truncated ladder operators on photon numbers 0..n_max-1.
/// Throws InvalidDimension when n_max < 2.
FockOperators fock_operators(int n_max);

/// Two-level operators with ground |0> and excited |1>. sigma_z follows the
/// ground-minus-excited convention |0><0| - |1><1|.
struct AtomOperators {
  SparseMatrix sigma_z;
  SparseMatrix sigma_x;
  SparseMatrix lower;  // |0><1|
  SparseMatrix raise;  // |1><0|
};

AtomOperators atom_operators();

SparseMatrix identity(int dim);

/// Kronecker product. The left factor varies slowest, so tensor(photon, atom)
/// gives the photon-major basis index 2*n + atom used everywhere.
SparseMatrix tensor(const SparseMatrix& a, const SparseMatrix& b);
DenseMatrix tensor(const DenseMatrix& a, const DenseMatrix& b);

/// Cavity and atom operators lifted to the photon-major product space of
/// dimension 2*n_max.
struct ProductOperators {
  int n_max = 0;
  SparseMatrix a;
  SparseMatrix a_dag;
  SparseMatrix photon_number;
  SparseMatrix sigma_lower;  // identity (x) |0><1|
  SparseMatrix sigma_raise;
  SparseMatrix excited_projector;  // identity (x) |1><1|

  int dim() const { return 2 * n_max; }
};

ProductOperators product_operators(int n_max);

/// Atomic lowering operator on a Hilbert space of dimension `hilbert_dim`
/// laid out as (something) (x) atom. For hilbert_dim == 2 this is the bare
/// |0><1|. Throws InvalidDimension for odd or non-positive dimensions.
SparseMatrix emitter_lowering(int hilbert_dim);

}  // namespace mollow

#pragma once

#include <span>
#include <vector>

#include "mollow/system_params.hpp"
#include "mollow/types.hpp"

namespace mollow {

/// Adds rate * D(op) to the generator, D(A)rho = 2 A rho A^dag - A^dag A rho - rho A^dag A.
struct Dissipator {
  SparseMatrix op;
  double rate = 0.0;
};

/// Superoperator L with d vec(rho)/dt = L vec(rho) on column-major
/// vectorised density matrices. Immutable after construction.
struct Liouvillian {
  SparseMatrix superop;
  std::vector<Dissipator> dissipators;
  int hilbert_dim = 0;

  int dim() const { return static_cast<int>(superop.rows()); }
  /// Maximum absolute column sum.
  double norm1() const;
  /// Largest |sum_i L[(i,i), k]| over columns k; zero for a trace-preserving generator.
  double trace_defect() const;
};

/// Throws InvalidDimension if H is not square or a dissipator's shape
/// differs, InvalidParameter for a negative or non-finite rate or a
/// non-Hermitian H (relative defect > 1e-12).
Liouvillian build_liouvillian(const SparseMatrix& hamiltonian, std::span<const Dissipator> dissipators);

/// {(identity (x) |0><1|, gamma1/2), (a (x) identity, kappa/2)}: atomic energy
/// decay gamma1 and cavity energy decay kappa under the factor-2 D above.
std::vector<Dissipator> default_dissipators(const SystemParams& p);

/// Hamiltonian plus default dissipators for `p`.
Liouvillian build_system_liouvillian(const SystemParams& p);

/// Row vector t with t . vec(rho) = Tr rho.
Vector trace_functional(int hilbert_dim);

}  // namespace mollow

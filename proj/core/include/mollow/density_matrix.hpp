#pragma once

#include "mollow/types.hpp"

namespace mollow {

struct StateTolerances {
  double trace = 1e-10;
  double hermiticity = 1e-10;
  double min_eigenvalue = -1e-8;
};

/// Trace-one, Hermitian, positive semidefinite state. The constructor checks
/// all three invariants and throws InvalidParameter on violation.
class DensityMatrix {
 public:
  explicit DensityMatrix(DenseMatrix matrix, const StateTolerances& tol = {});

  const DenseMatrix& matrix() const { return matrix_; }
  int dim() const { return static_cast<int>(matrix_.rows()); }

  /// Column-major vectorisation, index i + dim*j.
  Vector vectorized() const;

  /// |n><n| (x) |atom><atom| in the photon-major basis.
  static DensityMatrix product_basis_state(int n_max, int photons, int atom);
  static DensityMatrix maximally_mixed(int dim);

 private:
  DenseMatrix matrix_;
};

/// Tr[op * rho]. Throws InvalidDimension on mismatch.
cplx expectation(const SparseMatrix& op, const DensityMatrix& rho);
cplx expectation(const SparseMatrix& op, const DenseMatrix& rho);

/// Smallest eigenvalue of the Hermitian part of `m`.
double min_eigenvalue(const DenseMatrix& m);

/// 0.5 * sum |eig(a - b)| for Hermitian a, b.
double trace_distance(const DenseMatrix& a, const DenseMatrix& b);

Vector vectorize(const DenseMatrix& m);
DenseMatrix unvectorize(const Vector& v, int dim);

}  // namespace mollow

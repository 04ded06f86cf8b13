#include "mollow/density_matrix.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "mollow/errors.hpp"

namespace mollow {

DensityMatrix::DensityMatrix(DenseMatrix matrix, const StateTolerances& tol) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() == 0) {
    throw InvalidDimension("DensityMatrix must be square and non-empty");
  }
  const cplx tr = matrix_.trace();
  if (std::abs(tr - cplx(1.0)) > tol.trace) {
    throw InvalidParameter("DensityMatrix trace deviates from 1 by " + std::to_string(std::abs(tr - cplx(1.0))));
  }
  const double herm = (matrix_ - matrix_.adjoint()).norm();
  if (herm > tol.hermiticity) {
    throw InvalidParameter("DensityMatrix is not Hermitian (defect " + std::to_string(herm) + ")");
  }
  const double lowest = min_eigenvalue(matrix_);
  if (lowest < tol.min_eigenvalue) {
    throw InvalidParameter("DensityMatrix has eigenvalue " + std::to_string(lowest));
  }
}

Vector DensityMatrix::vectorized() const { return vectorize(matrix_); }

DensityMatrix DensityMatrix::product_basis_state(int n_max, int photons, int atom) {
  if (n_max < 1 || photons < 0 || photons >= n_max || atom < 0 || atom > 1) {
    throw InvalidDimension("product_basis_state: index outside the truncated basis");
  }
  DenseMatrix m = DenseMatrix::Zero(2 * n_max, 2 * n_max);
  m(2 * photons + atom, 2 * photons + atom) = 1.0;
  return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  if (dim < 1) throw InvalidDimension("maximally_mixed: dim must be >= 1");
  return DensityMatrix(DenseMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

cplx expectation(const SparseMatrix& op, const DenseMatrix& rho) {
  if (op.rows() != rho.rows() || op.cols() != rho.cols()) {
    throw InvalidDimension("expectation: operator is " + std::to_string(op.rows()) + "x" +
                           std::to_string(op.cols()) + ", state is " + std::to_string(rho.rows()) + "x" +
                           std::to_string(rho.cols()));
  }
  // Tr[op rho] = sum_{i,j} op(i,j) rho(j,i)
  cplx acc = 0.0;
  for (int k = 0; k < op.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(op, k); it; ++it) {
      acc += it.value() * rho(it.col(), it.row());
    }
  }
  return acc;
}

cplx expectation(const SparseMatrix& op, const DensityMatrix& rho) { return expectation(op, rho.matrix()); }

double min_eigenvalue(const DenseMatrix& m) {
  const DenseMatrix herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double trace_distance(const DenseMatrix& a, const DenseMatrix& b) {
  const DenseMatrix diff = a - b;
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(0.5 * (diff + diff.adjoint()), Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

Vector vectorize(const DenseMatrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

DenseMatrix unvectorize(const Vector& v, int dim) {
  if (static_cast<long>(dim) * dim != v.size()) {
    throw InvalidDimension("unvectorize: length " + std::to_string(v.size()) + " is not " + std::to_string(dim) + "^2");
  }
  return Eigen::Map<const DenseMatrix>(v.data(), dim, dim);
}

}  // namespace mollow

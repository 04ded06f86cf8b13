#pragma once

#include <complex>
#include <numbers>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace mollow {

using cplx = std::complex<double>;

// Operators and superoperators are stored sparse (column-major); states and
// small diagnostic matrices are dense.
using DenseMatrix = Eigen::MatrixXcd;
using SparseMatrix = Eigen::SparseMatrix<cplx>;
using RowSparseMatrix = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;
using Vector = Eigen::VectorXcd;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

// Reduced Planck constant, J*s.
inline constexpr double kHbar = 1.054571817e-34;

/// Angular frequency (rad/s) from an ordinary frequency in Hz.
constexpr double angular(double hz) { return kTwoPi * hz; }
/// Ordinary frequency (Hz) from an angular frequency in rad/s.
constexpr double ordinary(double rad_per_s) { return rad_per_s / kTwoPi; }

inline constexpr double kMHz = 1e6;
inline constexpr double kGHz = 1e9;

// Lossless dense <-> sparse conversion: only exact zeros are dropped.
inline SparseMatrix to_sparse(const DenseMatrix& m) { return m.sparseView(0.0, 0.0); }
inline DenseMatrix to_dense(const SparseMatrix& m) { return DenseMatrix(m); }

}  // namespace mollow

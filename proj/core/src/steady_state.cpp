#include "mollow/steady_state.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "grid_ordering.hpp"
#include "mollow/errors.hpp"

namespace mollow {

DensityMatrix steady_state(const Liouvillian& L, const SteadyStateOptions& opt, SteadyStateReport* report) {
  const int d = L.hilbert_dim;
  const Eigen::Index n = L.superop.rows();

  // Row 0 (the d rho_00/dt equation) is a linear combination of the other
  // population rows for a trace-preserving L; swap it for Tr rho = 1.
  std::vector<Eigen::Triplet<cplx>> entries;
  entries.reserve(L.superop.nonZeros() + d);
  for (int k = 0; k < L.superop.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(L.superop, k); it; ++it) {
      if (it.row() != 0) entries.emplace_back(it.row(), it.col(), it.value());
    }
  }
  for (int i = 0; i < d; ++i) entries.emplace_back(0, i + d * i, 1.0);
  SparseMatrix bordered(n, n);
  bordered.setFromTriplets(entries.begin(), entries.end());
  bordered.makeCompressed();

  detail::LiouvillianLU lu;
  lu.analyzePattern(bordered);
  lu.factorize(bordered);
  if (lu.info() != Eigen::Success) {
    throw NoUniqueSteadyState("steady_state: sparse LU failed (" + lu.lastErrorMessage() + ")");
  }
  Vector rhs = Vector::Zero(n);
  rhs(0) = 1.0;
  const Vector x = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !x.allFinite()) {
    throw NoUniqueSteadyState("steady_state: triangular solve failed");
  }

  DenseMatrix rho = unvectorize(x, d);
  rho = 0.5 * (rho + rho.adjoint()).eval();
  rho /= rho.trace().real();

  const double residual = (L.superop * vectorize(rho)).norm() / L.norm1();
  if (report != nullptr) report->residual = residual;
  if (!(residual <= opt.residual_tolerance)) {
    throw NoUniqueSteadyState("steady_state: residual " + std::to_string(residual) + " exceeds tolerance");
  }
  return DensityMatrix(std::move(rho));
}

}  // namespace mollow

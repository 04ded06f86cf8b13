#pragma once

// Fill-reducing column ordering for Liouvillians on d x d density matrices.
// vec index i + d*j is treated as node (i, j) of a square grid; couplings
// reach two rows/columns in the photon-major basis, so separators are two
// lines wide. Non-square sizes fall back to COLAMD.

#include <cmath>
#include <vector>

#include <Eigen/OrderingMethods>
#include <Eigen/SparseLU>

#include "mollow/types.hpp"

namespace mollow::detail {

struct GridNestedDissection {
  static constexpr int kSeparatorWidth = 2;
  static constexpr int kLeafSize = 64;

  template <typename MatrixType, typename PermutationType>
  void operator()(const MatrixType& mat, PermutationType& perm) {
    using Index = typename PermutationType::StorageIndex;
    const auto n = static_cast<long>(mat.cols());
    const auto d = static_cast<long>(std::lround(std::sqrt(static_cast<double>(n))));
    if (d * d != n || d < 8) {
      Eigen::COLAMDOrdering<Index> fallback;
      fallback(mat, perm);
      return;
    }
    std::vector<long> order;
    order.reserve(n);
    dissect(d, 0, d, 0, d, order);
    perm.resize(n);
    for (long k = 0; k < n; ++k) {
      perm.indices()[order[k]] = static_cast<Index>(k);
    }
  }

 private:
  static void emit(long d, long i0, long i1, long j0, long j1, std::vector<long>& order) {
    for (long j = j0; j < j1; ++j) {
      for (long i = i0; i < i1; ++i) order.push_back(i + d * j);
    }
  }

  static void dissect(long d, long i0, long i1, long j0, long j1, std::vector<long>& order) {
    const long ni = i1 - i0;
    const long nj = j1 - j0;
    const long w = kSeparatorWidth;
    if (ni * nj <= kLeafSize) {
      emit(d, i0, i1, j0, j1, order);
      return;
    }
    if (ni >= nj) {
      if (ni <= 2 * w + 1) {
        emit(d, i0, i1, j0, j1, order);
        return;
      }
      const long m = i0 + (ni - w) / 2;
      dissect(d, i0, m, j0, j1, order);
      dissect(d, m + w, i1, j0, j1, order);
      emit(d, m, m + w, j0, j1, order);
    } else {
      if (nj <= 2 * w + 1) {
        emit(d, i0, i1, j0, j1, order);
        return;
      }
      const long m = j0 + (nj - w) / 2;
      dissect(d, i0, i1, j0, m, order);
      dissect(d, i0, i1, m + w, j1, order);
      emit(d, i0, i1, m, m + w, order);
    }
  }
};

using LiouvillianLU = Eigen::SparseLU<SparseMatrix, GridNestedDissection>;

}  // namespace mollow::detail

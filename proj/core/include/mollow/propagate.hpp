#pragma once

#include <vector>

#include "mollow/liouvillian.hpp"
#include "mollow/types.hpp"

namespace mollow {

struct PropagateOptions {
  /// Series truncation: stop when two consecutive terms fall below tolerance * ||partial sum||.
  double tolerance = 1e-15;
  int max_terms = 80;
  /// Largest ||L||_1 * substep allowed per Taylor series.
  double substep_norm = 1.5;
};

/// Repeated action of exp(L * step) by a substepped, truncated Taylor series.
/// Only sparse matrix-vector products are used.
class Propagator {
 public:
  Propagator(const Liouvillian& L, double step, const PropagateOptions& opt = {});

  /// v <- exp(L * step) v. Throws ConvergenceError if the series does not settle.
  void advance(Vector& v) const;

  /// One substep on v. coefficients[k] = probe^T (substep^k / k!) L^k v_start,
  /// so probe^T exp(L theta substep) v_start = sum_k coefficients[k] theta^k
  /// for 0 <= theta <= 1 (non-conjugated dot product).
  void advance_substep_probed(Vector& v, const Vector& probe, std::vector<cplx>& coefficients) const;

  double step() const { return step_; }
  double substep() const { return substep_; }
  int substeps() const { return substeps_; }
  const RowSparseMatrix& generator() const { return generator_; }

 private:
  RowSparseMatrix generator_;
  double step_ = 0.0;
  double substep_ = 0.0;
  int substeps_ = 1;
  PropagateOptions opt_;
};

/// exp(L t) v. Throws DomainError for t < 0.
Vector propagate(const Liouvillian& L, const Vector& v, double t, const PropagateOptions& opt = {});

}  // namespace mollow

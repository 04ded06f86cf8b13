#pragma once

#include "mollow/density_matrix.hpp"
#include "mollow/liouvillian.hpp"

namespace mollow {

struct SteadyStateOptions {
  /// Accept when ||L rho|| <= residual_tolerance * ||L||_1.
  double residual_tolerance = 1e-10;
};

struct SteadyStateReport {
  double residual = 0.0;  // ||L rho||_2 / ||L||_1
};

/// Stationary state from a sparse LU of L with its first row replaced by the
/// trace constraint. Throws NoUniqueSteadyState if the factorisation fails
/// or the residual exceeds tolerance.
DensityMatrix steady_state(const Liouvillian& L, const SteadyStateOptions& opt = {},
                           SteadyStateReport* report = nullptr);

}  // namespace mollow

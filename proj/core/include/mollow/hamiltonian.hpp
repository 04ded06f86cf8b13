#pragma once

#include "mollow/system_params.hpp"
#include "mollow/types.hpp"

namespace mollow {

/// Driven Jaynes-Cummings Hamiltonian (units of hbar, rad/s) in the frame
/// rotating at the drive frequency, counter-rotating terms dropped:
///
///   H = dr a+a + da s+s- + g (a+ s- + a s+) + (Omega/2)(a + a+)
///
/// with dr = omega_r - omega_drive and da = omega_a - omega_drive.
/// Validates `p` first (see SystemParams::validate).
SparseMatrix build_hamiltonian_rwa(const SystemParams& p);

/// Relative Frobenius Hermiticity defect ||H - H^dag|| / ||H||; zero matrix gives 0.
double hermiticity_defect(const SparseMatrix& h);

}  // namespace mollow

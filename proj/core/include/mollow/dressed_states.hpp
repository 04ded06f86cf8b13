#pragma once

#include "mollow/system_params.hpp"
#include "mollow/types.hpp"

namespace mollow {

enum class Branch { plus, minus };

constexpr double branch_sign(Branch b) { return b == Branch::plus ? 1.0 : -1.0; }

/// |n,+-> = (|n>|0> +- |n-1>|1>) / sqrt(2), n >= 1.
struct DressedState {
  int n = 1;
  Branch branch = Branch::plus;
};

/// Amplitudes over the photon-major product basis truncated at n_max.
/// Throws DomainError if n < 1 or n >= n_max.
Vector dressed_state_vector(const DressedState& s, int n_max);

/// Lab-frame eigenvalue n*omega_a +- g*sqrt(n) at resonance (units of hbar).
/// Throws DomainError for n < 1.
double dressed_energy(int n, Branch branch, const SystemParams& p);

/// Same eigenvalue seen in the frame rotating at omega_drive: the excitation
/// number of |n,+-> is n, so the frame shift removes n*omega_drive.
double dressed_energy_rotating(int n, Branch branch, const SystemParams& p);

/// Emission frequency of the atomic-decay transition from -> to (to.n == from.n - 1).
double transition_frequency(const DressedState& from, const DressedState& to, const SystemParams& p);

/// <to| (identity (x) |0><1|) |from> for adjacent photon manifolds. With the
/// vectors above this is branch_sign(from)/2; every squared element is 1/4.
/// Throws DomainError unless to.n == from.n - 1 and to.n >= 1.
double transition_matrix_element(const DressedState& from, const DressedState& to);

}  // namespace mollow

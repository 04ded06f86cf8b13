#include "mollow/dressed_states.hpp"

#include <cmath>
#include <string>

#include "mollow/errors.hpp"

namespace mollow {

namespace {

// Photon-major product index of |photons>|atom>.
inline Eigen::Index product_index(int photons, int atom) { return 2 * photons + atom; }

}  // namespace

Vector dressed_state_vector(const DressedState& s, int n_max) {
  if (s.n < 1 || s.n >= n_max) {
    throw DomainError("dressed state |" + std::to_string(s.n) + ",+-> is outside 1.." +
                      std::to_string(n_max - 1));
  }
  const double amp = 1.0 / std::sqrt(2.0);
  Vector v = Vector::Zero(2 * n_max);
  v(product_index(s.n, 0)) = amp;
  v(product_index(s.n - 1, 1)) = branch_sign(s.branch) * amp;
  return v;
}

double dressed_energy(int n, Branch branch, const SystemParams& p) {
  if (n < 1) {
    throw DomainError("dressed_energy: n must be >= 1, got " + std::to_string(n));
  }
  return n * p.omega_a + branch_sign(branch) * p.g * std::sqrt(static_cast<double>(n));
}

double dressed_energy_rotating(int n, Branch branch, const SystemParams& p) {
  return dressed_energy(n, branch, p) - n * p.omega_drive;
}

double transition_frequency(const DressedState& from, const DressedState& to, const SystemParams& p) {
  if (to.n != from.n - 1) {
    throw DomainError("transition_frequency: photon manifolds must be adjacent");
  }
  return dressed_energy(from.n, from.branch, p) - dressed_energy(to.n, to.branch, p);
}

double transition_matrix_element(const DressedState& from, const DressedState& to) {
  if (to.n != from.n - 1 || to.n < 1) {
    throw DomainError("transition_matrix_element: need to.n == from.n - 1 >= 1, got " +
                      std::to_string(from.n) + " -> " + std::to_string(to.n));
  }
  // |0><1| keeps only the |n-1>|1> half of |from>, mapping it onto |n-1>|0>,
  // which is the first half of |to> with amplitude 1/sqrt(2).
  return 0.5 * branch_sign(from.branch);
}

}  // namespace mollow

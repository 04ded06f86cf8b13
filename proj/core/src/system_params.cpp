#include "mollow/system_params.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mollow/errors.hpp"
#include "mollow/types.hpp"

namespace mollow {

namespace {

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) {
    throw InvalidParameter(std::string("SystemParams.") + name + " is not finite");
  }
}

void require_nonnegative(double v, const char* name) {
  if (v < 0.0) {
    throw InvalidParameter(std::string("SystemParams.") + name + " must be >= 0");
  }
}

}  // namespace

void SystemParams::validate() const {
  require_finite(omega_r, "omega_r");
  require_finite(omega_a, "omega_a");
  require_finite(g, "g");
  require_finite(kappa, "kappa");
  require_finite(gamma1, "gamma1");
  require_finite(omega_drive, "omega_drive");
  require_finite(rabi_omega, "rabi_omega");
  require_nonnegative(omega_r, "omega_r");
  require_nonnegative(omega_a, "omega_a");
  require_nonnegative(g, "g");
  require_nonnegative(kappa, "kappa");
  require_nonnegative(gamma1, "gamma1");
  require_nonnegative(omega_drive, "omega_drive");
  require_nonnegative(rabi_omega, "rabi_omega");
  if (n_max < 2) {
    throw InvalidDimension("SystemParams.n_max must be >= 2, got " + std::to_string(n_max));
  }
  if (omega_r <= 0.0) {
    throw InvalidParameter("SystemParams.omega_r must be > 0");
  }
  const double largest = std::max({g, kappa, gamma1, rabi_omega, std::abs(cavity_detuning()),
                                   std::abs(atom_detuning())});
  if (largest / omega_r >= kRwaRatioLimit) {
    throw InvalidParameter("rotating-wave condition violated: max(g, kappa, gamma1, Omega, |detuning|)/omega_r = " +
                           std::to_string(largest / omega_r));
  }
}

SystemParams SystemParams::device_defaults() {
  SystemParams p;
  p.omega_r = angular(8.778 * kGHz);
  p.omega_a = p.omega_r;
  p.omega_drive = p.omega_r;
  p.g = angular(12.0 * kMHz);
  p.kappa = angular(5.2 * kMHz);
  p.gamma1 = angular(4.8 * kMHz);
  p.rabi_omega = angular(25.2 * kMHz);
  p.n_max = 64;
  return p;
}

}  // namespace mollow

#pragma once

namespace mollow {

/// Physical parameters of the driven atom-cavity system. All frequencies and
/// rates are angular (rad/s). n_max is the exclusive Fock cutoff, so photon
/// numbers 0..n_max-1 are represented.
struct SystemParams {
  double omega_r = 0.0;      // cavity
  double omega_a = 0.0;      // atom
  double g = 0.0;            // atom-cavity coupling
  double kappa = 0.0;        // cavity energy decay (FWHM)
  double gamma1 = 0.0;       // atomic relaxation
  double omega_drive = 0.0;  // drive carrier
  double rabi_omega = 0.0;   // drive amplitude
  int n_max = 64;

  double cavity_detuning() const { return omega_r - omega_drive; }
  double atom_detuning() const { return omega_a - omega_drive; }
  /// kappa' = (kappa + gamma1) / 2, the photon decay rate through the dressed states.
  double kappa_prime() const { return 0.5 * (kappa + gamma1); }

  /// Throws InvalidParameter for non-finite values, negative rates or a
  /// violated rotating-wave condition (every coupling, rate and detuning
  /// below 1e-2 * omega_r), and InvalidDimension for n_max < 2.
  void validate() const;

  /// Device values at the atom-cavity resonance: g/2pi = 12 MHz,
  /// kappa/2pi = 5.2 MHz, gamma1/2pi = 4.8 MHz, omega_r/2pi = 8.778 GHz,
  /// resonant drive with Omega/2pi = 25.2 MHz and n_max = 64.
  static SystemParams device_defaults();
};

inline constexpr double kRwaRatioLimit = 1e-2;

}  // namespace mollow

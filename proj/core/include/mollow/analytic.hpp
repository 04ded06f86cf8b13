#pragma once

#include <span>
#include <vector>

#include "mollow/spectrum.hpp"
#include "mollow/system_params.hpp"

namespace mollow {

// Closed-form spectra in units of hbar*omega_a per (rad/s); multiply by the
// numeric hbar*omega_a for absolute power.

/// Strong-coupling triplet: a Lorentzian centre plus Gaussian sidebands at
/// omega_a +- omega_s with omega_s = 2g sqrt(<n>).
struct AnalyticTripletParams {
  double omega_a = 0.0;
  double gamma1 = 0.0;
  double g = 0.0;
  double mean_n = 0.0;

  double omega_s() const;
  /// The sideband envelope assumes a large photon number; false below 5.
  bool large_n_regime() const { return mean_n >= 5.0; }
  static AnalyticTripletParams from(const SystemParams& p, double mean_n);
};

/// Resonantly driven free atom.
struct MollowParams {
  double omega_a = 0.0;
  double gamma1 = 0.0;
  double rabi = 0.0;

  double gamma_s() const { return 0.75 * gamma1; }
  static MollowParams from(const SystemParams& p);
};

enum class Side { lower, upper };

constexpr double side_sign(Side s) { return s == Side::upper ? 1.0 : -1.0; }

/// (1/2pi)(Gamma1/4) Gamma1 / ((omega - omega_a)^2 + (Gamma1/2)^2)
double central_peak(const AnalyticTripletParams& p, double omega);
/// (1/2pi)(Gamma1/8)(sqrt(2pi)/g) exp(-((omega - omega_a -+ omega_s)/g)^2 / 2);
/// Side::upper sits at omega_a + omega_s.
double side_peak(const AnalyticTripletParams& p, double omega, Side side);
double total_triplet(const AnalyticTripletParams& p, double omega);

/// (1/2pi)(Gamma1/8)[gs/((d+W)^2+gs^2) + Gamma1/(d^2+(Gamma1/2)^2) + gs/((d-W)^2+gs^2)],
/// d = omega - omega_a, gs = 3 Gamma1/4.
double mollow_triplet(const MollowParams& p, double omega);

/// Gaussian stand-in for the Poisson photon statistics. Throws DomainError
/// unless mean_n > 0.
double photon_distribution(double mean_n, double n);

/// Normalised density of sideband emission frequencies, standard deviation g.
double sideband_frequency_distribution(const AnalyticTripletParams& p, double omega, Side side);

/// Evaluates `f` on every grid point.
template <class F>
std::vector<double> sample(std::span<const double> grid, F&& f) {
  std::vector<double> out;
  out.reserve(grid.size());
  for (double w : grid) out.push_back(f(w));
  return out;
}

/// Wraps closed-form values as a spectrum trace with no coherent part.
SpectrumTrace analytic_trace(std::span<const double> grid, std::vector<double> psd, const SystemParams& params);

}  // namespace mollow

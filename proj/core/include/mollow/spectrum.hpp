#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mollow/density_matrix.hpp"
#include "mollow/liouvillian.hpp"
#include "mollow/propagate.hpp"
#include "mollow/system_params.hpp"
#include "mollow/types.hpp"

namespace mollow {

/// First-order correlation G1(tau) = Tr[s+ exp(L tau)(s- rho)] on a uniform
/// tau grid starting at 0. The coherent plateau <s+><s-> is included in
/// `values` and also stored separately.
struct CorrelationTrace {
  double tau_step = 0.0;
  std::vector<cplx> values;
  cplx asymptote{0.0};
  /// d^k/dtau^k [G1 - asymptote] at tau = 0 for k = 0, 1, ...; empty when
  /// unknown. Used for endpoint corrections of the trapezoid rule.
  std::vector<cplx> endpoint_derivatives;

  double tau_max() const { return values.empty() ? 0.0 : tau_step * static_cast<double>(values.size() - 1); }
};

struct CorrelationOptions {
  /// Highest derivative order recorded at tau = 0.
  int derivative_order = 11;
  PropagateOptions propagate{.tolerance = 1e-15, .max_terms = 120, .substep_norm = 3.0};
};

/// Samples G1 on n_tau points spanning [0, tau_max]. `rho` must be stationary
/// under L unless <s-> vanishes (e.g. an excited bare atom), in which case it
/// is simply the initial state. Throws DomainError for n_tau < 2 or
/// tau_max <= 0, InvalidParameter for a non-stationary rho with <s-> != 0.
CorrelationTrace correlation_g1(const Liouvillian& L, const DensityMatrix& rho, double tau_max, int n_tau,
                                const CorrelationOptions& opt = {});

/// Keeps sampling with spacing `tau_step` until max|G1 - asymptote| over the
/// final 5% of the window is below decay_tolerance * |G1(0) - asymptote|,
/// starting from min_tau_max and never exceeding max_tau.
/// Throws WindowTooShort if max_tau is reached first.
CorrelationTrace correlation_g1_until_decayed(const Liouvillian& L, const DensityMatrix& rho, double tau_step,
                                              double min_tau_max, double max_tau, double decay_tolerance,
                                              const CorrelationOptions& opt = {});

/// Power spectral density on an absolute (lab-frame) angular-frequency grid.
/// psd is in units of hbar*omega_a per (rad/s) and excludes the elastic
/// component, whose integrated weight sits in coherent_weight at omega_drive.
struct SpectrumTrace {
  std::vector<double> omega;
  std::vector<double> psd;
  double coherent_weight = 0.0;
  SystemParams params;
  /// Grid indices whose solve failed; their psd entries are NaN.
  std::vector<std::size_t> failed_points;

  double omega_drive() const { return params.omega_drive; }
};

/// Same data over ordinary frequency: S(f) = 2*pi*S(omega).
struct FrequencyDensityTrace {
  std::vector<double> frequency_hz;
  std::vector<double> psd_per_hz;
  double coherent_weight = 0.0;
  double drive_frequency_hz = 0.0;
};

inline constexpr double kDefaultHalfSpan = kTwoPi * 250.0 * kMHz;
inline constexpr int kDefaultGridPoints = 801;

/// `points` equally spaced values over [center - half_span, center + half_span].
std::vector<double> frequency_grid(double center, double half_span, int points);
/// omega_a +- 2pi*250 MHz with 801 points.
std::vector<double> default_frequency_grid(const SystemParams& p);

/// psd(omega) = (gamma1/pi) Re int_0^inf [G1 - asymptote] exp(-i(omega - omega_drive) tau) dtau
/// by the trapezoid rule with Euler-Maclaurin endpoint corrections taken from
/// endpoint_derivatives, and coherent_weight = gamma1 * |asymptote|.
/// Throws WindowTooShort if |G1(tau_max) - asymptote| > 1e-4 |G1(0) - asymptote|.
SpectrumTrace spectrum_from_correlation(const CorrelationTrace& c, const SystemParams& p,
                                        std::span<const double> omega_grid);

struct ResolventOptions {
  int workers = 1;
};

/// Frequency-domain route: one sparse LU solve of (L - i dw) x = -(s- rho - <s-> rho)
/// per grid point. A failed point is recorded in failed_points and left NaN.
SpectrumTrace spectrum_resolvent(const Liouvillian& L, const DensityMatrix& rho, const SystemParams& p,
                                 std::span<const double> omega_grid, const ResolventOptions& opt = {});

FrequencyDensityTrace as_frequency_density(const SpectrumTrace& s);
/// Inverse of as_frequency_density; `params` supplies the metadata snapshot.
SpectrumTrace from_frequency_density(const FrequencyDensityTrace& f, const SystemParams& params);

/// Trapezoid integral of y over x; non-finite samples are treated as gaps.
double integrate_trapezoid(std::span<const double> x, std::span<const double> y);

/// Integrated incoherent psd plus coherent weight.
double total_power(const SpectrumTrace& s);

/// psd with the elastic delta replaced by a unit-area Lorentzian of FWHM
/// `rbw` scaled by coherent_weight, mimicking a spectrum analyser.
std::vector<double> with_coherent_lorentzian(const SpectrumTrace& s, double rbw);

enum class SpectrumMethod { time_domain, resolvent };

struct SpectrumOptions {
  SpectrumMethod method = SpectrumMethod::resolvent;
  int workers = 1;
  /// Time-domain window is extended until the correlation decays to this fraction.
  double decay_tolerance = 1e-8;
  /// Largest (||L||_1 + max|dw|) * tau_step allowed for the trapezoid samples.
  double sample_phase = 1.0;
};

/// Spectrum of the steady state `rho` of L by the chosen route.
SpectrumTrace compute_spectrum(const Liouvillian& L, const DensityMatrix& rho, const SystemParams& p,
                               std::span<const double> omega_grid, const SpectrumOptions& opt = {});

}  // namespace mollow

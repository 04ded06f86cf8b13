#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mollow/fitting.hpp"
#include "mollow/spectrum.hpp"
#include "mollow/system_params.hpp"

namespace mollow {

/// Drive power at the cavity input mapped to a photon number and Rabi
/// frequency: <n> = P / (hbar omega_r kappa'), Omega = kappa' sqrt(<n>).
struct DriveCalibration {
  double power_dbm = 0.0;
  double power_watts = 0.0;
  double kappa_prime = 0.0;
  double mean_n = 0.0;
  double rabi_omega = 0.0;
};

/// 0 dBm = 1 mW; -infinity dBm is the undriven limit. Throws DomainError
/// unless kappa and gamma1 are positive.
DriveCalibration calibrate(double power_dbm, const SystemParams& p);

/// (Omega / kappa')^2
double mean_n_from_rabi(double rabi_omega, double kappa_prime);
/// kappa' sqrt(<n>)
double rabi_from_mean_n(double mean_n, double kappa_prime);

/// (offset / 2g)^2. Throws DomainError unless offset, g > 0.
double mean_n_from_sidebands(double offset, double g);

/// Drive amplitude whose steady state holds `target_n` intracavity photons at
/// the truncation p.n_max, found by secant steps on log <n> versus log Omega.
/// Throws DomainError unless target_n > 0, ConvergenceError if the relative
/// photon-number error stays above `tolerance`.
double rabi_for_photon_number(const SystemParams& p, double target_n, double tolerance = 1e-6);

/// ceil(<n> + 8 sqrt(<n>) + 4)
int adaptive_n_max(double mean_n);

struct SimulationOptions {
  SpectrumOptions spectrum;
  /// Absolute angular frequencies; empty means default_frequency_grid.
  std::vector<double> grid;
  TripletOptions triplet;
};

/// Steady-state observables, spectrum and peak metrics at one parameter point.
struct PointResult {
  SystemParams params;
  double steady_state_residual = 0.0;
  double mean_photons = 0.0;
  double excited_population = 0.0;
  SpectrumTrace spectrum;
  TripletMetrics metrics;
};

PointResult simulate_point(const SystemParams& p, const SimulationOptions& opt = {});

struct SweepOptions {
  SimulationOptions simulation{.spectrum = {.method = SpectrumMethod::resolvent}, .grid = {}, .triplet = {}};
  /// Sweep points evaluated concurrently.
  int workers = 1;
  /// Points whose adaptive n_max exceeds this are recorded as failed.
  int n_max_cap = 128;
};

struct SweepPoint {
  DriveCalibration calibration;
  int n_max = 0;
  std::optional<PointResult> result;
  std::string error_kind;
  std::string error;
};

struct SweepResult {
  SystemParams params;
  std::vector<SweepPoint> points;

  std::size_t failures() const;
};

/// calibrate -> steady state -> spectrum -> metrics for each power, with a
/// per-point n_max. Individual failures are recorded; throws DomainError for
/// unsorted powers and SweepFailed when no point succeeds.
SweepResult run_sweep(const SystemParams& p, std::span<const double> powers_dbm, const SweepOptions& opt = {});

struct WidthRow {
  double power_dbm = 0.0;
  double mean_n = 0.0;  // from the sideband offset
  double width = 0.0;   // mean fitted sideband width
  double reference = 0.0;  // 2g
};

/// One row per sweep point with both sidebands fitted. Throws
/// InsufficientData when fewer than three such points exist.
std::vector<WidthRow> width_vs_n_report(const SweepResult& sweep, double g);

}  // namespace mollow

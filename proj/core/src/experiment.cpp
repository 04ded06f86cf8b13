#include "mollow/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "mollow/errors.hpp"
#include "mollow/liouvillian.hpp"
#include "mollow/operators.hpp"
#include "mollow/steady_state.hpp"

namespace mollow {

DriveCalibration calibrate(double power_dbm, const SystemParams& p) {
  if (!(p.kappa > 0.0) || !(p.gamma1 > 0.0)) throw DomainError("calibrate: kappa and gamma1 must be > 0");
  if (std::isnan(power_dbm)) throw DomainError("calibrate: power is NaN");
  DriveCalibration c;
  c.power_dbm = power_dbm;
  c.power_watts = std::pow(10.0, (power_dbm - 30.0) / 10.0);
  c.kappa_prime = p.kappa_prime();
  c.mean_n = c.power_watts / (kHbar * p.omega_r * c.kappa_prime);
  c.rabi_omega = rabi_from_mean_n(c.mean_n, c.kappa_prime);
  return c;
}

double mean_n_from_rabi(double rabi_omega, double kappa_prime) {
  const double r = rabi_omega / kappa_prime;
  return r * r;
}

double rabi_from_mean_n(double mean_n, double kappa_prime) { return kappa_prime * std::sqrt(mean_n); }

double mean_n_from_sidebands(double offset, double g) {
  if (!(offset > 0.0) || !(g > 0.0)) throw DomainError("mean_n_from_sidebands: offset and g must be > 0");
  const double r = offset / (2.0 * g);
  return r * r;
}

double rabi_for_photon_number(const SystemParams& p, double target_n, double tolerance) {
  if (!(target_n > 0.0) || !std::isfinite(target_n)) throw DomainError("rabi_for_photon_number: target must be > 0");
  auto photons = [&](double rabi) {
    SystemParams q = p;
    q.rabi_omega = rabi;
    const Liouvillian L = build_system_liouvillian(q);
    return expectation(product_operators(q.n_max).photon_number, steady_state(L)).real();
  };
  // Empty-cavity estimate <n> = (Omega/kappa)^2 as the first point.
  double x0 = std::log(p.kappa * std::sqrt(target_n));
  double f0 = std::log(photons(std::exp(x0))) - std::log(target_n);
  double x1 = x0 - 0.5 * f0;
  for (int iter = 0; iter < 40; ++iter) {
    const double f1 = std::log(photons(std::exp(x1))) - std::log(target_n);
    if (std::abs(f1) <= tolerance) return std::exp(x1);
    const double slope = (f1 - f0) / (x1 - x0);
    const double next = x1 - f1 / (std::isfinite(slope) && slope > 0.1 ? slope : 2.0);
    x0 = x1;
    f0 = f1;
    x1 = next;
  }
  throw ConvergenceError("rabi_for_photon_number: no drive found for <n> = " + std::to_string(target_n));
}

int adaptive_n_max(double mean_n) {
  return static_cast<int>(std::ceil(mean_n + 8.0 * std::sqrt(std::max(mean_n, 0.0)) + 4.0));
}

PointResult simulate_point(const SystemParams& p, const SimulationOptions& opt) {
  p.validate();
  const Liouvillian L = build_system_liouvillian(p);
  SteadyStateReport report;
  const DensityMatrix rho = steady_state(L, {}, &report);
  const ProductOperators ops = product_operators(p.n_max);

  PointResult r;
  r.params = p;
  r.steady_state_residual = report.residual;
  r.mean_photons = expectation(ops.photon_number, rho).real();
  r.excited_population = expectation(ops.excited_projector, rho).real();
  const std::vector<double> grid = opt.grid.empty() ? default_frequency_grid(p) : opt.grid;
  r.spectrum = compute_spectrum(L, rho, p, grid, opt.spectrum);
  r.metrics = triplet_metrics(r.spectrum, opt.triplet);
  return r;
}

std::size_t SweepResult::failures() const {
  return static_cast<std::size_t>(
      std::count_if(points.begin(), points.end(), [](const SweepPoint& s) { return !s.result.has_value(); }));
}

SweepResult run_sweep(const SystemParams& p, std::span<const double> powers_dbm, const SweepOptions& opt) {
  for (std::size_t i = 1; i < powers_dbm.size(); ++i) {
    if (!(powers_dbm[i] > powers_dbm[i - 1])) throw DomainError("run_sweep: powers must be strictly increasing");
  }
  SweepResult sweep;
  sweep.params = p;
  sweep.points.resize(powers_dbm.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < powers_dbm.size(); i = next++) {
      SweepPoint& pt = sweep.points[i];
      try {
        pt.calibration = calibrate(powers_dbm[i], p);
        pt.n_max = adaptive_n_max(pt.calibration.mean_n);
        if (pt.n_max > opt.n_max_cap) {
          throw InvalidDimension("adaptive n_max " + std::to_string(pt.n_max) + " exceeds the cap of " +
                                 std::to_string(opt.n_max_cap));
        }
        SystemParams q = p;
        q.rabi_omega = pt.calibration.rabi_omega;
        q.n_max = pt.n_max;
        pt.result = simulate_point(q, opt.simulation);
      } catch (const Error& e) {
        pt.error_kind = e.kind();
        pt.error = e.what();
      } catch (const std::exception& e) {
        pt.error_kind = "error";
        pt.error = e.what();
      }
    }
  };

  const int workers = std::max(1, std::min<int>(opt.workers, static_cast<int>(powers_dbm.size())));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
  }

  if (!sweep.points.empty() && sweep.failures() == sweep.points.size()) {
    throw SweepFailed("all " + std::to_string(sweep.points.size()) + " sweep points failed; first: " +
                      sweep.points.front().error);
  }
  return sweep;
}

std::vector<WidthRow> width_vs_n_report(const SweepResult& sweep, double g) {
  std::vector<WidthRow> rows;
  for (const SweepPoint& pt : sweep.points) {
    if (!pt.result || !pt.result->metrics.has_sidebands()) continue;
    const TripletMetrics& m = pt.result->metrics;
    rows.push_back({.power_dbm = pt.calibration.power_dbm,
                    .mean_n = mean_n_from_sidebands(*m.sideband_offset, g),
                    .width = 0.5 * (m.lower->width + m.upper->width),
                    .reference = 2.0 * g});
  }
  if (rows.size() < 3) {
    throw InsufficientData("width report needs at least 3 points with sidebands, found " +
                           std::to_string(rows.size()));
  }
  return rows;
}

}  // namespace mollow

#include <cmath>
#include <limits>

#include "doctest.h"
#include "mollow/analytic.hpp"
#include "mollow/errors.hpp"
#include "mollow/experiment.hpp"
#include "mollow/liouvillian.hpp"
#include "mollow/operators.hpp"
#include "mollow/steady_state.hpp"

using namespace mollow;

namespace {

SystemParams device() { return SystemParams::device_defaults(); }

SystemParams with_kappa_prime_5() {
  SystemParams p = device();
  p.kappa = angular(5.2 * kMHz);
  p.gamma1 = angular(4.8 * kMHz);
  return p;
}

SweepOptions quick_sweep() {
  SweepOptions o;
  o.simulation.spectrum.method = SpectrumMethod::time_domain;
  o.simulation.grid = frequency_grid(device().omega_a, angular(250.0 * kMHz), 401);
  return o;
}

}  // namespace

TEST_CASE("calibration follows the photon-flux relation") {
  const SystemParams p = with_kappa_prime_5();
  const auto c = calibrate(-113.5, p);
  CHECK(c.power_watts == doctest::Approx(std::pow(10.0, -14.35)).epsilon(1e-14));
  CHECK(c.kappa_prime == doctest::Approx(angular(5.0 * kMHz)));
  // independent recomputation from SI constants
  const double expected = 4.466835921509635e-15 / (1.054571817e-34 * angular(8.778e9) * angular(5.0e6));
  CHECK(c.mean_n == doctest::Approx(expected).epsilon(1e-12));
  CHECK(std::abs(c.mean_n - 25.4) < 0.05 * 25.4);
  CHECK(c.rabi_omega == doctest::Approx(c.kappa_prime * std::sqrt(c.mean_n)).epsilon(1e-15));
}

TEST_CASE("photon number and drive amplitude are inverse") {
  const double kp = angular(5.0 * kMHz);
  CHECK(rabi_from_mean_n(25.4, kp) == doctest::Approx(angular(25.2 * kMHz)).epsilon(1e-3));
  CHECK(mean_n_from_rabi(angular(25.2 * kMHz), kp) == doctest::Approx(25.4).epsilon(1e-3));
  for (double n : {0.5, 3.0, 25.4, 100.0}) {
    CHECK(mean_n_from_rabi(rabi_from_mean_n(n, kp), kp) == doctest::Approx(n).epsilon(1e-14));
  }
}

TEST_CASE("calibration edge cases") {
  const SystemParams p = device();
  const auto off = calibrate(-std::numeric_limits<double>::infinity(), p);
  CHECK(off.power_watts == 0.0);
  CHECK(off.mean_n == 0.0);
  CHECK(off.rabi_omega == 0.0);
  SystemParams bad = p;
  bad.kappa = 0.0;
  CHECK_THROWS_AS(calibrate(-110.0, bad), DomainError);
  CHECK_THROWS_AS(calibrate(std::nan(""), p), DomainError);
  double last_n = 0.0, last_rabi = 0.0;
  for (double dbm = -130.0; dbm <= -100.0; dbm += 0.5) {
    const auto c = calibrate(dbm, p);
    CHECK(c.mean_n > last_n);
    CHECK(c.rabi_omega > last_rabi);
    last_n = c.mean_n;
    last_rabi = c.rabi_omega;
  }
}

TEST_CASE("photon number from sideband offsets") {
  const double g = angular(12.0 * kMHz);
  CHECK(mean_n_from_sidebands(angular(121.0 * kMHz), g) == doctest::Approx(25.4).epsilon(1e-3));
  CHECK(mean_n_from_sidebands(2.0 * g, g) == doctest::Approx(1.0).epsilon(1e-15));
  for (double n : {0.3, 1.0, 7.5, 25.4, 1e3}) {
    const auto a = AnalyticTripletParams{.omega_a = 0.0, .gamma1 = 1.0, .g = g, .mean_n = n};
    CHECK(std::abs(mean_n_from_sidebands(a.omega_s(), g) - n) <= 4.0 * std::numeric_limits<double>::epsilon() * n);
  }
  CHECK_THROWS_AS(mean_n_from_sidebands(0.0, g), DomainError);
  CHECK_THROWS_AS(mean_n_from_sidebands(1.0, -g), DomainError);
}

TEST_CASE("adaptive truncation") {
  CHECK(adaptive_n_max(0.0) == 4);
  CHECK(adaptive_n_max(25.4) == static_cast<int>(std::ceil(25.4 + 8.0 * std::sqrt(25.4) + 4.0)));
  CHECK(adaptive_n_max(100.0) == 184);
}

TEST_CASE("drive for a target photon number") {
  SystemParams p = device();
  p.n_max = 24;
  const double target = 3.0;
  const double rabi = rabi_for_photon_number(p, target);
  p.rabi_omega = rabi;
  const auto rho = steady_state(build_system_liouvillian(p));
  CHECK(expectation(product_operators(p.n_max).photon_number, rho).real() == doctest::Approx(target).epsilon(1e-6));
  CHECK_THROWS_AS(rabi_for_photon_number(p, 0.0), DomainError);
}

TEST_CASE("single point simulation") {
  SystemParams p = device();
  p.n_max = 16;
  p.rabi_omega = angular(10.0 * kMHz);
  SimulationOptions o;
  o.spectrum.method = SpectrumMethod::time_domain;
  o.grid = frequency_grid(p.omega_a, angular(100.0 * kMHz), 201);
  const auto r = simulate_point(p, o);
  CHECK(r.steady_state_residual < 1e-10);
  CHECK(r.mean_photons > 0.0);
  CHECK(r.excited_population > 0.0);
  CHECK(r.spectrum.omega.size() == 201);
  CHECK(r.metrics.central);
  SystemParams bad = p;
  bad.n_max = 1;
  CHECK_THROWS_AS(simulate_point(bad, o), InvalidDimension);
}

TEST_CASE("power sweep") {
  const SystemParams p = device();
  const std::vector<double> powers{-115.5, -114.5, -113.5};
  const auto opt = quick_sweep();
  const auto a = run_sweep(p, powers, opt);
  REQUIRE(a.points.size() == 3);
  CHECK(a.failures() == 0);
  double last = 0.0;
  for (std::size_t i = 0; i < powers.size(); ++i) {
    const auto& pt = a.points[i];
    CHECK(pt.calibration.power_dbm == powers[i]);
    CHECK(pt.n_max == adaptive_n_max(pt.calibration.mean_n));
    REQUIRE(pt.result);
    REQUIRE(pt.result->metrics.has_sidebands());
    CHECK(*pt.result->metrics.sideband_offset > last);
    last = *pt.result->metrics.sideband_offset;
  }
  SweepOptions threaded = opt;
  threaded.workers = 2;
  const auto b = run_sweep(p, powers, threaded);
  for (std::size_t i = 0; i < powers.size(); ++i) {
    CHECK(a.points[i].result->spectrum.psd == b.points[i].result->spectrum.psd);
    CHECK(a.points[i].result->metrics.central->width == b.points[i].result->metrics.central->width);
  }
}

TEST_CASE("sweep failures") {
  const SystemParams p = device();
  auto opt = quick_sweep();
  const std::vector<double> unsorted{-110.0, -120.0};
  CHECK_THROWS_AS(run_sweep(p, unsorted, opt), DomainError);
  opt.n_max_cap = 3;
  const std::vector<double> powers{-120.0, -119.0};
  CHECK_THROWS_AS(run_sweep(p, powers, opt), SweepFailed);

  // an undriven point degrades gracefully, a point above the cap is recorded
  opt.n_max_cap = 40;
  const std::vector<double> mixed{-std::numeric_limits<double>::infinity(), -119.0, -100.0};
  const auto s = run_sweep(p, mixed, opt);
  REQUIRE(s.points[0].result);
  CHECK_FALSE(s.points[0].result->metrics.central);
  CHECK(s.points[1].result);
  CHECK_FALSE(s.points[2].result);
  CHECK(s.points[2].error_kind == std::string("invalid-dimension"));
  CHECK(s.failures() == 1);
}

TEST_CASE("width report") {
  const SystemParams p = device();
  SweepResult sweep;
  sweep.params = p;
  const auto grid = frequency_grid(p.omega_a, angular(300.0 * kMHz), 961);
  for (double n : {10.0, 18.0, 25.4, 30.0}) {
    const auto a = AnalyticTripletParams::from(p, n);
    SweepPoint pt;
    pt.calibration.power_dbm = -120.0 + n;
    PointResult r;
    r.params = p;
    r.spectrum = analytic_trace(grid, sample(grid, [&](double w) { return total_triplet(a, w); }), p);
    r.metrics = triplet_metrics(r.spectrum);
    pt.result = r;
    sweep.points.push_back(pt);
  }
  const auto rows = width_vs_n_report(sweep, p.g);
  REQUIRE(rows.size() == 4);
  const double ns[] = {10.0, 18.0, 25.4, 30.0};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].reference == 2.0 * p.g);
    CHECK(rows[i].width == doctest::Approx(2.0 * p.g).epsilon(1e-2));
    CHECK(rows[i].mean_n == doctest::Approx(ns[i]).epsilon(1e-2));
  }
  sweep.points.resize(2);
  CHECK_THROWS_AS(width_vs_n_report(sweep, p.g), InsufficientData);
  CHECK_THROWS_AS(width_vs_n_report(SweepResult{}, p.g), InsufficientData);
}

#include "mollow/analytic.hpp"

#include <cmath>
#include <numbers>

#include "mollow/errors.hpp"

namespace mollow {

namespace {

constexpr double kInvTwoPi = 1.0 / kTwoPi;
const double kSqrtTwoPi = std::sqrt(kTwoPi);

double lorentz(double d, double half_width) { return half_width / (d * d + half_width * half_width); }

}  // namespace

double AnalyticTripletParams::omega_s() const { return 2.0 * g * std::sqrt(mean_n); }

AnalyticTripletParams AnalyticTripletParams::from(const SystemParams& p, double mean_n) {
  return {.omega_a = p.omega_a, .gamma1 = p.gamma1, .g = p.g, .mean_n = mean_n};
}

MollowParams MollowParams::from(const SystemParams& p) {
  return {.omega_a = p.omega_a, .gamma1 = p.gamma1, .rabi = p.rabi_omega};
}

double central_peak(const AnalyticTripletParams& p, double omega) {
  const double d = omega - p.omega_a;
  const double half = 0.5 * p.gamma1;
  return kInvTwoPi * 0.25 * p.gamma1 * p.gamma1 / (d * d + half * half);
}

double side_peak(const AnalyticTripletParams& p, double omega, Side side) {
  const double z = (omega - p.omega_a - side_sign(side) * p.omega_s()) / p.g;
  return kInvTwoPi * (p.gamma1 / 8.0) * (kSqrtTwoPi / p.g) * std::exp(-0.5 * z * z);
}

double total_triplet(const AnalyticTripletParams& p, double omega) {
  return central_peak(p, omega) + side_peak(p, omega, Side::lower) + side_peak(p, omega, Side::upper);
}

double mollow_triplet(const MollowParams& p, double omega) {
  const double d = omega - p.omega_a;
  const double gs = p.gamma_s();
  const double bracket = lorentz(d + p.rabi, gs) + 2.0 * lorentz(d, 0.5 * p.gamma1) + lorentz(d - p.rabi, gs);
  return kInvTwoPi * (p.gamma1 / 8.0) * bracket;
}

double photon_distribution(double mean_n, double n) {
  if (!(mean_n > 0.0)) throw DomainError("photon_distribution: mean_n must be > 0");
  const double d = n - mean_n;
  return std::exp(-d * d / (2.0 * mean_n)) / std::sqrt(kTwoPi * mean_n);
}

double sideband_frequency_distribution(const AnalyticTripletParams& p, double omega, Side side) {
  const double z = (omega - p.omega_a - side_sign(side) * p.omega_s()) / p.g;
  return std::exp(-0.5 * z * z) / (kSqrtTwoPi * p.g);
}

SpectrumTrace analytic_trace(std::span<const double> grid, std::vector<double> psd, const SystemParams& params) {
  if (grid.size() != psd.size()) throw InvalidDimension("analytic_trace: grid and psd lengths differ");
  SpectrumTrace t;
  t.omega.assign(grid.begin(), grid.end());
  t.psd = std::move(psd);
  t.params = params;
  return t;
}

}  // namespace mollow

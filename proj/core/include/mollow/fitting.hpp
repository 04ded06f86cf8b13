#pragma once

#include <optional>
#include <span>
#include <vector>

#include "mollow/spectrum.hpp"

namespace mollow {

enum class PeakModel { lorentzian, gaussian };

/// Lorentzian: height*(w/2)^2/((omega-c)^2+(w/2)^2) + baseline, width = FWHM.
/// Gaussian: height*exp(-2((omega-c)/w)^2) + baseline, width = 1/e^2 half-width.
struct FitResult {
  PeakModel model = PeakModel::lorentzian;
  double center = 0.0;
  double width = 0.0;
  double height = 0.0;
  double baseline = 0.0;
  double residual_norm = 0.0;
  bool converged = false;
  int iterations = 0;
};

struct FitWindow {
  double lo = 0.0;
  double hi = 0.0;
};

struct FitOptions {
  int max_iterations = 500;
  double gradient_tolerance = 1e-8;  // relative to the initial gradient norm
};

/// Evaluates the model described by `fit` at omega.
double peak_model(const FitResult& fit, double omega);

/// Levenberg-Marquardt fit of `model` to the samples inside `window`.
/// Throws FitError when the window holds no peak (or more than one prominent
/// maximum above 3x the median of y); returns converged = false when the
/// iteration budget runs out.
FitResult fit_peak(std::span<const double> x, std::span<const double> y, FitWindow window, PeakModel model,
                   const FitOptions& opt = {});

/// fit_peak on the incoherent psd; throws ConvergenceError if the fit does not converge.
FitResult fit_lorentzian(const SpectrumTrace& trace, FitWindow window, const FitOptions& opt = {});
FitResult fit_gaussian(const SpectrumTrace& trace, FitWindow window, const FitOptions& opt = {});

struct Peak {
  std::size_t index = 0;
  double prominence = 0.0;
};

/// Local maxima of y whose topographic prominence is at least
/// min_prominence * max(y), in increasing index order. Non-finite samples never qualify.
std::vector<Peak> find_peaks(std::span<const double> y, double min_prominence = 0.05);

struct TripletOptions {
  /// Resolution bandwidth (FWHM, rad/s) used to re-broaden the coherent part.
  double rbw = kTwoPi * 1.0 * kMHz;
  double min_prominence = 0.05;
  /// Each fit uses +- fit_span_fwhm half-maximum widths around its peak,
  /// clipped to the peak's share of the spectrum.
  double fit_span_fwhm = 3.0;
  FitOptions fit;
};

/// Peak analysis of a triplet. Without three separated peaks the result
/// carries the central fit only and the sideband fields stay empty; a flat
/// spectrum leaves every field empty.
struct TripletMetrics {
  std::optional<FitResult> central;
  std::optional<FitResult> lower;
  std::optional<FitResult> upper;
  /// Central maximum over the mean sideband maximum.
  std::optional<double> height_ratio;
  /// Central-window power over the summed sideband-window power.
  std::optional<double> integrated_ratio;
  /// Half the distance between the fitted sideband centres.
  std::optional<double> sideband_offset;

  bool has_sidebands() const { return lower.has_value() && upper.has_value(); }
};

TripletMetrics triplet_metrics(const SpectrumTrace& trace, const TripletOptions& opt = {});

}  // namespace mollow

#include "mollow/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "mollow/errors.hpp"

namespace mollow {

namespace {

using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

// Parameters in normalised coordinates: (center, width, height, baseline).
struct Normalised {
  std::vector<double> u;
  std::vector<double> v;
};

double model_value(PeakModel m, const Vec4& p, double u) {
  const double d = u - p[0];
  if (m == PeakModel::lorentzian) {
    const double q = 0.25 * p[1] * p[1];
    return p[2] * q / (d * d + q) + p[3];
  }
  const double z = d / p[1];
  return p[2] * std::exp(-2.0 * z * z) + p[3];
}

Vec4 model_gradient(PeakModel m, const Vec4& p, double u) {
  const double d = u - p[0];
  Vec4 j;
  if (m == PeakModel::lorentzian) {
    const double q = 0.25 * p[1] * p[1];
    const double den = d * d + q;
    const double den2 = den * den;
    j << p[2] * q * 2.0 * d / den2, p[2] * 0.5 * p[1] * d * d / den2, q / den, 1.0;
  } else {
    const double z = d / p[1];
    const double e = std::exp(-2.0 * z * z);
    j << p[2] * e * 4.0 * z / p[1], p[2] * e * 4.0 * z * z / p[1], e, 1.0;
  }
  return j;
}

double cost(PeakModel m, const Vec4& p, const Normalised& data) {
  double s = 0.0;
  for (std::size_t i = 0; i < data.u.size(); ++i) {
    const double r = model_value(m, p, data.u[i]) - data.v[i];
    s += r * r;
  }
  return s;
}

double median_finite(std::span<const double> y) {
  std::vector<double> v;
  v.reserve(y.size());
  for (double a : y) {
    if (std::isfinite(a)) v.push_back(a);
  }
  if (v.empty()) return 0.0;
  auto mid = v.begin() + static_cast<long>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  return *mid;
}

// Full width at half maximum around index k (ignoring any baseline), by
// linear interpolation; NaN when neither side crosses half height.
double fwhm_estimate(std::span<const double> x, std::span<const double> y, std::size_t k, std::size_t lo,
                     std::size_t hi, double floor_level) {
  const double half = floor_level + 0.5 * (y[k] - floor_level);
  double left = std::numeric_limits<double>::quiet_NaN();
  double right = left;
  for (std::size_t i = k; i > lo; --i) {
    if (std::isfinite(y[i - 1]) && y[i - 1] <= half) {
      left = x[i - 1] + (half - y[i - 1]) * (x[i] - x[i - 1]) / (y[i] - y[i - 1]);
      break;
    }
  }
  for (std::size_t i = k; i + 1 <= hi; ++i) {
    if (std::isfinite(y[i + 1]) && y[i + 1] <= half) {
      right = x[i] + (y[i] - half) * (x[i + 1] - x[i]) / (y[i] - y[i + 1]);
      break;
    }
  }
  if (std::isfinite(left) && std::isfinite(right)) return right - left;
  if (std::isfinite(left)) return 2.0 * (x[k] - left);
  if (std::isfinite(right)) return 2.0 * (right - x[k]);
  return std::numeric_limits<double>::quiet_NaN();
}

double refined_maximum(std::span<const double> y, std::size_t k) {
  if (k == 0 || k + 1 >= y.size()) return y[k];
  const double a = y[k - 1], b = y[k], c = y[k + 1];
  const double curvature = a - 2.0 * b + c;
  if (!(curvature < 0.0) || !std::isfinite(a) || !std::isfinite(c)) return b;
  return b - (a - c) * (a - c) / (8.0 * curvature);
}

std::size_t argmin_between(std::span<const double> y, std::size_t a, std::size_t b) {
  std::size_t best = a;
  for (std::size_t i = a; i <= b; ++i) {
    if (std::isfinite(y[i]) && (!std::isfinite(y[best]) || y[i] < y[best])) best = i;
  }
  return best;
}

}  // namespace

double peak_model(const FitResult& fit, double omega) {
  const Vec4 p(fit.center, fit.width, fit.height, fit.baseline);
  return model_value(fit.model, p, omega);
}

std::vector<Peak> find_peaks(std::span<const double> y, double min_prominence) {
  std::vector<Peak> peaks;
  double top = -std::numeric_limits<double>::infinity();
  for (double v : y) {
    if (std::isfinite(v)) top = std::max(top, v);
  }
  if (!std::isfinite(top) || top <= 0.0) return peaks;
  const std::size_t n = y.size();
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (!std::isfinite(y[k]) || !(y[k] > y[k - 1]) || !(y[k] >= y[k + 1])) continue;
    // Walk outwards to the nearest higher sample on each side.
    double left_min = y[k];
    for (std::size_t i = k; i-- > 0;) {
      if (!std::isfinite(y[i])) continue;
      if (y[i] > y[k]) break;
      left_min = std::min(left_min, y[i]);
    }
    double right_min = y[k];
    for (std::size_t i = k + 1; i < n; ++i) {
      if (!std::isfinite(y[i])) continue;
      if (y[i] > y[k]) break;
      right_min = std::min(right_min, y[i]);
    }
    const double prominence = y[k] - std::max(left_min, right_min);
    if (prominence >= min_prominence * top) peaks.push_back({k, prominence});
  }
  return peaks;
}

FitResult fit_peak(std::span<const double> x, std::span<const double> y, FitWindow window, PeakModel model,
                   const FitOptions& opt) {
  if (x.size() != y.size()) throw InvalidDimension("fit_peak: x and y lengths differ");
  if (!(window.hi > window.lo)) throw FitError("fit window is empty");

  std::size_t lo = x.size(), hi = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] >= window.lo && x[i] <= window.hi) {
      lo = std::min(lo, i);
      hi = std::max(hi, i);
    }
  }
  if (lo >= x.size() || hi < lo + 4) throw FitError("fit window holds fewer than 5 samples");

  const auto xs = x.subspan(lo, hi - lo + 1);
  const auto ys = y.subspan(lo, hi - lo + 1);
  const double threshold = 3.0 * median_finite(y);
  std::vector<Peak> candidates;
  for (const Peak& pk : find_peaks(ys)) {
    if (ys[pk.index] > threshold) candidates.push_back(pk);
  }
  if (candidates.empty()) throw FitError("no peak in fit window");
  if (candidates.size() > 1) {
    throw FitError("fit window holds " + std::to_string(candidates.size()) + " peaks");
  }
  const std::size_t k = candidates.front().index;

  double ymin = std::numeric_limits<double>::infinity();
  for (double v : ys) {
    if (std::isfinite(v)) ymin = std::min(ymin, v);
  }
  const double ypeak = ys[k];
  const double xc = xs[k];
  const double xscale = 0.5 * (xs.back() - xs.front());
  const double yscale = std::abs(ypeak);

  Normalised data;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(ys[i])) continue;
    data.u.push_back((xs[i] - xc) / xscale);
    data.v.push_back(ys[i] / yscale);
  }

  double fwhm = fwhm_estimate(xs, ys, k, 0, xs.size() - 1, ymin);
  if (!std::isfinite(fwhm) || !(fwhm > 0.0)) fwhm = xscale;
  double w0 = fwhm / xscale;
  if (model == PeakModel::gaussian) w0 /= std::sqrt(2.0 * std::log(2.0));

  Vec4 p(0.0, w0, (ypeak - ymin) / yscale, ymin / yscale);
  double c = cost(model, p, data);
  double lambda = 1e-3;
  double g0 = -1.0;
  FitResult out;
  out.model = model;

  int iter = 0;
  for (; iter < opt.max_iterations; ++iter) {
    Mat4 a = Mat4::Zero();
    Vec4 grad = Vec4::Zero();
    for (std::size_t i = 0; i < data.u.size(); ++i) {
      const Vec4 j = model_gradient(model, p, data.u[i]);
      const double r = model_value(model, p, data.u[i]) - data.v[i];
      a.noalias() += j * j.transpose();
      grad += j * r;
    }
    const double gnorm = grad.norm();
    if (g0 < 0.0) g0 = gnorm;
    if (gnorm <= opt.gradient_tolerance * g0 || gnorm == 0.0) {
      out.converged = true;
      break;
    }
    bool accepted = false;
    while (lambda < 1e20) {
      Mat4 damped = a;
      damped.diagonal() += lambda * a.diagonal();
      const Vec4 step = damped.ldlt().solve(-grad);
      const Vec4 trial = p + step;
      const double tc = trial[1] > 0.0 && trial.allFinite() ? cost(model, trial, data)
                                                            : std::numeric_limits<double>::infinity();
      if (tc < c) {
        const bool stalled = step.norm() <= 1e-15 * (p.norm() + 1e-300);
        p = trial;
        c = tc;
        lambda = std::max(lambda / 10.0, 1e-15);
        accepted = !stalled;
        if (stalled) lambda = 1e20;
        break;
      }
      lambda *= 10.0;
    }
    if (!accepted) {
      // No downhill step is representable: a numerical minimum.
      out.converged = true;
      ++iter;
      break;
    }
  }

  out.iterations = iter;
  out.center = xc + p[0] * xscale;
  out.width = std::abs(p[1]) * xscale;
  out.height = p[2] * yscale;
  out.baseline = p[3] * yscale;
  out.residual_norm = std::sqrt(c) * yscale;
  if (!(out.width > 0.0)) out.converged = false;
  return out;
}

namespace {

FitResult checked_fit(const SpectrumTrace& trace, FitWindow window, PeakModel model, const FitOptions& opt) {
  FitResult r = fit_peak(trace.omega, trace.psd, window, model, opt);
  if (!r.converged) {
    throw ConvergenceError("peak fit did not converge within " + std::to_string(opt.max_iterations) +
                           " iterations");
  }
  return r;
}

}  // namespace

FitResult fit_lorentzian(const SpectrumTrace& trace, FitWindow window, const FitOptions& opt) {
  return checked_fit(trace, window, PeakModel::lorentzian, opt);
}

FitResult fit_gaussian(const SpectrumTrace& trace, FitWindow window, const FitOptions& opt) {
  return checked_fit(trace, window, PeakModel::gaussian, opt);
}

TripletMetrics triplet_metrics(const SpectrumTrace& trace, const TripletOptions& opt) {
  const std::vector<double> y =
      trace.coherent_weight > 0.0 ? with_coherent_lorentzian(trace, opt.rbw) : trace.psd;
  const std::span<const double> x = trace.omega;
  TripletMetrics m;
  if (x.size() < 5) return m;

  const auto peaks = find_peaks(y, opt.min_prominence);
  if (peaks.empty()) return m;

  auto centre_it = std::max_element(peaks.begin(), peaks.end(),
                                    [&](const Peak& a, const Peak& b) { return y[a.index] < y[b.index]; });
  const std::size_t kc = centre_it->index;
  std::optional<std::size_t> kl, ku;
  for (const Peak& pk : peaks) {
    if (pk.index < kc && (!kl || y[pk.index] > y[*kl])) kl = pk.index;
    if (pk.index > kc && (!ku || y[pk.index] > y[*ku])) ku = pk.index;
  }

  std::size_t split_lo = 0, split_hi = x.size() - 1;
  bool triplet = kl && ku;
  if (triplet) {
    split_lo = argmin_between(y, *kl, kc);
    split_hi = argmin_between(y, kc, *ku);
    triplet = y[split_lo] < 0.5 * std::min(y[*kl], y[kc]) && y[split_hi] < 0.5 * std::min(y[*ku], y[kc]);
    if (!triplet) {
      split_lo = 0;
      split_hi = x.size() - 1;
    }
  }

  auto window_for = [&](std::size_t k, std::size_t a, std::size_t b) {
    double floor_level = std::numeric_limits<double>::infinity();
    for (std::size_t i = a; i <= b; ++i) {
      if (std::isfinite(y[i])) floor_level = std::min(floor_level, y[i]);
    }
    const double fwhm = fwhm_estimate(x, y, k, a, b, floor_level);
    FitWindow w{x[a], x[b]};
    if (std::isfinite(fwhm) && fwhm > 0.0) {
      w.lo = std::max(w.lo, x[k] - opt.fit_span_fwhm * fwhm);
      w.hi = std::min(w.hi, x[k] + opt.fit_span_fwhm * fwhm);
    }
    return w;
  };

  m.central = fit_peak(x, y, window_for(kc, split_lo, split_hi), PeakModel::lorentzian, opt.fit);
  if (!triplet) return m;

  try {
    FitResult lower = fit_peak(x, y, window_for(*kl, 0, split_lo), PeakModel::gaussian, opt.fit);
    FitResult upper = fit_peak(x, y, window_for(*ku, split_hi, x.size() - 1), PeakModel::gaussian, opt.fit);
    if (!lower.converged || !upper.converged) return m;
    m.lower = lower;
    m.upper = upper;
  } catch (const FitError&) {
    return m;
  }

  const double side_mean = 0.5 * (refined_maximum(y, *kl) + refined_maximum(y, *ku));
  m.height_ratio = refined_maximum(y, kc) / side_mean;
  auto power = [&](std::size_t a, std::size_t b) {
    return integrate_trapezoid(x.subspan(a, b - a + 1), std::span<const double>(y).subspan(a, b - a + 1));
  };
  const double sides = power(0, split_lo) + power(split_hi, x.size() - 1);
  m.integrated_ratio = power(split_lo, split_hi) / sides;
  m.sideband_offset = 0.5 * (m.upper->center - m.lower->center);
  return m;
}

}  // namespace mollow

#include "mollow/spectrum.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <optional>
#include <string>
#include <thread>

#include "grid_ordering.hpp"
#include "mollow/errors.hpp"
#include "mollow/operators.hpp"

namespace mollow {

namespace {

constexpr double kStationarityTolerance = 1e-8;
constexpr double kWindowDecayTolerance = 1e-4;

// Quantities shared by the time- and frequency-domain routes.
struct EmissionSetup {
  Vector probe;  // probe . vec(X) = Tr[s+ X]
  Vector x0;     // vec(s- rho - <s-> rho), the decaying part
  cplx sigma_minus{0.0};
  cplx asymptote{0.0};
};

EmissionSetup emission_setup(const Liouvillian& L, const DensityMatrix& rho) {
  if (rho.dim() != L.hilbert_dim) {
    throw InvalidDimension("state dimension " + std::to_string(rho.dim()) + " does not match Liouvillian " +
                           std::to_string(L.hilbert_dim));
  }
  const SparseMatrix lower = emitter_lowering(L.hilbert_dim);
  EmissionSetup s;
  // Tr[s+ X] = sum_ij (s+)_ji X_ij = sum_ij conj(s-)_ij X_ij
  s.probe = vectorize(DenseMatrix(SparseMatrix(lower.conjugate())));
  s.sigma_minus = expectation(lower, rho);
  s.asymptote = std::conj(s.sigma_minus) * s.sigma_minus;
  const Vector rho_vec = rho.vectorized();
  if (std::abs(s.sigma_minus) > 0.0) {
    const double drift = (L.superop * rho_vec).norm() / L.norm1();
    if (drift > kStationarityTolerance) {
      throw InvalidParameter("reference state is not stationary (||L rho||/||L|| = " + std::to_string(drift) +
                             ") while <s-> != 0");
    }
  }
  s.x0 = vectorize(DenseMatrix(lower * rho.matrix())) - s.sigma_minus * rho_vec;
  return s;
}

std::vector<cplx> endpoint_derivatives(const Liouvillian& L, const EmissionSetup& s, int order) {
  std::vector<cplx> d;
  d.reserve(order + 1);
  Vector v = s.x0;
  d.push_back(s.probe.transpose() * v);
  for (int k = 1; k <= order; ++k) {
    v = L.superop * v;
    d.push_back(s.probe.transpose() * v);
  }
  return d;
}

// Streams G1 - asymptote on a uniform grid. Several samples are read off each
// Taylor substep as a polynomial in the substep fraction.
class CorrelationSampler {
 public:
  CorrelationSampler(const Liouvillian& L, const EmissionSetup& setup, double tau_step, const PropagateOptions& opt)
      : setup_(setup), state_(setup.x0) {
    const double per_sample = L.norm1() * tau_step;
    samples_per_step_ = per_sample > 0.0 ? std::max(1, static_cast<int>(opt.substep_norm / per_sample)) : 1;
    propagator_.emplace(L, tau_step * samples_per_step_, opt);
    probed_ = propagator_->substeps() == 1;
  }

  // Appends `count` further samples to `out`.
  void sample(std::size_t count, std::vector<cplx>& out) {
    while (count > 0) {
      if (pending_.empty()) refill();
      const std::size_t take = std::min(count, pending_.size() - cursor_);
      out.insert(out.end(), pending_.begin() + static_cast<long>(cursor_),
                 pending_.begin() + static_cast<long>(cursor_ + take));
      cursor_ += take;
      count -= take;
      if (cursor_ == pending_.size()) {
        pending_.clear();
        cursor_ = 0;
      }
    }
  }

 private:
  void refill() {
    if (probed_) {
      propagator_->advance_substep_probed(state_, setup_.probe, coefficients_);
      pending_.resize(samples_per_step_);
      for (int m = 0; m < samples_per_step_; ++m) {
        const double theta = static_cast<double>(m) / samples_per_step_;
        cplx acc = 0.0;
        for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) acc = acc * theta + *it;
        pending_[m] = acc;
      }
    } else {
      pending_.assign(1, setup_.probe.transpose() * state_);
      propagator_->advance(state_);
    }
  }

  const EmissionSetup& setup_;
  Vector state_;
  std::optional<Propagator> propagator_;
  bool probed_ = true;
  int samples_per_step_ = 1;
  std::vector<cplx> coefficients_;
  std::vector<cplx> pending_;
  std::size_t cursor_ = 0;
};

CorrelationTrace finish_trace(std::vector<cplx> incoherent, double tau_step, const EmissionSetup& s,
                              std::vector<cplx> derivatives) {
  CorrelationTrace c;
  c.tau_step = tau_step;
  c.asymptote = s.asymptote;
  c.values = std::move(incoherent);
  for (auto& v : c.values) v += s.asymptote;
  c.endpoint_derivatives = std::move(derivatives);
  return c;
}

void require_increasing(std::span<const double> grid) {
  if (grid.empty()) throw DomainError("frequency grid is empty");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw DomainError("frequency grid must be strictly increasing");
  }
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// B_{2j} / (2j)! for j = 1..7
constexpr double kEulerMaclaurin[] = {
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40320.0,
    5.0 / 66.0 / 3628800.0,
    -691.0 / 2730.0 / 479001600.0,
    7.0 / 6.0 / 87178291200.0,
};

}  // namespace

CorrelationTrace correlation_g1(const Liouvillian& L, const DensityMatrix& rho, double tau_max, int n_tau,
                                const CorrelationOptions& opt) {
  if (n_tau < 2) throw DomainError("correlation_g1: n_tau must be >= 2");
  if (!(tau_max > 0.0) || !std::isfinite(tau_max)) throw DomainError("correlation_g1: tau_max must be > 0");
  const auto setup = emission_setup(L, rho);
  const double step = tau_max / (n_tau - 1);
  std::vector<cplx> samples;
  samples.reserve(n_tau);
  CorrelationSampler sampler(L, setup, step, opt.propagate);
  sampler.sample(static_cast<std::size_t>(n_tau), samples);
  return finish_trace(std::move(samples), step, setup, endpoint_derivatives(L, setup, opt.derivative_order));
}

CorrelationTrace correlation_g1_until_decayed(const Liouvillian& L, const DensityMatrix& rho, double tau_step,
                                              double min_tau_max, double max_tau, double decay_tolerance,
                                              const CorrelationOptions& opt) {
  if (!(tau_step > 0.0)) throw DomainError("correlation_g1_until_decayed: tau_step must be > 0");
  const auto setup = emission_setup(L, rho);
  std::vector<cplx> samples;
  CorrelationSampler sampler(L, setup, tau_step, opt.propagate);

  auto target = static_cast<std::size_t>(std::ceil(min_tau_max / tau_step)) + 1;
  const auto limit = static_cast<std::size_t>(std::ceil(max_tau / tau_step)) + 1;
  sampler.sample(std::min(target, limit), samples);
  const double reference = std::abs(samples.front());
  while (true) {
    const std::size_t tail = std::max<std::size_t>(2, samples.size() / 20);
    double tail_max = 0.0;
    for (std::size_t k = samples.size() - tail; k < samples.size(); ++k) {
      tail_max = std::max(tail_max, std::abs(samples[k]));
    }
    if (tail_max <= decay_tolerance * reference) break;
    if (samples.size() >= limit) {
      throw WindowTooShort("correlation did not decay to " + std::to_string(decay_tolerance) + " within " +
                           std::to_string(max_tau) + " s");
    }
    const std::size_t grow = std::min(samples.size() / 4 + 1, limit - samples.size());
    sampler.sample(grow, samples);
  }
  return finish_trace(std::move(samples), tau_step, setup, endpoint_derivatives(L, setup, opt.derivative_order));
}

std::vector<double> frequency_grid(double center, double half_span, int points) {
  if (points < 2) throw DomainError("frequency_grid: need at least 2 points");
  if (!(half_span > 0.0)) throw DomainError("frequency_grid: half_span must be > 0");
  std::vector<double> grid(points);
  const double step = 2.0 * half_span / (points - 1);
  for (int k = 0; k < points; ++k) grid[k] = center - half_span + k * step;
  if (points % 2 == 1) grid[points / 2] = center;
  return grid;
}

std::vector<double> default_frequency_grid(const SystemParams& p) {
  return frequency_grid(p.omega_a, kDefaultHalfSpan, kDefaultGridPoints);
}

SpectrumTrace spectrum_from_correlation(const CorrelationTrace& c, const SystemParams& p,
                                        std::span<const double> omega_grid) {
  require_increasing(omega_grid);
  if (c.values.size() < 2 || !(c.tau_step > 0.0)) throw DomainError("spectrum_from_correlation: empty correlation");

  const std::size_t n = c.values.size();
  std::vector<cplx> inc(n);
  for (std::size_t k = 0; k < n; ++k) inc[k] = c.values[k] - c.asymptote;
  const double head = std::abs(inc.front());
  if (std::abs(inc.back()) > kWindowDecayTolerance * head) {
    throw WindowTooShort("correlation has not decayed at tau_max: |G1 - asymptote| ratio " +
                         std::to_string(std::abs(inc.back()) / head));
  }

  const double h = c.tau_step;
  const int em_terms = std::min<int>(std::size(kEulerMaclaurin), static_cast<int>(c.endpoint_derivatives.size()) / 2);

  SpectrumTrace out;
  out.params = p;
  out.omega.assign(omega_grid.begin(), omega_grid.end());
  out.psd.resize(omega_grid.size());
  out.coherent_weight = p.gamma1 * std::abs(c.asymptote);

  constexpr std::size_t kResync = 256;
  for (std::size_t w = 0; w < omega_grid.size(); ++w) {
    const double dw = omega_grid[w] - p.omega_drive;
    const cplx rot = std::polar(1.0, -dw * h);
    cplx phase = 1.0;
    cplx sum = 0.5 * inc[0];
    for (std::size_t k = 1; k < n; ++k) {
      phase = (k % kResync == 0) ? std::polar(1.0, -dw * h * static_cast<double>(k)) : phase * rot;
      sum += (k + 1 == n ? 0.5 : 1.0) * inc[k] * phase;
    }
    sum *= h;

    // Endpoint corrections: + sum_j B_2j/(2j)! h^2j F^(2j-1)(0), F = (G1 - a) exp(-i dw tau)
    const cplx mu{0.0, -dw};
    double hpow = 1.0;
    for (int j = 1; j <= em_terms; ++j) {
      hpow *= h * h;
      const int order = 2 * j - 1;
      cplx deriv = 0.0;
      cplx mu_pow = 1.0;
      for (int q = order; q >= 0; --q) {
        deriv += binomial(order, q) * c.endpoint_derivatives[q] * mu_pow;
        mu_pow *= mu;
      }
      sum += kEulerMaclaurin[j - 1] * hpow * deriv;
    }
    out.psd[w] = p.gamma1 / std::numbers::pi * sum.real();
  }
  return out;
}

SpectrumTrace spectrum_resolvent(const Liouvillian& L, const DensityMatrix& rho, const SystemParams& p,
                                 std::span<const double> omega_grid, const ResolventOptions& opt) {
  require_increasing(omega_grid);
  const auto setup = emission_setup(L, rho);

  SpectrumTrace out;
  out.params = p;
  out.omega.assign(omega_grid.begin(), omega_grid.end());
  out.psd.assign(omega_grid.size(), std::numeric_limits<double>::quiet_NaN());
  out.coherent_weight = p.gamma1 * std::abs(setup.asymptote);

  if (setup.x0.norm() == 0.0) {
    std::fill(out.psd.begin(), out.psd.end(), 0.0);
    return out;
  }

  const Eigen::Index n = L.superop.rows();
  const int d = L.hilbert_dim;
  const double singular_shift = 1e-12 * L.norm1();
  const SparseMatrix id = identity(static_cast<int>(n));
  const Vector rhs = -setup.x0;

  // At dw = 0 the generator is singular; the integral of a traceless vector
  // is the traceless solution, fixed by swapping row 0 for the trace row.
  auto solve_zero_shift = [&]() -> cplx {
    std::vector<Eigen::Triplet<cplx>> entries;
    entries.reserve(L.superop.nonZeros() + d);
    for (int k = 0; k < L.superop.outerSize(); ++k) {
      for (SparseMatrix::InnerIterator it(L.superop, k); it; ++it) {
        if (it.row() != 0) entries.emplace_back(it.row(), it.col(), it.value());
      }
    }
    for (int i = 0; i < d; ++i) entries.emplace_back(0, i + d * i, 1.0);
    SparseMatrix bordered(n, n);
    bordered.setFromTriplets(entries.begin(), entries.end());
    detail::LiouvillianLU lu;
    lu.compute(bordered);
    if (lu.info() != Eigen::Success) throw ConvergenceError("zero-shift factorisation failed");
    Vector b = rhs;
    b(0) = 0.0;
    const Vector x = lu.solve(b);
    return setup.probe.transpose() * x;
  };

  std::atomic<std::size_t> next{0};
  std::mutex failed_mutex;
  auto worker = [&]() {
    detail::LiouvillianLU lu;
    bool analysed = false;
    for (std::size_t w = next++; w < omega_grid.size(); w = next++) {
      const double dw = omega_grid[w] - p.omega_drive;
      try {
        cplx value;
        if (std::abs(dw) < singular_shift) {
          value = solve_zero_shift();
        } else {
          const SparseMatrix shifted = L.superop - cplx(0.0, dw) * id;
          if (!analysed) {
            lu.analyzePattern(shifted);
            analysed = true;
          }
          lu.factorize(shifted);
          if (lu.info() != Eigen::Success) throw ConvergenceError(lu.lastErrorMessage());
          const Vector x = lu.solve(rhs);
          if (!x.allFinite()) throw ConvergenceError("non-finite solution");
          value = setup.probe.transpose() * x;
        }
        out.psd[w] = p.gamma1 / std::numbers::pi * value.real();
      } catch (const std::exception&) {
        std::lock_guard lock(failed_mutex);
        out.failed_points.push_back(w);
      }
    }
  };

  const int workers = std::max(1, std::min<int>(opt.workers, static_cast<int>(omega_grid.size())));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
  }
  std::sort(out.failed_points.begin(), out.failed_points.end());
  return out;
}

FrequencyDensityTrace as_frequency_density(const SpectrumTrace& s) {
  FrequencyDensityTrace f;
  f.frequency_hz.reserve(s.omega.size());
  f.psd_per_hz.reserve(s.psd.size());
  for (double w : s.omega) f.frequency_hz.push_back(ordinary(w));
  for (double v : s.psd) f.psd_per_hz.push_back(kTwoPi * v);
  f.coherent_weight = s.coherent_weight;
  f.drive_frequency_hz = ordinary(s.params.omega_drive);
  return f;
}

SpectrumTrace from_frequency_density(const FrequencyDensityTrace& f, const SystemParams& params) {
  if (f.frequency_hz.size() != f.psd_per_hz.size()) {
    throw InvalidDimension("from_frequency_density: column lengths differ");
  }
  SpectrumTrace s;
  s.params = params;
  s.params.omega_drive = angular(f.drive_frequency_hz);
  s.omega.reserve(f.frequency_hz.size());
  s.psd.reserve(f.psd_per_hz.size());
  for (double hz : f.frequency_hz) s.omega.push_back(angular(hz));
  for (double v : f.psd_per_hz) s.psd.push_back(v / kTwoPi);
  s.coherent_weight = f.coherent_weight;
  for (std::size_t k = 0; k < s.psd.size(); ++k) {
    if (!std::isfinite(s.psd[k])) s.failed_points.push_back(k);
  }
  return s;
}

double integrate_trapezoid(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidDimension("integrate_trapezoid: length mismatch");
  double acc = 0.0;
  for (std::size_t k = 1; k < x.size(); ++k) {
    if (std::isfinite(y[k]) && std::isfinite(y[k - 1])) acc += 0.5 * (x[k] - x[k - 1]) * (y[k] + y[k - 1]);
  }
  return acc;
}

double total_power(const SpectrumTrace& s) { return integrate_trapezoid(s.omega, s.psd) + s.coherent_weight; }

std::vector<double> with_coherent_lorentzian(const SpectrumTrace& s, double rbw) {
  if (!(rbw > 0.0)) throw DomainError("with_coherent_lorentzian: rbw must be > 0");
  std::vector<double> out(s.psd);
  const double half = 0.5 * rbw;
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double dw = s.omega[k] - s.params.omega_drive;
    out[k] += s.coherent_weight * half / (std::numbers::pi * (dw * dw + half * half));
  }
  return out;
}

SpectrumTrace compute_spectrum(const Liouvillian& L, const DensityMatrix& rho, const SystemParams& p,
                               std::span<const double> omega_grid, const SpectrumOptions& opt) {
  if (opt.method == SpectrumMethod::resolvent) {
    return spectrum_resolvent(L, rho, p, omega_grid, ResolventOptions{.workers = opt.workers});
  }
  require_increasing(omega_grid);
  double max_shift = 0.0;
  for (double w : omega_grid) max_shift = std::max(max_shift, std::abs(w - p.omega_drive));
  const double tau_step = opt.sample_phase / (L.norm1() + max_shift);

  double slowest = std::min(p.kappa > 0 ? p.kappa : p.gamma1, p.gamma1 > 0 ? p.gamma1 : p.kappa);
  if (!(slowest > 0.0)) slowest = L.norm1() * 1e-3;
  const double min_tau = 20.0 / slowest;
  const double max_tau = 4000.0 / slowest;
  const auto corr = correlation_g1_until_decayed(L, rho, tau_step, min_tau, max_tau, opt.decay_tolerance);
  return spectrum_from_correlation(corr, p, omega_grid);
}

}  // namespace mollow

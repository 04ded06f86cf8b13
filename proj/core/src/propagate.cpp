#include "mollow/propagate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mollow/errors.hpp"

namespace mollow {

Propagator::Propagator(const Liouvillian& L, double step, const PropagateOptions& opt)
    : generator_(L.superop), step_(step), opt_(opt) {
  if (!(step >= 0.0) || !std::isfinite(step)) {
    throw DomainError("Propagator: step must be finite and >= 0");
  }
  const double scaled = L.norm1() * step;
  substeps_ = std::max(1, static_cast<int>(std::ceil(scaled / opt_.substep_norm)));
  substep_ = step / substeps_;
}

void Propagator::advance_substep_probed(Vector& v, const Vector& probe, std::vector<cplx>& coefficients) const {
  coefficients.clear();
  coefficients.push_back(probe.transpose() * v);
  Vector term = v;
  Vector next(v.size());
  int small_terms = 0;
  for (int k = 1; k <= opt_.max_terms; ++k) {
    next.noalias() = generator_ * term;
    term = next * (substep_ / k);
    v += term;
    coefficients.push_back(probe.transpose() * term);
    if (term.norm() <= opt_.tolerance * v.norm()) {
      if (++small_terms == 2) return;
    } else {
      small_terms = 0;
    }
  }
  throw ConvergenceError("propagate: Taylor series did not converge within " + std::to_string(opt_.max_terms) +
                         " terms");
}

void Propagator::advance(Vector& v) const {
  if (step_ == 0.0) return;
  Vector term(v.size());
  Vector next(v.size());
  for (int s = 0; s < substeps_; ++s) {
    term = v;
    int small_terms = 0;
    int k = 1;
    for (; k <= opt_.max_terms; ++k) {
      next.noalias() = generator_ * term;
      term = next * (substep_ / k);
      v += term;
      if (term.norm() <= opt_.tolerance * v.norm()) {
        if (++small_terms == 2) break;
      } else {
        small_terms = 0;
      }
    }
    if (k > opt_.max_terms) {
      throw ConvergenceError("propagate: Taylor series did not converge within " + std::to_string(opt_.max_terms) +
                             " terms");
    }
  }
}

Vector propagate(const Liouvillian& L, const Vector& v, double t, const PropagateOptions& opt) {
  if (t < 0.0) throw DomainError("propagate: t must be >= 0");
  if (v.size() != L.superop.cols()) throw InvalidDimension("propagate: vector length does not match the Liouvillian");
  Vector out = v;
  if (t == 0.0) return out;
  Propagator(L, t, opt).advance(out);
  return out;
}

}  // namespace mollow

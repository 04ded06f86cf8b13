#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

// Integral of f over the whole real line, split at the given breakpoints.
// Frequencies are rescaled by `unit` so the integrator sees O(1) abscissae.
template <class F>
double integrate_real_line(F f, std::vector<double> breaks, double unit) {
  using boost::math::quadrature::gauss_kronrod;
  std::sort(breaks.begin(), breaks.end());
  const double inf = std::numeric_limits<double>::infinity();
  auto g = [&](double x) { return f(x * unit) * unit; };
  double total = gauss_kronrod<double, 61>::integrate(g, -inf, breaks.front() / unit, 15, 1e-12);
  for (std::size_t i = 1; i < breaks.size(); ++i) {
    total += gauss_kronrod<double, 61>::integrate(g, breaks[i - 1] / unit, breaks[i] / unit, 15, 1e-12);
  }
  total += gauss_kronrod<double, 61>::integrate(g, breaks.back() / unit, inf, 15, 1e-12);
  return total;
}

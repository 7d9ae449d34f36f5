#pragma once

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <vector>

#include "steerbound/common.hpp"

namespace steerbound {

/// Adaptive Gauss-Kronrod (G7/K15) over a piecewise-smooth integrand.
/// Breakpoints must be placed at every knot of the integrand (profile
/// branch switches); inside each segment the integrand is smooth, which is
/// the regime where the error estimate of the rule is reliable.
template <typename F>
double integrate_segments(const F& f, const std::vector<double>& breakpoints,
                          double rel_tol = 1e-12) {
  using rule = boost::math::quadrature::gauss_kronrod<double, 15>;
  double total = 0.0;
  for (std::size_t s = 0; s + 1 < breakpoints.size(); ++s) {
    const double a = breakpoints[s];
    const double b = breakpoints[s + 1];
    if (!(b > a)) continue;
    double err = 0.0;
    const double v = rule::integrate(f, a, b, 12, rel_tol, &err);
    if (!std::isfinite(v) ||
        (err > 1e-14 && err > 1e-7 * std::max(1.0, std::abs(v)))) {
      throw NonConvergentIntegral("quadrature failed to converge on segment");
    }
    total += v;
  }
  return total;
}

/// Composite fixed-order Gauss-Legendre. Used where the integrand is only
/// piecewise smooth (interpolated raster spectra), since adaptive error
/// estimates are unreliable there. May return a complex accumulator.
template <typename R, typename F>
R integrate_fixed(const F& f, double a, double b, int panels) {
  using rule = boost::math::quadrature::gauss<double, 15>;
  R total{};
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    const double mid = lo + 0.5 * h;
    for (std::size_t i = 0; i < rule::abscissa().size(); ++i) {
      const double x = rule::abscissa()[i] * 0.5 * h;
      const double w = rule::weights()[i] * 0.5 * h;
      total += w * f(mid + x);
      if (i != 0) total += w * f(mid - x);  // abscissa[0] is the midpoint
    }
  }
  return total;
}

}  // namespace steerbound

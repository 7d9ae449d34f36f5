#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "steerbound/common.hpp"
#include "steerbound/filterbank.hpp"

namespace steerbound {

/// Signed angular deviation folded into the k-fold fundamental interval
/// (-pi/k, pi/k]. A half-period deviation reports as +pi/k.
inline double angular_error(double theta_hat, double theta_star, int fold) {
  if (fold < 1) throw std::invalid_argument("fold symmetry must be >= 1");
  const double period = 2.0 * kPi / fold;
  double e = std::fmod(theta_hat - theta_star + 0.5 * period, period);
  if (e <= 0.0) e += period;
  return e - 0.5 * period;
}

struct AngleEstimate {
  double theta_hat = 0.0;
  int fold = 1;  // symmetry order the estimate is unique modulo 2 pi / fold
};

namespace detail {

/// Template values aligned to q's entry order, plus the mirror-absence
/// flags the Hermitian-completed response needs.
struct AlignedTemplate {
  std::vector<cplx> c;
  std::vector<char> unmirrored;
};

inline AlignedTemplate align_template(const MeasurementVector& q,
                                      const IndexedVector& c) {
  if (sorted_index(q) != sorted_index(c)) {
    throw IndexMismatch("measurement and template index sets differ");
  }
  AlignedTemplate a;
  a.c.reserve(q.size());
  a.unmirrored.reserve(q.size());
  for (const auto& e : q.index) {
    a.c.push_back(c.at(e.n, e.i));
    a.unmirrored.push_back(q.has(-e.n, e.i) ? 0 : 1);
  }
  return a;
}

inline double aligned_response(const MeasurementVector& q,
                               const AlignedTemplate& a, double theta) {
  cplx acc = 0.0;
  for (std::size_t p = 0; p < q.size(); ++p) {
    const cplx term =
        q.value[p] * std::conj(a.c[p]) *
        std::exp(cplx(0.0, -static_cast<double>(q.index[p].n) * theta));
    acc += term;
    if (a.unmirrored[p]) acc += std::conj(term);
  }
  return acc.real();
}

}  // namespace detail

/// Maximum-correlation angle estimate. Searches the template's period with
/// a 1024-point grid plus golden-section refinement to 1e-7 rad; a
/// template with a single informative harmonic short-circuits to the
/// closed-form phase read-out.
inline AngleEstimate estimate_angle(const MeasurementVector& q,
                                    const IndexedVector& c, int fold) {
  if (fold < 1) throw std::invalid_argument("fold symmetry must be >= 1");
  const auto aligned = detail::align_template(q, c);

  std::vector<BankEntry> informative;
  bool multiples_of_fold = true;
  for (std::size_t p = 0; p < q.size(); ++p) {
    const auto e = q.index[p];
    if (e.n == 0 || std::abs(aligned.c[p]) == 0.0) continue;
    if (std::none_of(informative.begin(), informative.end(),
                     [&](BankEntry o) {
                       return std::abs(o.n) == std::abs(e.n) && o.i == e.i;
                     })) {
      informative.push_back(e);
    }
    if (e.n % fold != 0) multiples_of_fold = false;
  }
  if (informative.empty()) {
    throw DegenerateTemplate("template has no informative harmonic");
  }

  const double period = multiples_of_fold ? 2.0 * kPi / fold : 2.0 * kPi;
  double theta;
  if (informative.size() == 1) {
    const auto e = informative[0];
    theta = std::arg(q.at(e.n, e.i) * std::conj(c.at(e.n, e.i))) / e.n;
  } else {
    const int grid = 1024;
    int best = 0;
    double best_val = -kInf;
    for (int g = 0; g < grid; ++g) {
      const double v =
          detail::aligned_response(q, aligned, period * g / grid);
      if (v > best_val) {
        best_val = v;
        best = g;
      }
    }
    double a = period * (best - 1) / grid;
    double b = period * (best + 1) / grid;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = detail::aligned_response(q, aligned, x1);
    double f2 = detail::aligned_response(q, aligned, x2);
    while (b - a > 1e-7) {
      if (f1 < f2) {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + gr * (b - a);
        f2 = detail::aligned_response(q, aligned, x2);
      } else {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - gr * (b - a);
        f1 = detail::aligned_response(q, aligned, x1);
      }
    }
    theta = 0.5 * (a + b);
  }
  theta = std::fmod(theta, period);
  if (theta < 0.0) theta += period;
  return {theta, fold};
}

}  // namespace steerbound

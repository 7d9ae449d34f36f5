#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "steerbound/common.hpp"
#include "steerbound/fft.hpp"
#include "steerbound/quadrature.hpp"
#include "steerbound/radial.hpp"

namespace steerbound {

enum class PatternKind { j1, j2, j3, j4, raster };

inline const char* pattern_kind_name(PatternKind k) {
  switch (k) {
    case PatternKind::j1: return "J1";
    case PatternKind::j2: return "J2";
    case PatternKind::j3: return "J3";
    case PatternKind::j4: return "J4";
    default: return "raster";
  }
}

/// Directional template. Analytic kinds are polar-separable in the Fourier
/// domain, J(omega, phi) = R(omega) A(phi): A is a hard angular indicator
/// (J1, J3) or a smooth cosine power (J2, J4), R is 1, an algebraic decay,
/// or an exponential ramp. Raster kind wraps a real image.
struct Pattern {
  PatternKind kind = PatternKind::j1;
  double lambda = 2.1;  // J2 radial decay exponent
  double beta = 28.0;   // angular sharpness, an even integer
  double alpha = 2.5;   // J4 radial onset constant
  std::vector<double> raster;  // row-major, raster kind only
  int width = 0;
  int height = 0;
  double pitch = 1.0;

  static Pattern j1() { return Pattern{PatternKind::j1}; }
  static Pattern j2(double lambda = 2.1) {
    Pattern p{PatternKind::j2};
    p.lambda = lambda;
    return p;
  }
  static Pattern j3() { return Pattern{PatternKind::j3}; }
  static Pattern j4(double alpha = 2.5) {
    Pattern p{PatternKind::j4};
    p.alpha = alpha;
    return p;
  }
  static Pattern from_raster(std::vector<double> data, int width, int height,
                             double pitch = 1.0) {
    if (width < 16 || height < 16 || width % 2 || height % 2) {
      throw std::invalid_argument("raster sides must be even and >= 16");
    }
    if (data.size() != static_cast<size_t>(width) * height) {
      throw std::invalid_argument("raster size does not match dimensions");
    }
    for (double v : data) {
      if (!std::isfinite(v)) {
        throw std::invalid_argument("raster values must be finite");
      }
    }
    Pattern p{PatternKind::raster};
    p.raster = std::move(data);
    p.width = width;
    p.height = height;
    p.pitch = pitch;
    return p;
  }

  bool analytic() const { return kind != PatternKind::raster; }

  /// Rotational symmetry order of the angular factor; 1 for rasters.
  int symmetry_order() const {
    switch (kind) {
      case PatternKind::j1:
      case PatternKind::j2: return 3;
      case PatternKind::j3:
      case PatternKind::j4: return 4;
      default: return 1;
    }
  }
};

enum class TableConvention { single_scale, wavelet };

/// Map (harmonic, scale) -> coefficient. Scale is 0 throughout for the
/// single-scale convention. Entries for real patterns satisfy
/// u_{-n,i} = conj(u_{n,i}) exactly by construction.
struct HarmonicTable {
  TableConvention convention = TableConvention::single_scale;
  std::string profile_name;
  std::map<std::pair<int, int>, cplx> entries;

  bool has(int n, int i = 0) const { return entries.count({n, i}) != 0; }

  cplx at(int n, int i = 0) const {
    auto it = entries.find({n, i});
    if (it == entries.end()) {
      throw MissingCoefficient("no coefficient for harmonic " +
                               std::to_string(n) + ", scale " +
                               std::to_string(i));
    }
    return it->second;
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& [key, v] : entries) m = std::max(m, std::abs(v));
    return m;
  }

  /// Sorted distinct positive harmonics present in the table.
  std::vector<int> positive_harmonics() const {
    std::vector<int> out;
    for (const auto& [key, v] : entries) {
      if (key.first > 0 &&
          (out.empty() || out.back() != key.first)) {
        out.push_back(key.first);
      }
    }
    return out;
  }
};

namespace detail {

inline constexpr int kAngularGrid = 4096;
inline constexpr double kIndicatorThreshold = 0.8;
// Indicator kinds have 1/n coefficient tails; the rendered series is
// truncated here. Orthogonality keeps measured harmonics below the cap
// exact, so the cap only shapes unobserved content.
inline constexpr int kSynthesisHarmonicCap = 240;
inline constexpr int kRasterPanels = 96;

inline double angular_factor(const Pattern& p, double phi) {
  // beta is an even integer, so the power of a negative cosine is defined
  const double c = std::pow(std::cos(0.5 * p.symmetry_order() * phi), p.beta);
  switch (p.kind) {
    case PatternKind::j1:
    case PatternKind::j3: return c > kIndicatorThreshold ? 1.0 : 0.0;
    case PatternKind::j2:
    case PatternKind::j4: return c;
    default: throw std::invalid_argument("raster has no angular factor");
  }
}

inline double radial_factor(const Pattern& p, double omega) {
  switch (p.kind) {
    case PatternKind::j2: return 1.0 / (1.0 + std::pow(omega, p.lambda));
    case PatternKind::j4:
      return omega > 0.0 ? std::exp(-1.0 / (p.alpha * omega)) : 0.0;
    default: return 1.0;
  }
}

/// Half-width of the k arcs where the indicator |cos((k/2)phi)|^beta
/// exceeds the threshold.
inline double arc_halfwidth(const Pattern& p) {
  return (2.0 / p.symmetry_order()) *
         std::acos(std::pow(kIndicatorThreshold, 1.0 / p.beta));
}

inline std::vector<double> angular_samples(const Pattern& p) {
  std::vector<double> s(kAngularGrid);
  for (int t = 0; t < kAngularGrid; ++t) {
    s[t] = angular_factor(p, 2.0 * kPi * t / kAngularGrid);
  }
  return s;
}

/// Fourier coefficient a_n of the angular factor. Exactly zero off
/// multiples of the symmetry order. Indicator kinds use the arc closed
/// form; cosine-power kinds use the 4096-point trapezoid, which is exact
/// because A is band-limited to |n| <= 14k. A is real and even, so a_n is
/// real and even in n.
inline double angular_coefficient(const Pattern& p, int n,
                                  const std::vector<double>* samples) {
  const int k = p.symmetry_order();
  const int m = std::abs(n);
  if (m % k != 0) return 0.0;
  if (p.kind == PatternKind::j1 || p.kind == PatternKind::j3) {
    const double w = arc_halfwidth(p);
    return m == 0 ? k * w / kPi : (k / kPi) * std::sin(m * w) / m;
  }
  double acc = 0.0;
  for (int t = 0; t < kAngularGrid; ++t) {
    acc += (*samples)[t] * std::cos(m * (2.0 * kPi * t / kAngularGrid));
  }
  return acc / kAngularGrid;
}

/// rho_i = (1/2pi) int R(omega) h_i(omega) omega domega, reduced to the
/// base band by omega = 2^{-i} v.
inline double radial_rho(const Pattern& p, const RadialProfile& prof,
                         int scale) {
  const double s = std::ldexp(1.0, -scale);
  return s * integrate_segments(
                 [&](double v) {
                   return radial_factor(p, s * v) * eval_profile(prof, v) * v /
                          (2.0 * kPi);
                 },
                 prof.knots());
}

}  // namespace detail

/// Centered-spectrum sampler for raster patterns: 2D FFT referenced to the
/// image center, evaluated anywhere under Nyquist by bilinear
/// interpolation on the periodic frequency grid.
class RasterSpectrum {
 public:
  explicit RasterSpectrum(const Pattern& p)
      : w_(p.width), h_(p.height), pitch_(p.pitch) {
    if (p.kind != PatternKind::raster) {
      throw std::invalid_argument("raster_spectrum needs a raster pattern");
    }
    spec_.resize(static_cast<size_t>(w_) * h_);
    for (size_t i = 0; i < spec_.size(); ++i) spec_[i] = p.raster[i];
    fft::c2c(spec_.data(), h_, w_, false);
    for (int ky = 0; ky < h_; ++ky) {
      for (int kx = 0; kx < w_; ++kx) {
        spec_[static_cast<size_t>(ky) * w_ + kx] *= fft::center_sign(kx, ky);
      }
    }
  }

  double nyquist() const { return kPi / pitch_; }

  cplx eval_cart(double wx, double wy) const {
    const double ny = nyquist() * (1.0 + 1e-12);
    if (!(std::abs(wx) <= ny) || !(std::abs(wy) <= ny)) {
      throw FrequencyOutOfRange("frequency beyond raster Nyquist");
    }
    const double fx = wx * pitch_ * w_ / (2.0 * kPi);
    const double fy = wy * pitch_ * h_ / (2.0 * kPi);
    const int ix = static_cast<int>(std::floor(fx));
    const int iy = static_cast<int>(std::floor(fy));
    const double tx = fx - ix;
    const double ty = fy - iy;
    auto b = [&](int x, int y) {
      x = ((x % w_) + w_) % w_;
      y = ((y % h_) + h_) % h_;
      return spec_[static_cast<size_t>(y) * w_ + x];
    };
    return (1 - tx) * (1 - ty) * b(ix, iy) + tx * (1 - ty) * b(ix + 1, iy) +
           (1 - tx) * ty * b(ix, iy + 1) + tx * ty * b(ix + 1, iy + 1);
  }

  cplx eval_polar(double omega, double phi) const {
    return eval_cart(omega * std::cos(phi), omega * std::sin(phi));
  }

 private:
  int w_, h_;
  double pitch_;
  std::vector<cplx> spec_;
};

inline RasterSpectrum raster_spectrum(const Pattern& p) {
  return RasterSpectrum(p);
}

/// Radial reduction of the pattern against the profile at a fixed angle:
/// G(phi) = (1/2pi) int conj(J(omega, phi)) h(omega) omega domega.
/// Analytic kinds factor into (radial overlap) x (real angular factor).
inline cplx angular_profile(const Pattern& p, const RadialProfile& prof,
                            double phi) {
  if (p.analytic()) {
    return detail::radial_rho(p, prof, 0) * detail::angular_factor(p, phi);
  }
  RasterSpectrum spec(p);
  return std::conj(integrate_fixed<cplx>(
      [&](double omega) {
        return spec.eval_polar(omega, phi) * eval_profile(prof, omega) * omega /
               (2.0 * kPi);
      },
      prof.support_lo(), prof.support_hi(), detail::kRasterPanels));
}

namespace detail {

inline HarmonicTable build_table(const Pattern& p, const RadialProfile& prof,
                                 const std::vector<int>& harmonics,
                                 const std::vector<int>& scales,
                                 TableConvention convention) {
  if (harmonics.empty()) throw std::invalid_argument("empty harmonic set");
  if (scales.empty()) throw std::invalid_argument("empty scale set");
  HarmonicTable tbl;
  tbl.convention = convention;
  tbl.profile_name = prof.name();

  if (p.analytic()) {
    std::optional<std::vector<double>> samples;
    if (p.kind == PatternKind::j2 || p.kind == PatternKind::j4) {
      samples = angular_samples(p);
    }
    for (int i : scales) {
      const double rho = radial_rho(p, prof, i);
      for (int n : harmonics) {
        tbl.entries[{n, i}] =
            rho * angular_coefficient(p, n, samples ? &*samples : nullptr);
      }
    }
    return tbl;
  }

  const RasterSpectrum spec(p);
  for (int i : scales) {
    if (prof.support_hi() * std::ldexp(1.0, -i) >
        spec.nyquist() * (1.0 + 1e-9)) {
      throw ScaleOutOfRange("scale " + std::to_string(i) +
                            " is not resolvable on this raster");
    }
    // g(phi) = (1/2pi) int J(omega, phi) h_i(omega) omega domega
    std::vector<cplx> g(kAngularGrid);
    const double lo = prof.support_lo() * std::ldexp(1.0, -i);
    const double hi = prof.support_hi() * std::ldexp(1.0, -i);
    for (int t = 0; t < kAngularGrid; ++t) {
      const double phi = 2.0 * kPi * t / kAngularGrid;
      g[t] = integrate_fixed<cplx>(
          [&](double omega) {
            return spec.eval_polar(omega, phi) *
                   eval_profile_dilated(prof, i, omega) * omega / (2.0 * kPi);
          },
          lo, hi, kRasterPanels);
    }
    // u_{n,i} = conj(sigma_n) mean_t g(phi_t) e^{-j n phi_t}; Hermitian
    // symmetry of the real raster is enforced by mirroring
    std::map<int, cplx> positive;
    for (int n : harmonics) {
      const int m = std::abs(n);
      if (positive.count(m)) continue;
      cplx acc = 0.0;
      for (int t = 0; t < kAngularGrid; ++t) {
        const double a = -m * (2.0 * kPi * t) / kAngularGrid;
        acc += g[t] * cplx(std::cos(a), std::sin(a));
      }
      positive[m] = std::conj(harmonic_phase(m)) * acc /
                    static_cast<double>(kAngularGrid);
    }
    for (int n : harmonics) {
      tbl.entries[{n, i}] =
          n >= 0 ? positive[n] : std::conj(positive[-n]);
    }
  }
  return tbl;
}

}  // namespace detail

inline HarmonicTable harmonic_coefficients(const Pattern& p,
                                           const RadialProfile& prof,
                                           const std::vector<int>& harmonics) {
  return detail::build_table(p, prof, harmonics, {0},
                             TableConvention::single_scale);
}

inline HarmonicTable wavelet_coefficients(const Pattern& p,
                                          const RadialProfile& prof,
                                          const std::vector<int>& harmonics,
                                          const std::vector<int>& scales) {
  if (!prof.bandpass()) {
    throw UnsupportedProfile("wavelet coefficients need a bandpass profile");
  }
  return detail::build_table(p, prof, harmonics, scales,
                             TableConvention::wavelet);
}

/// Render an analytic pattern rotated by theta_star on an n x n grid.
/// The spectrum R(omega) sum_m sigma_m a_m e^{jm(phi + theta_star)} is
/// filled on the half-grid, mirror-conjugated, and inverse transformed;
/// sigma_m = (-j)^|m| makes the spectrum Hermitian, hence the image real.
/// The profile argument sets the band: the pattern is zero outside
/// supp h, which is also the only region any measurement can see.
inline Raster synthesize_pattern_image(const Pattern& p,
                                       const RadialProfile& prof,
                                       double theta_star, int n,
                                       double pitch = 1.0) {
  if (!p.analytic()) {
    throw std::invalid_argument("synthesize needs an analytic pattern");
  }
  if (n < 64 || n % 2) {
    throw std::invalid_argument("grid side must be even and >= 64");
  }
  const int k = p.symmetry_order();
  const bool band_limited =
      p.kind == PatternKind::j2 || p.kind == PatternKind::j4;
  const int mu_max =
      band_limited ? static_cast<int>(p.beta) / 2 : detail::kSynthesisHarmonicCap / k;
  std::optional<std::vector<double>> samples;
  if (band_limited) samples = detail::angular_samples(p);
  std::vector<cplx> series(mu_max + 1);
  series[0] =
      detail::angular_coefficient(p, 0, samples ? &*samples : nullptr);
  for (int mu = 1; mu <= mu_max; ++mu) {
    series[mu] =
        2.0 * harmonic_phase(k * mu) *
        detail::angular_coefficient(p, k * mu, samples ? &*samples : nullptr);
  }

  std::vector<cplx> spec(static_cast<size_t>(n) * n);
  for (int ky = 0; ky < n; ++ky) {
    for (int kx = 0; kx < n; ++kx) {
      const int mx = (n - kx) % n;
      const int my = (n - ky) % n;
      if (std::make_pair(my, mx) < std::make_pair(ky, kx)) continue;
      const double wx = fft::omega_component(kx, n) / pitch;
      const double wy = fft::omega_component(ky, n) / pitch;
      const double omega = std::hypot(wx, wy);
      cplx v = 0.0;
      if (eval_profile(prof, omega) > 0.0) {
        const double psi = std::atan2(wy, wx) + theta_star;
        const double ck = std::cos(k * psi);
        double cm = ck, cm_prev = 1.0;
        cplx t = series[0];
        for (int mu = 1; mu <= mu_max; ++mu) {
          t += series[mu] * cm;
          const double next = 2.0 * ck * cm - cm_prev;
          cm_prev = cm;
          cm = next;
        }
        v = detail::radial_factor(p, omega) * t;
      }
      const size_t idx = static_cast<size_t>(ky) * n + kx;
      if (my == ky && mx == kx) {
        spec[idx] = v.real();
      } else {
        spec[idx] = v;
        spec[static_cast<size_t>(my) * n + mx] = std::conj(v);
      }
    }
  }
  for (int ky = 0; ky < n; ++ky) {
    for (int kx = 0; kx < n; ++kx) {
      spec[static_cast<size_t>(ky) * n + kx] *= fft::center_sign(kx, ky);
    }
  }
  fft::c2c(spec, n, true);
  Raster out;
  out.n = n;
  out.pitch = pitch;
  out.pix.resize(spec.size());
  const double scale = 1.0 / (static_cast<double>(n) * n);
  for (size_t i = 0; i < spec.size(); ++i) out.pix[i] = spec[i].real() * scale;
  return out;
}

}  // namespace steerbound

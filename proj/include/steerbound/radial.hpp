#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "steerbound/common.hpp"
#include "steerbound/quadrature.hpp"

namespace steerbound {

enum class ProfileFamily { meyer, shannon, simoncelli, log };

inline const char* family_name(ProfileFamily f) {
  switch (f) {
    case ProfileFamily::meyer: return "meyer";
    case ProfileFamily::shannon: return "shannon";
    case ProfileFamily::simoncelli: return "simoncelli";
    default: return "log";
  }
}

namespace detail {

/// Meyer transition polynomial: C^3 monotone ramp from 0 to 1 on [0, 1].
inline double meyer_nu(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * t * t * (35.0 + t * (-84.0 + t * (70.0 - 20.0 * t)));
}

inline double raw_profile(ProfileFamily family, double sigma_g, double omega) {
  switch (family) {
    case ProfileFamily::meyer:
      if (omega <= kPi / 4 || omega > kPi) return 0.0;
      if (omega <= kPi / 2)
        return std::sin(kPi / 2 * meyer_nu(4.0 * omega / kPi - 1.0));
      return std::cos(kPi / 2 * meyer_nu(2.0 * omega / kPi - 1.0));
    case ProfileFamily::shannon:
      return (omega > kPi / 2 && omega <= kPi) ? 1.0 : 0.0;
    case ProfileFamily::simoncelli:
      if (omega <= kPi / 4 || omega > kPi) return 0.0;
      return std::cos(kPi / 2 * std::log2(2.0 * omega / kPi));
    default:  // LoG
      if (omega <= 0.0) return 0.0;
      return omega * omega * std::exp(-sigma_g * sigma_g * omega * omega / 2);
  }
}

}  // namespace detail

/// A radial frequency profile h(omega) >= 0 with its unit-norm scaling.
/// Bandpass families live on (pi/4, pi] (Shannon on (pi/2, pi]); the LoG
/// family spans (0, inf) and is restricted to single-scale use.
class RadialProfile {
 public:
  static RadialProfile make(ProfileFamily family, double sigma_g = 2.0);

  static RadialProfile meyer() { return make(ProfileFamily::meyer); }
  static RadialProfile shannon() { return make(ProfileFamily::shannon); }
  static RadialProfile simoncelli() { return make(ProfileFamily::simoncelli); }
  static RadialProfile log(double sigma_g = 2.0) {
    return make(ProfileFamily::log, sigma_g);
  }

  ProfileFamily family() const { return family_; }
  double sigma_g() const { return sigma_g_; }
  double norm_constant() const { return norm_; }
  bool bandpass() const { return family_ != ProfileFamily::log; }
  double support_lo() const { return lo_; }
  double support_hi() const { return hi_; }
  std::string name() const { return family_name(family_); }

  /// Quadrature breakpoints: segment knots of the (normalized) profile.
  std::vector<double> knots() const {
    if (family_ == ProfileFamily::log) return {0.0, 1.0 / sigma_g_, hi_};
    if (family_ == ProfileFamily::shannon) return {kPi / 2, kPi};
    return {kPi / 4, kPi / 2, kPi};
  }

 private:
  RadialProfile(ProfileFamily f, double sg, double lo, double hi, double norm)
      : family_(f), sigma_g_(sg), lo_(lo), hi_(hi), norm_(norm) {}

  ProfileFamily family_;
  double sigma_g_;
  double lo_, hi_;
  double norm_;
};

/// Normalized profile value; exactly 0 outside the declared support.
inline double eval_profile(const RadialProfile& p, double omega) {
  return p.norm_constant() * detail::raw_profile(p.family(), p.sigma_g(), omega);
}

/// Dilated-by-2^i profile 2^i h(2^i omega); the scale-i wavelet radial part.
/// Larger i means lower frequencies, i = 0 is the fundamental band.
inline double eval_profile_dilated(const RadialProfile& p, int scale_i,
                                   double omega) {
  const double s = std::ldexp(1.0, scale_i);
  return s * eval_profile(p, s * omega);
}

/// b_z = (1/2pi) Int omega^z h(omega)^2 omega d omega over the support.
inline double spectral_moment_b(const RadialProfile& p, double z) {
  if (p.family() == ProfileFamily::log && z <= -2.0) {
    throw NonConvergentIntegral("LoG spectral moment b_z requires z > -2");
  }
  auto f = [&](double w) {
    const double h = eval_profile(p, w);
    return std::pow(w, z + 1.0) * h * h / (2 * kPi);
  };
  return integrate_segments(f, p.knots());
}

/// d_z = (1/2pi) Int omega^z h(omega) h(2 omega) omega d omega; the
/// adjacent-scale spectral overlap. Zero for Shannon (disjoint supports).
inline double spectral_moment_d(const RadialProfile& p, double z) {
  if (!p.bandpass()) {
    throw UnsupportedProfile("d_z undefined for LoG: no compact support");
  }
  if (p.family() == ProfileFamily::shannon) return 0.0;
  auto f = [&](double w) {
    return std::pow(w, z + 1.0) * eval_profile(p, w) * eval_profile(p, 2 * w) /
           (2 * kPi);
  };
  // h(w) h(2w) is supported on (pi/4, pi/2]; both factors are on a single
  // smooth branch there.
  return integrate_segments(f, {kPi / 4, kPi / 2});
}

inline RadialProfile RadialProfile::make(ProfileFamily family, double sigma_g) {
  double lo, hi;
  switch (family) {
    case ProfileFamily::shannon:
      lo = kPi / 2; hi = kPi; break;
    case ProfileFamily::log:
      // Cut where exp(-sigma^2 w^2) < 1e-39; the truncated tail is far
      // below quadrature tolerance for every admissible moment order.
      lo = 0.0; hi = std::sqrt(90.0) / sigma_g; break;
    default:
      lo = kPi / 4; hi = kPi; break;
  }
  RadialProfile p(family, sigma_g, lo, hi, 1.0);
  const double b0_raw = spectral_moment_b(p, 0.0);
  if (!(b0_raw > 0.0)) throw IllPosed("profile has zero energy");
  p.norm_ = 1.0 / std::sqrt(b0_raw);
  return p;
}

/// The four scalars every bound depends on. B is the per-harmonic
/// measurement variance, D the adjacent-scale covariance of the normalized
/// wavelet measurements.
struct SpectralConstants {
  double b_z = 0.0;
  double d_z = 0.0;
  double B = 0.0;
  double D = 0.0;
  double gamma = 0.0;
  double sigma0 = 1.0;
  /// Degenerate gamma of this profile (+inf when none exists).
  double gamma_excluded = kInf;
  std::string profile_name;
};

inline double excluded_gamma(const RadialProfile& p);

/// B = sigma0^2 b_{-2 gamma}, D = sigma0^2 2^{1-gamma} d_{-2 gamma}.
inline SpectralConstants noise_constants(const RadialProfile& p, double gamma,
                                         double sigma0) {
  if (!(gamma >= 0.0) || !(sigma0 > 0.0)) {
    throw IllPosed("noise_constants requires gamma >= 0 and sigma0 > 0");
  }
  SpectralConstants c;
  c.gamma = gamma;
  c.sigma0 = sigma0;
  c.profile_name = p.name();
  if (p.bandpass()) {
    try {
      c.gamma_excluded = excluded_gamma(p);
    } catch (const NoSolution&) {
      c.gamma_excluded = kInf;  // no unit-circle zero, nothing to exclude
    }
  }
  c.b_z = spectral_moment_b(p, -2.0 * gamma);
  c.d_z = p.bandpass() ? spectral_moment_d(p, -2.0 * gamma) : 0.0;
  c.B = sigma0 * sigma0 * c.b_z;
  c.D = sigma0 * sigma0 * std::pow(2.0, 1.0 - gamma) * c.d_z;
  if (!(c.B > 2.0 * std::abs(c.D))) {
    throw IllPosed("covariance constants violate B > 2|D|");
  }
  return c;
}

/// The gamma at which the scale-coupling filter gains a unit-circle zero
/// and the wavelet asymptotics degenerate: 2^{1+g} + 2^{1-g} = r with
/// r the line-measure spectral overlap ratio. +inf when the profile has
/// no adjacent-scale overlap.
inline double excluded_gamma(const RadialProfile& p) {
  const double d = std::abs(spectral_moment_d(p, -1.0));
  if (d < 1e-12) return kInf;
  const double r = spectral_moment_b(p, -1.0) / d;
  if (r < 4.0) {
    throw NoSolution("excluded gamma: no real solution (ratio < 4)");
  }
  const double x = (r + std::sqrt(r * r - 16.0)) / 4.0;
  return std::log2(x);
}

}  // namespace steerbound

#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "steerbound/common.hpp"
#include "steerbound/fft.hpp"
#include "steerbound/filterbank.hpp"
#include "steerbound/radial.hpp"
#include "steerbound/rng.hpp"

namespace steerbound {

/// Isotropic power-law Gaussian field: PSD sigma0^2 |omega|^{-2 gamma}.
/// gamma = 0 is white noise.
struct NoiseModel {
  double gamma = 0.0;
  double sigma0 = 1.0;
};

namespace detail {

inline void validate_model(const NoiseModel& m) {
  if (!(m.gamma >= 0.0) || !std::isfinite(m.gamma) || !(m.sigma0 > 0.0) ||
      !std::isfinite(m.sigma0)) {
    throw std::invalid_argument("noise model needs gamma >= 0, sigma0 > 0");
  }
}

}  // namespace detail

/// Draws one field realization on an n-by-n unit-pitch grid, n a power of
/// two >= 64. Spectral synthesis: independent complex Gaussians per
/// canonical-half bin with variance sigma0^2 n^2 |omega_k|^{-2 gamma},
/// Hermitian mirror, zeroed DC. The counter RNG keys each bin by its flat
/// index, so a given (seed, n) pair is bit-reproducible regardless of
/// evaluation order.
inline Raster synthesize(const NoiseModel& m, int n, std::uint64_t seed) {
  detail::validate_model(m);
  if (n < 64 || (n & (n - 1)) != 0) {
    throw std::invalid_argument("noise grid side must be a power of two >= 64");
  }
  std::vector<cplx> spec(static_cast<std::size_t>(n) * n, 0.0);
  const double amp2_scale = m.sigma0 * m.sigma0 * n * n;
  for (int ky = 0; ky < n; ++ky) {
    for (int kx = 0; kx < n; ++kx) {
      const int mx = (n - kx) % n, my = (n - ky) % n;
      if (std::make_pair(my, mx) < std::make_pair(ky, kx)) continue;
      if (kx == 0 && ky == 0) continue;  // DC carries no noise power
      const double wx = fft::omega_component(kx, n);
      const double wy = fft::omega_component(ky, n);
      const double v = amp2_scale * std::pow(std::hypot(wx, wy), -2.0 * m.gamma);
      double g0, g1;
      rng::gauss_pair(seed, static_cast<std::uint64_t>(ky) * n + kx, g0, g1);
      if (mx == kx && my == ky) {
        spec[static_cast<std::size_t>(ky) * n + kx] = std::sqrt(v) * g0;
      } else {
        const cplx z = std::sqrt(0.5 * v) * cplx(g0, g1);
        spec[static_cast<std::size_t>(ky) * n + kx] = z;
        spec[static_cast<std::size_t>(my) * n + mx] = std::conj(z);
      }
    }
  }
  fft::c2c(spec, n, true);
  Raster out;
  out.n = n;
  out.pitch = 1.0;
  out.pix.resize(spec.size());
  const double inv_area = 1.0 / (static_cast<double>(n) * n);
  for (std::size_t p = 0; p < spec.size(); ++p)
    out.pix[p] = spec[p].real() * inv_area;
  return out;
}

/// Covariance of the bank measurements under the model. Single-scale banks
/// give a diagonal sigma0^2 4^{i gamma} b_{-2 gamma}; wavelet banks are
/// stated for the normalized measurements 2^{-i gamma} q_{n,i} and couple
/// only (n, i) with (n, i +- 1): B on the diagonal, D off it.
inline Eigen::MatrixXd measurement_covariance(const RadialProfile& prof,
                                              const std::vector<BankEntry>& entries,
                                              const NoiseModel& m,
                                              TableConvention convention) {
  detail::validate_model(m);
  if (entries.empty()) throw std::invalid_argument("empty entry list");
  const Eigen::Index d = static_cast<Eigen::Index>(entries.size());
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
  if (convention == TableConvention::single_scale) {
    for (std::size_t a = 1; a < entries.size(); ++a) {
      if (entries[a].i != entries[0].i) {
        throw std::invalid_argument(
            "single-scale covariance requires one common scale");
      }
    }
    double b;
    try {
      b = spectral_moment_b(prof, -2.0 * m.gamma);
    } catch (const NonConvergentIntegral&) {
      throw IllPosed("spectral moment b_{-2 gamma} diverges for this profile");
    }
    const double var = m.sigma0 * m.sigma0 *
                       std::pow(2.0, 2.0 * entries[0].i * m.gamma) * b;
    for (Eigen::Index a = 0; a < d; ++a) cov(a, a) = var;
    return cov;
  }
  if (!prof.bandpass()) {
    throw UnsupportedProfile("wavelet covariance requires a bandpass profile");
  }
  const SpectralConstants c = noise_constants(prof, m.gamma, m.sigma0);
  for (Eigen::Index a = 0; a < d; ++a) {
    cov(a, a) = c.B;
    for (Eigen::Index b = a + 1; b < d; ++b) {
      if (entries[a].n == entries[b].n &&
          std::abs(entries[a].i - entries[b].i) == 1) {
        cov(a, b) = cov(b, a) = c.D;
      }
    }
  }
  return cov;
}

/// sigma0 achieving the target matched-filter output SNR in dB: pattern
/// energy squared over the noise variance at the output of the
/// pattern-matched correlator, E^2 / Var<S, J>. Both sums live on the
/// pattern's own spectral support, so the value does not drift with the
/// window size the way full-window mean squares do once the long-range
/// gamma > 1 background dominates the field variance.
inline double snr_scale(const Raster& pattern, const NoiseModel& m,
                        double target_db) {
  if (!(m.gamma >= 0.0) || !std::isfinite(m.gamma)) {
    throw std::invalid_argument("snr_scale needs gamma >= 0");
  }
  if (pattern.n <= 0) throw std::invalid_argument("empty pattern raster");
  double energy = 0.0;
  for (double v : pattern.pix) energy += v * v;
  if (energy == 0.0) throw ZeroPattern("pattern raster is identically zero");

  const int n = pattern.n;
  std::vector<cplx> spec(pattern.pix.begin(), pattern.pix.end());
  fft::c2c(spec, n, false);
  // Var<S, J> at sigma0 = 1; the synthesis spectrum is N^2 |omega|^{-2 gamma}
  // per bin with the DC bin zeroed.
  double var_unit = 0.0;
  for (int ky = 0; ky < n; ++ky) {
    for (int kx = 0; kx < n; ++kx) {
      if (kx == 0 && ky == 0) continue;
      const double w = std::hypot(fft::omega_component(kx, n),
                                  fft::omega_component(ky, n));
      var_unit += std::norm(spec[static_cast<std::size_t>(ky) * n + kx]) *
                  std::pow(w, -2.0 * m.gamma);
    }
  }
  var_unit /= static_cast<double>(n) * n;
  if (var_unit == 0.0) {
    throw IllPosed(
        "pattern energy sits entirely in the DC bin, which the noise "
        "synthesis zeroes; no finite sigma0 reaches the target SNR");
  }
  return energy * std::sqrt(std::pow(10.0, -target_db / 10.0) / var_unit);
}

}  // namespace steerbound

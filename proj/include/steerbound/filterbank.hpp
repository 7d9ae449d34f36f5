#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "steerbound/common.hpp"
#include "steerbound/fft.hpp"
#include "steerbound/patterns.hpp"
#include "steerbound/radial.hpp"

namespace steerbound {

/// One filter slot: angular harmonic n at dyadic scale i.
struct BankEntry {
  int n = 0;
  int i = 0;
};

inline bool operator==(BankEntry a, BankEntry b) {
  return a.n == b.n && a.i == b.i;
}

inline bool operator<(BankEntry a, BankEntry b) {
  return a.n != b.n ? a.n < b.n : a.i < b.i;
}

/// Complex values addressed by (harmonic, scale). Used both for measured
/// filter responses and for template coefficients; the two must share an
/// index set before they can be compared or steered against each other.
struct IndexedVector {
  std::vector<BankEntry> index;
  std::vector<cplx> value;

  std::size_t size() const { return index.size(); }

  bool has(int n, int i = 0) const {
    for (const auto& e : index)
      if (e.n == n && e.i == i) return true;
    return false;
  }

  cplx at(int n, int i = 0) const {
    for (std::size_t p = 0; p < index.size(); ++p)
      if (index[p].n == n && index[p].i == i) return value[p];
    throw MissingCoefficient("no entry for harmonic " + std::to_string(n) +
                             " at scale " + std::to_string(i));
  }
};

using MeasurementVector = IndexedVector;

/// A steerable bank: one radial profile, a set of angular harmonics, and a
/// set of dyadic scales. Frequency responses are sigma_n h_i(omega)
/// e^{j n phi} with sigma_n = (-j)^|n|, so every spatial filter is a real
/// radial part times e^{j n beta}.
class FilterBank {
 public:
  FilterBank(RadialProfile profile, std::vector<int> harmonics,
             std::vector<int> scales = {0})
      : profile_(std::move(profile)),
        harmonics_(std::move(harmonics)),
        scales_(std::move(scales)) {
    if (harmonics_.empty() || scales_.empty()) {
      throw std::invalid_argument("filter bank needs harmonics and scales");
    }
    auto distinct = [](std::vector<int> v) {
      std::sort(v.begin(), v.end());
      return std::adjacent_find(v.begin(), v.end()) == v.end();
    };
    if (!distinct(harmonics_) || !distinct(scales_)) {
      throw std::invalid_argument("duplicate harmonic or scale in bank");
    }
    if (!profile_.bandpass() &&
        (scales_.size() != 1 || scales_[0] != 0)) {
      throw UnsupportedProfile("LoG profile admits only the single scale 0");
    }
    for (int n : harmonics_)
      for (int i : scales_) entries_.push_back({n, i});
  }

  const RadialProfile& profile() const { return profile_; }
  const std::vector<int>& harmonics() const { return harmonics_; }
  const std::vector<int>& scales() const { return scales_; }
  const std::vector<BankEntry>& entries() const { return entries_; }

  bool single_scale() const {
    return scales_.size() == 1 && scales_[0] == 0;
  }

  /// Frequency response of entry (n, i) at Cartesian frequency (wx, wy).
  cplx response(int n, int i, double wx, double wy) const {
    const double w = std::hypot(wx, wy);
    const double h = eval_profile_dilated(profile_, i, w);
    if (h == 0.0) return 0.0;
    const double phi = std::atan2(wy, wx);
    return harmonic_phase(n) * h *
           std::exp(cplx(0.0, static_cast<double>(n) * phi));
  }

  /// DFT-grid evaluation of the whole bank, cached per (side, pitch).
  /// weights[e][b] is conj(response) * centering sign / N^2 at the b-th
  /// in-band bin of e's scale, so a measurement is a plain dot product
  /// with the image spectrum.
  struct GridCache {
    std::vector<std::vector<int>> bins;        // per scale position
    std::vector<std::vector<cplx>> weights;    // per entry position
  };

  std::shared_ptr<const GridCache> grid_cache(int side, double pitch) const {
    const auto key = std::make_pair(side, pitch);
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto it = caches_.find(key);
    if (it != caches_.end()) return it->second;
    auto cache = build_cache(side, pitch);
    caches_.emplace(key, cache);
    return cache;
  }

 private:
  std::shared_ptr<const GridCache> build_cache(int side, double pitch) const {
    auto cache = std::make_shared<GridCache>();
    cache->bins.resize(scales_.size());
    const double wscale = 1.0 / pitch;  // grid frequency -> physical
    for (std::size_t s = 0; s < scales_.size(); ++s) {
      for (int ky = 0; ky < side; ++ky) {
        const double wy = fft::omega_component(ky, side) * wscale;
        for (int kx = 0; kx < side; ++kx) {
          const double wx = fft::omega_component(kx, side) * wscale;
          if (eval_profile_dilated(profile_, scales_[s], std::hypot(wx, wy)) !=
              0.0) {
            cache->bins[s].push_back(ky * side + kx);
          }
        }
      }
    }
    const double inv_area = 1.0 / (static_cast<double>(side) * side);
    cache->weights.resize(entries_.size());
    for (std::size_t e = 0; e < entries_.size(); ++e) {
      const auto ent = entries_[e];
      const std::size_t s =
          std::find(scales_.begin(), scales_.end(), ent.i) - scales_.begin();
      const auto& bins = cache->bins[s];
      auto& w = cache->weights[e];
      w.reserve(bins.size());
      for (int bin : bins) {
        const int kx = bin % side, ky = bin / side;
        const double wx = fft::omega_component(kx, side) * wscale;
        const double wy = fft::omega_component(ky, side) * wscale;
        cplx v = std::conj(response(ent.n, ent.i, wx, wy));
        // Self-conjugate bins stand for a +-omega pair the half-open
        // Brillouin zone collapses; averaging with the mirror filter
        // restores the exact q_{-n} = conj(q_n) identity there.
        if ((kx == 0 || 2 * kx == side) && (ky == 0 || 2 * ky == side)) {
          v = 0.5 * (v + response(-ent.n, ent.i, wx, wy));
        }
        w.push_back(v * fft::center_sign(kx, ky) * inv_area);
      }
    }
    return cache;
  }

  RadialProfile profile_;
  std::vector<int> harmonics_;
  std::vector<int> scales_;
  std::vector<BankEntry> entries_;
  mutable std::mutex cache_mutex_;
  mutable std::map<std::pair<int, double>, std::shared_ptr<const GridCache>>
      caches_;
};

/// Inner products of the image against every bank filter, filters centered
/// at the image midpoint (side/2, side/2).
inline MeasurementVector measure(const Raster& image, const FilterBank& bank) {
  if (image.n < 16 || image.pix.size() != static_cast<std::size_t>(image.n) *
                                              image.n) {
    throw std::invalid_argument("measure: bad image dimensions");
  }
  const double nyquist = kPi / image.pitch;
  for (int i : bank.scales()) {
    if (bank.profile().support_hi() * std::ldexp(1.0, -i) >
        nyquist * (1.0 + 1e-9)) {
      throw NyquistViolation("scale " + std::to_string(i) +
                             " band exceeds the grid Nyquist rate");
    }
  }
  auto cache = bank.grid_cache(image.n, image.pitch);
  std::vector<cplx> spec(image.pix.begin(), image.pix.end());
  fft::c2c(spec, image.n, false);

  MeasurementVector out;
  out.index = bank.entries();
  out.value.reserve(out.index.size());
  for (std::size_t e = 0; e < out.index.size(); ++e) {
    const std::size_t s = std::find(bank.scales().begin(), bank.scales().end(),
                                    out.index[e].i) -
                          bank.scales().begin();
    const auto& bins = cache->bins[s];
    const auto& w = cache->weights[e];
    cplx q = 0.0;
    for (std::size_t b = 0; b < bins.size(); ++b) q += spec[bins[b]] * w[b];
    out.value.push_back(q);
  }
  return out;
}

namespace detail {

inline std::vector<BankEntry> sorted_index(const IndexedVector& v) {
  auto s = v.index;
  std::sort(s.begin(), s.end());
  return s;
}

}  // namespace detail

/// Correlation of the measurements with the template steered to theta0:
/// Re sum_a q_a conj(c_a) e^{-j n_a theta0}. A positive-only index set is
/// implicitly completed with its Hermitian mirror, which doubles each
/// unmirrored term's real part.
inline double steer_response(const MeasurementVector& q, const IndexedVector& c,
                             double theta0) {
  if (detail::sorted_index(q) != detail::sorted_index(c)) {
    throw IndexMismatch("measurement and template index sets differ");
  }
  cplx acc = 0.0;
  for (std::size_t p = 0; p < q.index.size(); ++p) {
    const auto e = q.index[p];
    const cplx term = q.value[p] * std::conj(c.at(e.n, e.i)) *
                      std::exp(cplx(0.0, -static_cast<double>(e.n) * theta0));
    acc += term;
    if (!q.has(-e.n, e.i)) acc += std::conj(term);
  }
  return acc.real();
}

/// Template coefficients of a pattern under this bank: the ideal noiseless
/// measurements at theta* = 0.
inline IndexedVector project_pattern(const Pattern& pattern,
                                     const FilterBank& bank) {
  const HarmonicTable table =
      bank.single_scale()
          ? harmonic_coefficients(pattern, bank.profile(), bank.harmonics())
          : wavelet_coefficients(pattern, bank.profile(), bank.harmonics(),
                                 bank.scales());
  IndexedVector c;
  c.index = bank.entries();
  c.value.reserve(c.index.size());
  for (const auto& e : c.index) c.value.push_back(table.at(e.n, e.i));
  return c;
}

}  // namespace steerbound

#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "steerbound/crlb.hpp"
#include "steerbound/patterns.hpp"
#include "steerbound/radial.hpp"

namespace steerbound {

/// A maximal run of consecutive scales sharing one harmonic. The
/// measurement covariance is block tridiagonal with one block per group.
struct ScaleGroup {
  int n = 0;           // positive harmonic
  int start_scale = 0; // finest scale in the run
  int length = 0;      // number of consecutive scales
};

struct Grouping {
  std::vector<ScaleGroup> groups;

  int total_indices() const {
    int t = 0;
    for (const auto& g : groups) t += g.length;
    return t;
  }
};

/// Canonicalizes a wavelet index set: harmonics fold to |n|, scales sort,
/// and consecutive runs merge. Group order is (harmonic, start scale).
inline Grouping group_indices(std::vector<std::pair<int, int>> indices) {
  if (indices.empty()) throw std::invalid_argument("empty index set");
  for (auto& [n, i] : indices) {
    if (n == 0) {
      throw std::invalid_argument("harmonic 0 carries no angle information");
    }
    n = std::abs(n);
  }
  std::sort(indices.begin(), indices.end());
  if (std::adjacent_find(indices.begin(), indices.end()) != indices.end()) {
    throw DuplicateIndex("index set repeats a (harmonic, scale) pair");
  }
  Grouping g;
  for (const auto& [n, i] : indices) {
    if (!g.groups.empty() && g.groups.back().n == n &&
        g.groups.back().start_scale + g.groups.back().length == i) {
      ++g.groups.back().length;
    } else {
      g.groups.push_back({n, i, 1});
    }
  }
  return g;
}

/// Symmetric tridiagonal Toeplitz block: b on the diagonal, d off it.
struct TridiagonalBlock {
  int size = 0;
  double b = 0.0;
  double d = 0.0;
};

/// Closed-form spectrum: lambda_t = b + 2 d cos(t pi / (l+1)) with sine
/// eigenvectors v_t[e] = sin(e t pi / (l+1)), ||v_t||^2 = (l+1)/2.
struct BlockEigensystem {
  std::vector<double> eigenvalues;
  std::vector<std::vector<double>> eigenvectors;  // [t-1][e-1], unnormalized
};

inline BlockEigensystem block_eigensystem(const TridiagonalBlock& blk) {
  if (blk.size < 1) throw std::invalid_argument("block size must be >= 1");
  BlockEigensystem sys;
  const int l = blk.size;
  for (int t = 1; t <= l; ++t) {
    const double angle = t * kPi / (l + 1);
    sys.eigenvalues.push_back(blk.b + 2.0 * blk.d * std::cos(angle));
    std::vector<double> v(l);
    for (int e = 1; e <= l; ++e) v[e - 1] = std::sin(e * angle);
    sys.eigenvectors.push_back(std::move(v));
  }
  return sys;
}

/// Fisher information for the angle from normalized wavelet measurements,
/// evaluated group by group through the closed-form block eigensystem.
/// Refuses gammas within 1e-6 of the profile's degenerate point.
inline double fisher_wavelet(const HarmonicTable& u,
                             const SpectralConstants& c,
                             const Grouping& grouping) {
  if (std::isfinite(c.gamma_excluded) &&
      std::abs(c.gamma - c.gamma_excluded) < 1e-6) {
    throw ExcludedGamma("gamma sits on the profile's degenerate point");
  }
  if (!c.profile_name.empty() && !u.profile_name.empty() &&
      c.profile_name != u.profile_name) {
    throw GroupingMismatch("constants and table come from different profiles");
  }
  if (grouping.groups.empty()) {
    throw GroupingMismatch("empty grouping");
  }
  double info = 0.0;
  for (const auto& g : grouping.groups) {
    for (int e = 1; e <= g.length; ++e) {
      if (!u.has(g.n, g.start_scale + e - 1)) {
        throw GroupingMismatch("table lacks harmonic " + std::to_string(g.n) +
                               " at scale " +
                               std::to_string(g.start_scale + e - 1));
      }
    }
    const int l = g.length;
    double block_info = 0.0;
    for (int t = 1; t <= l; ++t) {
      const double lam = c.B + 2.0 * c.D * std::cos(t * kPi / (l + 1));
      cplx proj = 0.0;
      for (int e = 1; e <= l; ++e) {
        const int scale = g.start_scale + e - 1;
        const double norm_w = std::pow(2.0, -scale * c.gamma);
        proj += norm_w * u.at(g.n, scale) * std::sin(e * t * kPi / (l + 1));
      }
      block_info += std::norm(proj) / lam;
    }
    // 2/(l+1) restores the sine eigenvector normalization
    info += static_cast<double>(g.n) * g.n * (2.0 / (l + 1)) * block_info;
  }
  return 2.0 * info;
}

/// Exact CRLB bracketed by the closed-form bounds that replace each
/// covariance eigenvalue with B -+ 2|D|.
struct CrlbBounds {
  double exact = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

inline CrlbBounds crlb_bounds(const HarmonicTable& u,
                              const SpectralConstants& c,
                              const Grouping& grouping) {
  const double info = fisher_wavelet(u, c, grouping);
  double weight = 0.0;  // sum n^2 4^{-i gamma} |u_{n,i}|^2
  for (const auto& g : grouping.groups) {
    for (int e = 0; e < g.length; ++e) {
      const int scale = g.start_scale + e;
      weight += static_cast<double>(g.n) * g.n *
                std::pow(2.0, -2.0 * scale * c.gamma) *
                std::norm(u.at(g.n, scale));
    }
  }
  CrlbBounds out;
  out.exact = info > 0.0 ? 1.0 / info : kInf;
  if (weight > 0.0) {
    out.lower = (c.B - 2.0 * std::abs(c.D)) / (2.0 * weight);
    out.upper = (c.B + 2.0 * std::abs(c.D)) / (2.0 * weight);
  } else {
    out.lower = out.upper = kInf;
  }
  return out;
}

/// Reference Fisher information 2 Re(d^H C^{-1} d) for an arbitrary SPD
/// covariance; the oracle the structured path is checked against.
inline double fisher_bruteforce(const Eigen::VectorXcd& d,
                                const Eigen::MatrixXcd& cov) {
  if (cov.rows() != cov.cols() || cov.rows() != d.size() || d.size() == 0) {
    throw std::invalid_argument("fisher_bruteforce: dimension mismatch");
  }
  Eigen::LLT<Eigen::MatrixXcd> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw SingularCovariance("covariance is not positive definite");
  }
  return 2.0 * (d.adjoint() * llt.solve(d))(0, 0).real();
}

/// Bounds as a function of the scale count S, bands {0, -1, ..., -(S-1)}:
/// each added band is one octave finer. Answers whether more scales keep
/// paying off (lambda < gamma + 1) or saturate (lambda > gamma + 1).
struct WaveletCrlbReport {
  std::vector<int> scale_counts;
  std::vector<CrlbBounds> values;
  std::vector<int> harmonics;
  double gamma = 0.0;
  double sigma0 = 1.0;
  std::string profile_name;
};

inline WaveletCrlbReport wavelet_crlb_curve(const Pattern& p,
                                            const RadialProfile& prof,
                                            const NoiseModel& m,
                                            const std::vector<int>& harmonics,
                                            int s_max) {
  if (s_max < 1) throw std::invalid_argument("need at least one scale");
  const SpectralConstants c = noise_constants(prof, m.gamma, m.sigma0);
  WaveletCrlbReport rep;
  rep.harmonics = harmonics;
  rep.gamma = m.gamma;
  rep.sigma0 = m.sigma0;
  rep.profile_name = prof.name();
  for (int s = 1; s <= s_max; ++s) {
    std::vector<int> scales;
    for (int i = 0; i > -s; --i) scales.push_back(i);
    const HarmonicTable u = wavelet_coefficients(p, prof, harmonics, scales);
    std::vector<std::pair<int, int>> indices;
    for (int n : harmonics)
      for (int i : scales) indices.emplace_back(n, i);
    rep.scale_counts.push_back(s);
    rep.values.push_back(crlb_bounds(u, c, group_indices(indices)));
  }
  return rep;
}

}  // namespace steerbound

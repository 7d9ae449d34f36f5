#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "steerbound/noise.hpp"
#include "steerbound/patterns.hpp"
#include "steerbound/radial.hpp"

namespace steerbound {

/// Harmonic budget policies: lowest N, largest-information N, or the first
/// N multiples of the pattern's fold symmetry.
enum class Strategy { first_n, best_n, kfold };

inline const char* strategy_name(Strategy s) {
  switch (s) {
    case Strategy::first_n: return "first_n";
    case Strategy::best_n: return "best_n";
    default: return "kfold";
  }
}

/// Fisher information for the rotation angle from single-scale measurements
/// on the positive harmonic set: 2 sum n^2 |u_n|^2 / Var(q_n).
inline double fisher_single(const HarmonicTable& u, const RadialProfile& prof,
                            const NoiseModel& m,
                            const std::vector<int>& harmonics) {
  detail::validate_model(m);
  if (harmonics.empty()) {
    throw std::invalid_argument("fisher_single: empty harmonic set");
  }
  double b;
  try {
    b = spectral_moment_b(prof, -2.0 * m.gamma);
  } catch (const NonConvergentIntegral&) {
    throw IllPosed("measurement variance diverges for this profile and gamma");
  }
  const double var = m.sigma0 * m.sigma0 * b;
  double info = 0.0;
  for (int n : harmonics) {
    if (n <= 0) {
      throw std::invalid_argument("harmonic set must be strictly positive");
    }
    info += static_cast<double>(n) * n * std::norm(u.at(n, 0));
  }
  return 2.0 * info / var;
}

/// Angle-estimation variance floor; +inf when the set carries no
/// information about the angle.
inline double crlb_single(const HarmonicTable& u, const RadialProfile& prof,
                          const NoiseModel& m,
                          const std::vector<int>& harmonics) {
  const double info = fisher_single(u, prof, m, harmonics);
  return info > 0.0 ? 1.0 / info : kInf;
}

/// Picks a size-budget harmonic set from the table. first_n and kfold
/// demand the full consecutive run be present; best_n ranks present
/// positive harmonics by n^2 |u_n|^2, ties to the smaller harmonic.
/// Returned sets are ascending.
inline std::vector<int> select_harmonics(const HarmonicTable& u, int budget,
                                         Strategy strategy, int fold = 0) {
  if (budget < 1) throw std::invalid_argument("harmonic budget must be >= 1");
  std::vector<int> out;
  switch (strategy) {
    case Strategy::first_n:
      for (int n = 1; n <= budget; ++n) {
        if (!u.has(n, 0)) {
          throw InsufficientTable("table lacks harmonic " + std::to_string(n));
        }
        out.push_back(n);
      }
      return out;
    case Strategy::kfold:
      if (fold < 1) throw std::invalid_argument("kfold needs fold >= 1");
      for (int t = 1; t <= budget; ++t) {
        if (!u.has(fold * t, 0)) {
          throw InsufficientTable("table lacks harmonic " +
                                  std::to_string(fold * t));
        }
        out.push_back(fold * t);
      }
      return out;
    default: {
      auto present = u.positive_harmonics();
      if (static_cast<int>(present.size()) < budget) {
        throw InsufficientTable("table has fewer positive harmonics than the budget");
      }
      std::stable_sort(present.begin(), present.end(), [&](int a, int b) {
        const double sa = static_cast<double>(a) * a * std::norm(u.at(a, 0));
        const double sb = static_cast<double>(b) * b * std::norm(u.at(b, 0));
        return sa != sb ? sa > sb : a < b;
      });
      out.assign(present.begin(), present.begin() + budget);
      std::sort(out.begin(), out.end());
      return out;
    }
  }
}

/// One bound per budget N = 1..n_max under a fixed selection policy.
struct CrlbReport {
  Strategy strategy = Strategy::first_n;
  std::vector<std::vector<int>> harmonic_sets;
  std::vector<double> crlb;  // rad^2, aligned with harmonic_sets
  double gamma = 0.0;
  double sigma0 = 1.0;
  std::string profile_name;
};

inline CrlbReport crlb_curve(const HarmonicTable& u, const RadialProfile& prof,
                             const NoiseModel& m, Strategy strategy, int n_max,
                             int fold = 0) {
  if (n_max < 1) throw std::invalid_argument("crlb_curve: n_max must be >= 1");
  CrlbReport rep;
  rep.strategy = strategy;
  rep.gamma = m.gamma;
  rep.sigma0 = m.sigma0;
  rep.profile_name = prof.name();
  for (int budget = 1; budget <= n_max; ++budget) {
    auto set = select_harmonics(u, budget, strategy, fold);
    rep.crlb.push_back(crlb_single(u, prof, m, set));
    rep.harmonic_sets.push_back(std::move(set));
  }
  return rep;
}

enum class SeriesVerdict { converging, diverging, inconclusive };

inline const char* verdict_name(SeriesVerdict v) {
  switch (v) {
    case SeriesVerdict::converging: return "converging";
    case SeriesVerdict::diverging: return "diverging";
    default: return "inconclusive";
  }
}

/// Advisory tail diagnostic for the information series sum n^2 |u_n|^2:
/// partial sums plus a log-log decay fit of |u_n| over the upper half of
/// the table. Decay slower than n^{-1.1} reads as diverging, faster than
/// n^{-1.5} as converging.
struct ConvergenceDiagnostic {
  std::vector<double> partial_sums;  // cumulative over n = 1..n_max
  double fitted_decay_exponent = 0.0;
  SeriesVerdict verdict = SeriesVerdict::inconclusive;
};

inline ConvergenceDiagnostic convergence_diagnostic(const HarmonicTable& u,
                                                    int n_max) {
  if (n_max < 16) {
    throw std::invalid_argument("diagnostic needs n_max >= 16");
  }
  ConvergenceDiagnostic diag;
  double acc = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    if (u.has(n, 0)) acc += static_cast<double>(n) * n * std::norm(u.at(n, 0));
    diag.partial_sums.push_back(acc);
  }
  std::vector<double> lx, ly;
  for (int n = (n_max + 1) / 2; n <= n_max; ++n) {
    if (!u.has(n, 0)) continue;
    const double a = std::abs(u.at(n, 0));
    if (a > 0.0) {
      lx.push_back(std::log(static_cast<double>(n)));
      ly.push_back(std::log(a));
    }
  }
  if (lx.size() < 2) {
    diag.fitted_decay_exponent = std::numeric_limits<double>::quiet_NaN();
    return diag;
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t p = 0; p < lx.size(); ++p) {
    mx += lx[p];
    my += ly[p];
  }
  mx /= lx.size();
  my /= ly.size();
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t p = 0; p < lx.size(); ++p) {
    sxx += (lx[p] - mx) * (lx[p] - mx);
    sxy += (lx[p] - mx) * (ly[p] - my);
  }
  diag.fitted_decay_exponent = sxy / sxx;
  if (diag.fitted_decay_exponent >= -1.1) {
    diag.verdict = SeriesVerdict::diverging;
  } else if (diag.fitted_decay_exponent <= -1.5) {
    diag.verdict = SeriesVerdict::converging;
  }
  return diag;
}

}  // namespace steerbound

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "steerbound/common.hpp"
#include "steerbound/crlb.hpp"
#include "steerbound/estimator.hpp"
#include "steerbound/filterbank.hpp"
#include "steerbound/noise.hpp"
#include "steerbound/patterns.hpp"
#include "steerbound/rng.hpp"

namespace steerbound {

/// One Monte Carlo experiment: a pattern observed in power-law noise at a
/// ladder of harmonic budgets. Exactly one of snr_db / sigma0 must be set;
/// sigma0 = 0 runs the noiseless sanity configuration.
struct ExperimentConfig {
  Pattern pattern;
  RadialProfile profile;
  double gamma = 2.5;
  double snr_db = std::numeric_limits<double>::quiet_NaN();
  double sigma0 = std::numeric_limits<double>::quiet_NaN();
  int trials = 1000;
  Strategy strategy = Strategy::kfold;
  std::vector<int> budgets;  // harmonic-count ladder, e.g. 1..6
  int grid = 256;
  std::uint64_t seed = 0;
  int threads = 1;
  /// Finite value pins theta* for every trial instead of randomizing it.
  double theta_star = std::numeric_limits<double>::quiet_NaN();

  ExperimentConfig(Pattern p, RadialProfile prof)
      : pattern(std::move(p)), profile(std::move(prof)) {}
};

struct ExperimentRow {
  std::vector<int> harmonics;
  double bias = 0.0;     // rad
  double bias_se = 0.0;
  double var = 0.0;      // rad^2
  double mse = 0.0;      // rad^2
  double mse_se = 0.0;
  double crlb = 0.0;     // rad^2
  double ratio = 0.0;    // mse / crlb
};

struct ExperimentReport {
  std::vector<ExperimentRow> rows;
  double gamma = 0.0;
  double sigma0 = 0.0;
  double snr_db = std::numeric_limits<double>::quiet_NaN();
  std::uint64_t seed = 0;
  int trials = 0;
  int grid = 0;
  Strategy strategy = Strategy::first_n;
  std::string profile_name;
  std::string pattern_name;
  std::string version;
  double total_seconds = 0.0;  // wall clock; not part of serialized output
};

namespace detail {

inline IndexedVector subset(const IndexedVector& v,
                            const std::vector<int>& harmonics) {
  IndexedVector out;
  for (int n : harmonics) {
    out.index.push_back({n, 0});
    out.value.push_back(v.at(n, 0));
  }
  return out;
}

}  // namespace detail

/// Runs the experiment. Per trial: render the pattern at a seed-derived
/// theta*, add a noise field, measure once with the union bank, then
/// estimate under each budget's restriction. Trials are strided across
/// workers into indexed slots and reduced in trial order, so the report
/// does not depend on the worker count.
inline ExperimentReport run_monte_carlo(const ExperimentConfig& config) {
  const auto t_start = std::chrono::steady_clock::now();
  if (config.trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (config.grid < 64 || (config.grid & (config.grid - 1)) != 0) {
    throw std::invalid_argument("grid side must be a power of two >= 64");
  }
  if (config.budgets.empty()) {
    throw std::invalid_argument("no harmonic budgets given");
  }
  if (std::isfinite(config.snr_db) == std::isfinite(config.sigma0)) {
    throw std::invalid_argument("give exactly one of snr_db and sigma0");
  }
  if (!config.pattern.analytic()) {
    throw std::invalid_argument(
        "Monte Carlo needs an analytic pattern (raster patterns cannot be "
        "re-rendered at arbitrary theta*)");
  }
  const int fold = config.pattern.symmetry_order();
  const int max_budget =
      *std::max_element(config.budgets.begin(), config.budgets.end());

  // Candidate pool 1..fold*max covers every strategy's reach.
  std::vector<int> pool;
  for (int n = 1; n <= fold * max_budget; ++n) pool.push_back(n);
  const HarmonicTable table =
      harmonic_coefficients(config.pattern, config.profile, pool);

  std::vector<std::vector<int>> sets;
  for (int budget : config.budgets) {
    sets.push_back(select_harmonics(table, budget, config.strategy, fold));
  }
  std::vector<int> union_set;
  for (const auto& s : sets)
    for (int n : s)
      if (std::find(union_set.begin(), union_set.end(), n) == union_set.end())
        union_set.push_back(n);
  std::sort(union_set.begin(), union_set.end());

  const FilterBank bank(config.profile, union_set);
  const IndexedVector c_full = project_pattern(config.pattern, bank);
  std::vector<IndexedVector> c_sub;
  for (const auto& s : sets) c_sub.push_back(detail::subset(c_full, s));

  double sigma0 = config.sigma0;
  if (!std::isfinite(sigma0)) {
    const Raster ref = synthesize_pattern_image(config.pattern, config.profile,
                                                0.0, config.grid);
    sigma0 = snr_scale(ref, {config.gamma, 1.0}, config.snr_db);
  }
  if (!(sigma0 >= 0.0)) throw std::invalid_argument("sigma0 must be >= 0");

  ExperimentReport rep;
  rep.gamma = config.gamma;
  rep.sigma0 = sigma0;
  rep.snr_db = config.snr_db;
  rep.seed = config.seed;
  rep.trials = config.trials;
  rep.grid = config.grid;
  rep.strategy = config.strategy;
  rep.profile_name = config.profile.name();
  rep.pattern_name = pattern_kind_name(config.pattern.kind);
  rep.version = version_string();

  const NoiseModel model{config.gamma, sigma0 > 0.0 ? sigma0 : 1.0};
  for (std::size_t r = 0; r < sets.size(); ++r) {
    ExperimentRow row;
    row.harmonics = sets[r];
    row.crlb = sigma0 > 0.0
                   ? crlb_single(table, config.profile, model, sets[r])
                   : 0.0;
    rep.rows.push_back(std::move(row));
  }

  const double domain = 2.0 * kPi / fold;
  const std::uint64_t theta_seed = rng::derive(config.seed, 1);
  const std::uint64_t noise_root = rng::derive(config.seed, 2);
  std::vector<std::vector<double>> err(
      sets.size(), std::vector<double>(config.trials, 0.0));
  std::vector<std::pair<int, std::string>> failures;
  std::mutex failure_mutex;

  auto worker = [&](int w, int stride) {
    for (int t = w; t < config.trials; t += stride) {
      try {
        const double theta = std::isfinite(config.theta_star)
                                 ? config.theta_star
                                 : domain * rng::uniform(theta_seed, t);
        Raster img = synthesize_pattern_image(config.pattern, config.profile,
                                              theta, config.grid);
        if (sigma0 > 0.0) {
          const Raster field = synthesize(model, config.grid,
                                          rng::derive(noise_root, t));
          for (std::size_t p = 0; p < img.pix.size(); ++p)
            img.pix[p] += field.pix[p];
        }
        const MeasurementVector q = measure(img, bank);
        for (std::size_t r = 0; r < sets.size(); ++r) {
          const auto est =
              estimate_angle(detail::subset(q, sets[r]), c_sub[r], fold);
          err[r][t] = angular_error(est.theta_hat, theta, fold);
        }
      } catch (const std::exception& ex) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        failures.emplace_back(t, ex.what());
      }
    }
  };

  const int workers = std::max(1, config.threads);
  if (workers == 1) {
    worker(0, 1);
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w)
      threads.emplace_back(worker, w, workers);
    for (auto& th : threads) th.join();
  }
  if (!failures.empty()) {
    auto worst = *std::min_element(failures.begin(), failures.end());
    throw std::runtime_error("trial " + std::to_string(worst.first) +
                             " failed: " + worst.second);
  }

  for (std::size_t r = 0; r < sets.size(); ++r) {
    double s1 = 0.0, s2 = 0.0, s4 = 0.0;
    for (int t = 0; t < config.trials; ++t) {
      const double e = err[r][t];
      s1 += e;
      s2 += e * e;
      s4 += e * e * e * e;
    }
    const double nt = config.trials;
    auto& row = rep.rows[r];
    row.bias = s1 / nt;
    row.mse = s2 / nt;
    row.var = std::max(0.0, row.mse - row.bias * row.bias);
    row.bias_se = std::sqrt(row.var / nt);
    row.mse_se = std::sqrt(std::max(0.0, s4 / nt - row.mse * row.mse) / nt);
    row.ratio = row.mse / row.crlb;
  }
  rep.total_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return rep;
}

}  // namespace steerbound

#pragma once

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "steerbound/common.hpp"

namespace steerbound::fft {

// In-place unnormalized 2D c2c transform of a rows x cols row-major array.
// Plans are cached per shape and direction; fftw_execute_dft on a caller
// buffer is thread-safe, only plan creation needs the lock.
inline void c2c(cplx* data, int rows, int cols, bool inverse) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, fftw_plan> plans;
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(mu);
    const auto key = std::make_tuple(rows, cols, inverse ? 1 : 0);
    auto it = plans.find(key);
    if (it == plans.end()) {
      std::vector<cplx> dummy(static_cast<size_t>(rows) * cols);
      auto* buf = reinterpret_cast<fftw_complex*>(dummy.data());
      plan = fftw_plan_dft_2d(rows, cols, buf, buf,
                              inverse ? FFTW_BACKWARD : FFTW_FORWARD,
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
      plans.emplace(key, plan);
    } else {
      plan = it->second;
    }
  }
  auto* buf = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plan, buf, buf);
}

inline void c2c(std::vector<cplx>& data, int n, bool inverse) {
  c2c(data.data(), n, n, inverse);
}

// DFT index k in [0, n) mapped to the signed frequency index in [-n/2, n/2).
constexpr int wrap_index(int k, int n) { return 2 * k < n ? k : k - n; }

// Angular frequency of bin k for unit pixel pitch.
inline double omega_component(int k, int n) {
  return 2.0 * kPi * wrap_index(k, n) / n;
}

// exp(j omega_k . c) for the grid center c = (n/2, n/2).
constexpr double center_sign(int kx, int ky) {
  return ((kx + ky) & 1) ? -1.0 : 1.0;
}

}  // namespace steerbound::fft

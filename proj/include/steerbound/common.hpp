#pragma once

#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace steerbound {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr cplx kJ{0.0, 1.0};

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonConvergentIntegral : Error { using Error::Error; };
struct UnsupportedProfile : Error { using Error::Error; };
struct NoSolution : Error { using Error::Error; };
struct MissingCoefficient : Error { using Error::Error; };
struct ScaleOutOfRange : Error { using Error::Error; };
struct FrequencyOutOfRange : Error { using Error::Error; };
struct NyquistViolation : Error { using Error::Error; };
struct IndexMismatch : Error { using Error::Error; };
struct DuplicateIndex : Error { using Error::Error; };
struct GroupingMismatch : Error { using Error::Error; };
struct ExcludedGamma : Error { using Error::Error; };
struct SingularCovariance : Error { using Error::Error; };
struct DegenerateTemplate : Error { using Error::Error; };
struct InsufficientTable : Error { using Error::Error; };
struct ZeroPattern : Error { using Error::Error; };
struct IllPosed : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

/// Unimodular phase attached to the harmonic-n basis filter. Defined as
/// (-j)^|n| so that the spatial filters are (real radial) * e^{jn theta};
/// this is what makes q_{-n} = conj(q_n) exact for real images.
inline cplx harmonic_phase(int n) {
  switch (std::abs(n) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, -1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, 1.0};
  }
}

/// Square real image, row-major, side n, pixel pitch in samples.
struct Raster {
  std::vector<double> pix;
  int n = 0;
  double pitch = 1.0;

  double& at(int x, int y) { return pix[static_cast<size_t>(y) * n + x]; }
  double at(int x, int y) const { return pix[static_cast<size_t>(y) * n + x]; }
};

inline const std::string& version_string() {
  static const std::string v = "steerbound 0.1.0";
  return v;
}

}  // namespace steerbound

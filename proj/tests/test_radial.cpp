#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "steerbound/radial.hpp"
#include "oracle_quadrature.hpp"

using namespace steerbound;
using Catch::Approx;

namespace {

double raw_b_oracle(const RadialProfile& p, double z, int panels = 200) {
  return oracle::integrate_pieces(
      [&](double w) {
        const double h = eval_profile(p, w);
        return std::pow(w, z + 1.0) * h * h / (2 * kPi);
      },
      p.knots(), panels);
}

double raw_d_oracle(const RadialProfile& p, double z, int panels = 200) {
  return oracle::integrate(
      [&](double w) {
        return std::pow(w, z + 1.0) * eval_profile(p, w) *
               eval_profile(p, 2 * w) / (2 * kPi);
      },
      kPi / 4, kPi / 2, panels);
}

}  // namespace

TEST_CASE("profile evaluation honors supports and branch values", "[radial]") {
  const auto meyer = RadialProfile::meyer();
  const auto shannon = RadialProfile::shannon();

  CHECK(eval_profile(meyer, kPi / 8) == 0.0);
  CHECK(eval_profile(meyer, kPi / 4) == 0.0);
  CHECK(eval_profile(meyer, 1.001 * kPi) == 0.0);
  // sin(pi/2 * nu(1)) = 1 at the branch point omega = pi/2.
  CHECK(eval_profile(meyer, kPi / 2) ==
        Approx(meyer.norm_constant()).epsilon(1e-14));
  CHECK(eval_profile(shannon, 3 * kPi / 4) ==
        Approx(shannon.norm_constant()).epsilon(1e-14));
  CHECK(eval_profile(shannon, kPi / 2) == 0.0);

  const auto simoncelli = RadialProfile::simoncelli();
  CHECK(eval_profile(simoncelli, kPi / 2) ==
        Approx(simoncelli.norm_constant()).epsilon(1e-14));
  CHECK(eval_profile(simoncelli, kPi) == Approx(0.0).margin(1e-15));
}

TEST_CASE("meyer two-scale partition of unity", "[radial]") {
  const auto p = RadialProfile::meyer();
  const double n2 = p.norm_constant() * p.norm_constant();
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double w = kPi / 4 + (kPi / 4) * (i + 0.5) / 10000.0;
    const double h1 = eval_profile(p, w);
    const double h2 = eval_profile(p, 2 * w);
    worst = std::max(worst, std::abs(h1 * h1 + h2 * h2 - n2));
  }
  CHECK(worst <= 1e-10 * n2);
}

TEST_CASE("norm constants make b_0 = 1", "[radial]") {
  const auto meyer = RadialProfile::meyer();
  const auto shannon = RadialProfile::shannon();
  const auto simoncelli = RadialProfile::simoncelli();
  const auto log = RadialProfile::log(2.0);

  CHECK(spectral_moment_b(meyer, 0.0) == Approx(1.0).epsilon(1e-11));
  CHECK(spectral_moment_b(shannon, 0.0) == Approx(1.0).epsilon(1e-11));
  CHECK(spectral_moment_b(simoncelli, 0.0) == Approx(1.0).epsilon(1e-11));
  CHECK(spectral_moment_b(log, 0.0) == Approx(1.0).epsilon(1e-11));

  // Shannon closed form: raw b_0 = (1/2pi)(pi^2 - pi^2/4)/2 = 3 pi / 16.
  CHECK(shannon.norm_constant() ==
        Approx(std::sqrt(16.0 / (3.0 * kPi))).epsilon(1e-12));
  // LoG closed form: raw b_0 = 1/(2 pi sigma^6).
  CHECK(log.norm_constant() ==
        Approx(8.0 * std::sqrt(2.0 * kPi)).epsilon(1e-10));

  CHECK(meyer.norm_constant() == Approx(1.73232332958579).epsilon(1e-11));
  CHECK(simoncelli.norm_constant() == Approx(1.80143059919141).epsilon(1e-11));
}

TEST_CASE("spectral moments agree with the independent oracle", "[radial]") {
  const auto meyer = RadialProfile::meyer();
  const auto simoncelli = RadialProfile::simoncelli();

  for (double z : {0.0, -1.0, -2.0, -5.0, -8.0}) {
    CHECK(spectral_moment_b(meyer, z) ==
          Approx(raw_b_oracle(meyer, z)).epsilon(1e-11));
    CHECK(spectral_moment_b(simoncelli, z) ==
          Approx(raw_b_oracle(simoncelli, z)).epsilon(1e-11));
  }
  for (double z : {0.0, -1.0, -5.0}) {
    CHECK(spectral_moment_d(meyer, z) ==
          Approx(raw_d_oracle(meyer, z)).epsilon(1e-11));
    CHECK(spectral_moment_d(simoncelli, z) ==
          Approx(raw_d_oracle(simoncelli, z)).epsilon(1e-11));
  }

  // Doubling the oracle resolution moves nothing at 1e-9 (refinement check).
  CHECK(raw_b_oracle(meyer, -5.0, 400) ==
        Approx(raw_b_oracle(meyer, -5.0, 200)).epsilon(1e-12));
}

TEST_CASE("spectral moment reference values", "[radial]") {
  const auto meyer = RadialProfile::meyer();
  const auto shannon = RadialProfile::shannon();
  const auto simoncelli = RadialProfile::simoncelli();

  CHECK(spectral_moment_b(meyer, -1.0) ==
        Approx(0.562677022167598).epsilon(1e-10));
  CHECK(spectral_moment_b(meyer, -2.0) ==
        Approx(0.331057553274813).epsilon(1e-10));
  CHECK(spectral_moment_b(meyer, -5.0) ==
        Approx(0.0882315976708341).epsilon(1e-10));
  CHECK(spectral_moment_b(meyer, -8.0) ==
        Approx(0.0331852052446716).epsilon(1e-10));
  CHECK(spectral_moment_d(meyer, 0.0) ==
        Approx(0.0790412125200408).epsilon(1e-10));
  CHECK(spectral_moment_d(meyer, -1.0) ==
        Approx(0.0670922649628879).epsilon(1e-10));
  CHECK(spectral_moment_d(meyer, -5.0) ==
        Approx(0.0380391699620106).epsilon(1e-10));

  // Shannon closed form: b_{-5} = 56/(9 pi^5), d_z = 0 for every z.
  CHECK(spectral_moment_b(shannon, -5.0) ==
        Approx(56.0 / (9.0 * std::pow(kPi, 5))).epsilon(1e-12));
  CHECK(spectral_moment_d(shannon, -5.0) == 0.0);

  CHECK(spectral_moment_b(simoncelli, -5.0) ==
        Approx(0.121618480327557).epsilon(1e-10));
  CHECK(spectral_moment_d(simoncelli, 0.0) ==
        Approx(0.147090400101768).epsilon(1e-10));
  CHECK(spectral_moment_d(simoncelli, -5.0) ==
        Approx(0.0920001133601968).epsilon(1e-10));

  // LoG closed form: b_z = sigma^{-z} Gamma((z+6)/2) / 2.
  const auto log = RadialProfile::log(2.0);
  for (double z : {1.0, -1.0, -1.5}) {
    const double expect = std::pow(2.0, -z) * std::tgamma((z + 6.0) / 2) / 2;
    CHECK(spectral_moment_b(log, z) == Approx(expect).epsilon(1e-10));
  }
}

TEST_CASE("moment preconditions are enforced", "[radial]") {
  const auto log = RadialProfile::log(2.0);
  CHECK_THROWS_AS(spectral_moment_b(log, -2.0), NonConvergentIntegral);
  CHECK_THROWS_AS(spectral_moment_d(log, 0.0), UnsupportedProfile);
}

TEST_CASE("noise constants", "[radial]") {
  const auto meyer = RadialProfile::meyer();
  const auto shannon = RadialProfile::shannon();

  const auto cs = noise_constants(shannon, 1.0, 1.0);
  CHECK(cs.D == 0.0);
  CHECK(cs.B > 0.0);
  CHECK(cs.B == Approx(spectral_moment_b(shannon, -2.0)).epsilon(1e-14));

  const auto c1 = noise_constants(meyer, 2.5, 1.0);
  CHECK(c1.B == Approx(0.0882315976708341).epsilon(1e-10));
  CHECK(c1.D == Approx(0.0134488775154226).epsilon(1e-10));
  CHECK(c1.B - 2 * std::abs(c1.D) == Approx(0.0613338426399885).epsilon(1e-9));

  const auto c2 = noise_constants(meyer, 2.5, 2.0);
  CHECK(c2.B == 4.0 * c1.B);
  CHECK(c2.D == 4.0 * c1.D);
}

TEST_CASE("lemma-style margin B > 2|D| across profiles and gammas",
          "[radial]") {
  for (auto fam : {ProfileFamily::meyer, ProfileFamily::shannon,
                   ProfileFamily::simoncelli}) {
    const auto p = RadialProfile::make(fam);
    for (double g : {0.5, 1.0, 2.5, 4.0}) {
      const auto c = noise_constants(p, g, 1.0);
      CHECK(c.B - 2 * std::abs(c.D) > 1e-12 * c.B);
    }
    // Same inequality in moment form: b_z > 2^{z/2+2} |d_z|.
    for (double z : {0.0, -1.0, -2.0, -5.0, -8.0}) {
      if (fam == ProfileFamily::shannon) continue;
      CHECK(spectral_moment_b(p, z) >
            std::pow(2.0, z / 2 + 2) * std::abs(spectral_moment_d(p, z)));
    }
  }
}

TEST_CASE("excluded gamma reproduces the reference table", "[radial]") {
  const auto meyer = RadialProfile::meyer();
  const auto shannon = RadialProfile::shannon();
  const auto simoncelli = RadialProfile::simoncelli();

  const double gm = excluded_gamma(meyer);
  const double gs = excluded_gamma(simoncelli);
  CHECK(gm == Approx(1.97800015668742).epsilon(1e-9));
  CHECK(gs == Approx(0.736307141185492).epsilon(1e-9));
  CHECK(std::isinf(excluded_gamma(shannon)));

  // Published anchors at their stated tolerance.
  CHECK(std::abs(gm - 1.978) < 0.005);
  CHECK(std::abs(gs - 0.736) < 0.005);

  // Plugging gamma* back: r = 2^{1-g} + 2^{1+g} to 1e-8 relative.
  for (const auto* p : {&meyer, &simoncelli}) {
    const double r =
        spectral_moment_b(*p, -1.0) / std::abs(spectral_moment_d(*p, -1.0));
    const double g = excluded_gamma(*p);
    CHECK(std::abs(r - std::pow(2.0, 1 - g) - std::pow(2.0, 1 + g)) <=
          1e-8 * r);
  }
}

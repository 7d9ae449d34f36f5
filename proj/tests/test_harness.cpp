#include "steerbound/harness.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "steerbound/report_io.hpp"

using namespace steerbound;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

ExperimentConfig quick_config() {
  ExperimentConfig config(Pattern::j2(2.1), RadialProfile::meyer());
  config.gamma = 2.5;
  config.sigma0 = 0.5;
  config.trials = 8;
  config.strategy = Strategy::kfold;
  config.budgets = {1, 2};
  config.grid = 64;
  config.seed = 99;
  config.threads = 1;
  return config;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("monte carlo rejects malformed configurations", "[harness]") {
  CHECK_THROWS_AS(
      [] {
        auto c = quick_config();
        c.trials = 0;
        return run_monte_carlo(c);
      }(),
      std::invalid_argument);
  CHECK_THROWS_AS(
      [] {
        auto c = quick_config();
        c.grid = 100;
        return run_monte_carlo(c);
      }(),
      std::invalid_argument);
  CHECK_THROWS_AS(
      [] {
        auto c = quick_config();
        c.grid = 32;
        return run_monte_carlo(c);
      }(),
      std::invalid_argument);
  CHECK_THROWS_AS(
      [] {
        auto c = quick_config();
        c.budgets.clear();
        return run_monte_carlo(c);
      }(),
      std::invalid_argument);
  CHECK_THROWS_AS(
      [] {
        auto c = quick_config();
        c.snr_db = 17.22;  // both noise levels set
        return run_monte_carlo(c);
      }(),
      std::invalid_argument);
  CHECK_THROWS_AS(
      [] {
        auto c = quick_config();
        c.sigma0 = kNan;  // neither set
        return run_monte_carlo(c);
      }(),
      std::invalid_argument);
  CHECK_THROWS_AS(
      [] {
        ExperimentConfig c(
            Pattern::from_raster(std::vector<double>(256, 0.0), 16, 16),
            RadialProfile::meyer());
        c.sigma0 = 0.5;
        c.budgets = {1};
        return run_monte_carlo(c);
      }(),
      std::invalid_argument);
}

TEST_CASE("report is independent of the worker count", "[harness]") {
  auto config = quick_config();
  const auto rep1 = run_monte_carlo(config);
  config.threads = 4;
  const auto rep4 = run_monte_carlo(config);

  emit_report(rep1, ReportFormat::csv, "/tmp/sb_workers_1.csv");
  emit_report(rep4, ReportFormat::csv, "/tmp/sb_workers_4.csv");
  CHECK(slurp("/tmp/sb_workers_1.csv") == slurp("/tmp/sb_workers_4.csv"));

  emit_report(rep1, ReportFormat::json, "/tmp/sb_workers_1.json");
  emit_report(rep4, ReportFormat::json, "/tmp/sb_workers_4.json");
  CHECK(slurp("/tmp/sb_workers_1.json") == slurp("/tmp/sb_workers_4.json"));

  SECTION("a different seed moves the numbers") {
    config.seed = 100;
    const auto other = run_monte_carlo(config);
    emit_report(other, ReportFormat::csv, "/tmp/sb_workers_s.csv");
    CHECK(slurp("/tmp/sb_workers_s.csv") != slurp("/tmp/sb_workers_1.csv"));
  }
}

TEST_CASE("noisy report carries coherent statistics", "[harness]") {
  const auto config = quick_config();
  const auto rep = run_monte_carlo(config);

  REQUIRE(rep.rows.size() == 2);
  CHECK(rep.rows[0].harmonics == std::vector<int>{3});
  CHECK(rep.rows[1].harmonics == std::vector<int>{3, 6});
  CHECK(rep.seed == config.seed);
  CHECK(rep.trials == config.trials);
  CHECK(rep.grid == config.grid);
  CHECK(rep.sigma0 == config.sigma0);
  CHECK(rep.profile_name == "meyer");
  CHECK(rep.pattern_name == "J2");
  CHECK_FALSE(rep.version.empty());
  CHECK(rep.total_seconds > 0.0);

  SECTION("mse = var + bias^2 in every row") {
    for (const auto& row : rep.rows) {
      CHECK_THAT(row.var + row.bias * row.bias, WithinRel(row.mse, 1e-12));
      CHECK(row.bias_se >= 0.0);
      CHECK(row.mse_se >= 0.0);
      CHECK_THAT(row.ratio, WithinRel(row.mse / row.crlb, 1e-15));
    }
  }

  SECTION("crlb column equals a standalone bound computation") {
    const auto table = harmonic_coefficients(Pattern::j2(2.1),
                                             RadialProfile::meyer(),
                                             {1, 2, 3, 4, 5, 6});
    const NoiseModel model{config.gamma, config.sigma0};
    CHECK(rep.rows[0].crlb ==
          crlb_single(table, RadialProfile::meyer(), model, {3}));
    CHECK(rep.rows[1].crlb ==
          crlb_single(table, RadialProfile::meyer(), model, {3, 6}));
  }
}

TEST_CASE("noiseless runs hit the optimizer floor", "[harness]") {
  // J2 keeps its harmonic content far below the lattice band edge, so the
  // only error left at sigma0 = 0 is the golden-section stopping width.
  ExperimentConfig config(Pattern::j2(2.1), RadialProfile::meyer());
  config.gamma = 2.5;
  config.sigma0 = 0.0;
  config.trials = 5;
  config.strategy = Strategy::kfold;
  config.budgets = {1, 2};
  config.grid = 256;
  config.seed = 7;
  const auto rep = run_monte_carlo(config);

  for (const auto& row : rep.rows) {
    CHECK(row.mse <= 1e-12);
    CHECK(row.crlb == 0.0);
  }

  SECTION("pinned theta* collapses the spread") {
    config.theta_star = 0.7;
    config.trials = 3;
    const auto pinned = run_monte_carlo(config);
    for (const auto& row : pinned.rows) {
      CHECK(std::abs(row.bias) <= 1e-6);
      CHECK(row.var <= 1e-12);
    }
  }
}

TEST_CASE("snr target resolves to a concrete noise level", "[harness]") {
  auto config = quick_config();
  config.sigma0 = kNan;
  config.snr_db = 17.22;
  config.trials = 3;
  const auto rep = run_monte_carlo(config);
  CHECK(std::isfinite(rep.sigma0));
  CHECK(rep.sigma0 > 0.0);
  CHECK(rep.snr_db == 17.22);
}

TEST_CASE("reports round-trip through csv", "[harness]") {
  const auto rep = run_monte_carlo(quick_config());
  emit_report(rep, ReportFormat::csv, "/tmp/sb_roundtrip.csv");
  const auto rows = read_csv("/tmp/sb_roundtrip.csv");

  REQUIRE(rows.size() == rep.rows.size() + 1);
  const std::vector<std::string> header = {
      "n_harmonics", "bias_rad", "bias_se",   "var_rad2",
      "mse_rad2",    "mse_se",   "crlb_rad2", "ratio_mse_crlb"};
  CHECK(rows[0] == header);
  for (std::size_t r = 0; r < rep.rows.size(); ++r) {
    const auto& want = rep.rows[r];
    const auto& got = rows[r + 1];
    REQUIRE(got.size() == 8);
    CHECK(std::stoul(got[0]) == want.harmonics.size());
    CHECK_THAT(std::stod(got[1]), WithinRel(want.bias, 1e-12));
    CHECK_THAT(std::stod(got[2]), WithinRel(want.bias_se, 1e-12));
    CHECK_THAT(std::stod(got[3]), WithinRel(want.var, 1e-12));
    CHECK_THAT(std::stod(got[4]), WithinRel(want.mse, 1e-12));
    CHECK_THAT(std::stod(got[5]), WithinRel(want.mse_se, 1e-12));
    CHECK_THAT(std::stod(got[6]), WithinRel(want.crlb, 1e-12));
    CHECK_THAT(std::stod(got[7]), WithinRel(want.ratio, 1e-12));
  }
}

TEST_CASE("non-finite values serialize by name", "[harness]") {
  ExperimentReport rep;
  rep.version = "test";
  ExperimentRow row;
  row.harmonics = {3};
  row.crlb = kInf;
  row.ratio = kNan;
  rep.rows.push_back(row);

  emit_report(rep, ReportFormat::csv, "/tmp/sb_nonfinite.csv");
  const auto rows = read_csv("/tmp/sb_nonfinite.csv");
  REQUIRE(rows.size() == 2);
  CHECK(rows[1][6] == "inf");
  CHECK(rows[1][7] == "nan");

  emit_report(rep, ReportFormat::json, "/tmp/sb_nonfinite.json");
  const auto j = nlohmann::json::parse(slurp("/tmp/sb_nonfinite.json"));
  CHECK(j["rows"][0]["crlb_rad2"] == "inf");
  CHECK(j["rows"][0]["ratio_mse_crlb"] == "nan");
  CHECK(j["rows"][0]["bias_rad"] == 0.0);
}

TEST_CASE("an empty report is just the header", "[harness]") {
  ExperimentReport rep;
  emit_report(rep, ReportFormat::csv, "/tmp/sb_empty.csv");
  CHECK(slurp("/tmp/sb_empty.csv") ==
        "n_harmonics,bias_rad,bias_se,var_rad2,mse_rad2,mse_se,crlb_rad2,"
        "ratio_mse_crlb\n");
}

TEST_CASE("bound reports serialize their curves", "[harness]") {
  const auto meyer = RadialProfile::meyer();
  const auto table =
      harmonic_coefficients(Pattern::j1(), meyer, {1, 2, 3, 4, 5, 6});
  const auto curve =
      crlb_curve(table, meyer, {2.5, 1.0}, Strategy::kfold, 2, 3);
  emit_report(curve, ReportFormat::csv, "/tmp/sb_curve.csv");
  const auto rows = read_csv("/tmp/sb_curve.csv");
  REQUIRE(rows.size() == curve.crlb.size() + 1);
  CHECK(rows[0] == std::vector<std::string>{"N", "harmonics", "crlb_rad2"});
  CHECK(rows[1][1] == "3");
  CHECK(rows[2][1] == "3;6");

  const auto wavelet =
      wavelet_crlb_curve(Pattern::j2(2.1), meyer, {2.5, 1.0}, {3, 6}, 2);
  emit_report(wavelet, ReportFormat::json, "/tmp/sb_wavelet.json");
  const auto j = nlohmann::json::parse(slurp("/tmp/sb_wavelet.json"));
  REQUIRE(j["rows"].size() == 2);
  CHECK(j["rows"][0]["S"] == 1);
  CHECK(j["rows"][1]["S"] == 2);
  CHECK(j["harmonics"] == std::vector<int>{3, 6});

  emit_report(table, ReportFormat::csv, "/tmp/sb_table.csv");
  const auto trows = read_csv("/tmp/sb_table.csv");
  REQUIRE(trows.size() == 7);
  CHECK(trows[0] == std::vector<std::string>{"n", "scale", "re_u", "im_u"});
}

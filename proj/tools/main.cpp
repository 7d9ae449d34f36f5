#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "steerbound/steerbound.hpp"

using namespace steerbound;

namespace {

RadialProfile profile_from_name(const std::string& name, double log_sigma) {
  if (name == "meyer") return RadialProfile::meyer();
  if (name == "shannon") return RadialProfile::shannon();
  if (name == "simoncelli") return RadialProfile::simoncelli();
  if (name == "log") return RadialProfile::log(log_sigma);
  throw std::invalid_argument("unknown profile: " + name);
}

std::vector<double> load_f64(const std::string& path, std::size_t count) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::vector<double> data(count);
  in.read(reinterpret_cast<char*>(data.data()),
          static_cast<std::streamsize>(count * sizeof(double)));
  if (static_cast<std::size_t>(in.gcount()) != count * sizeof(double)) {
    throw IoError("raster file shorter than width*height doubles: " + path);
  }
  return data;
}

/// Pattern spec: inline JSON or a path to a JSON file. Raster paths inside
/// the spec are resolved against the current directory; the pixel payload
/// is raw host-endian (little-endian) float64, row-major.
Pattern pattern_from_spec(const std::string& spec) {
  nlohmann::json j;
  if (!spec.empty() && spec.front() == '{') {
    j = nlohmann::json::parse(spec);
  } else {
    std::ifstream in(spec);
    if (!in) throw IoError("cannot open pattern spec " + spec);
    j = nlohmann::json::parse(in);
  }
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "J1") return Pattern::j1();
  if (kind == "J2") return Pattern::j2(j.value("lambda", 2.1));
  if (kind == "J3") return Pattern::j3();
  if (kind == "J4") return Pattern::j4(j.value("alpha", 2.5));
  if (kind == "raster") {
    const int width = j.at("width").get<int>();
    const int height = j.at("height").get<int>();
    if (width <= 0 || height <= 0) {
      throw std::invalid_argument("raster dimensions must be positive");
    }
    auto data = load_f64(j.at("path").get<std::string>(),
                         static_cast<std::size_t>(width) * height);
    return Pattern::from_raster(std::move(data), width, height,
                                j.value("pitch", 1.0));
  }
  throw std::invalid_argument("unknown pattern kind: " + kind);
}

Strategy strategy_from_name(const std::string& name) {
  if (name == "first" || name == "first_n") return Strategy::first_n;
  if (name == "best" || name == "best_n") return Strategy::best_n;
  if (name == "kfold") return Strategy::kfold;
  throw std::invalid_argument("unknown strategy: " + name);
}

std::string default_out(const std::string& out, ReportFormat format) {
  if (!out.empty()) return out;
  return format == ReportFormat::csv ? "report.csv" : "report.json";
}

struct PatternOpts {
  std::string spec;
  std::string profile = "meyer";
  double log_sigma = 2.0;
};

void add_pattern_opts(CLI::App* sub, PatternOpts& o) {
  sub->add_option("--pattern", o.spec,
                  "pattern spec, inline JSON or a path to a JSON file")
      ->required();
  sub->add_option("--profile", o.profile, "radial profile")
      ->check(CLI::IsMember({"meyer", "shannon", "simoncelli", "log"}));
  sub->add_option("--log-sigma", o.log_sigma,
                  "scale of the log profile (log only)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"circular-harmonic angle estimation and its accuracy bounds"};
  app.require_subcommand(1);
  app.set_version_flag("--version", version_string());

  std::uint64_t seed = 0;
  int threads = 1;
  std::string out;
  std::string format_name = "csv";
  app.add_option("--seed", seed, "master RNG seed");
  app.add_option("--threads", threads, "worker threads for simulate");
  app.add_option("--out", out, "output path");
  app.add_option("--format", format_name, "report format")
      ->check(CLI::IsMember({"csv", "json"}));

  // harmonics: dump the pattern's coefficient table
  auto* cmd_harmonics =
      app.add_subcommand("harmonics", "coefficient table u_n of a pattern");
  cmd_harmonics->fallthrough();
  PatternOpts harm_opts;
  int harm_n_max = 30;
  std::vector<int> harm_scales;
  add_pattern_opts(cmd_harmonics, harm_opts);
  cmd_harmonics->add_option("--n-max", harm_n_max, "largest harmonic")
      ->check(CLI::PositiveNumber);
  cmd_harmonics
      ->add_option("--scales", harm_scales,
                   "scale indices; switches to the wavelet table")
      ->delimiter(',');

  // crlb single | crlb wavelet
  auto* cmd_crlb = app.add_subcommand("crlb", "Cramer-Rao lower bounds");
  cmd_crlb->require_subcommand(1);
  cmd_crlb->fallthrough();

  auto* cmd_single =
      cmd_crlb->add_subcommand("single", "single-scale bound vs harmonic count");
  cmd_single->fallthrough();
  PatternOpts single_opts;
  double single_gamma = 2.5, single_sigma0 = 1.0;
  std::string single_strategy = "kfold";
  int single_n_max = 20;
  add_pattern_opts(cmd_single, single_opts);
  cmd_single->add_option("--gamma", single_gamma, "noise spectral exponent");
  cmd_single->add_option("--sigma0", single_sigma0, "noise amplitude");
  cmd_single->add_option("--strategy", single_strategy, "harmonic selection")
      ->check(CLI::IsMember({"first", "first_n", "best", "best_n", "kfold"}));
  cmd_single->add_option("--n-max", single_n_max, "largest harmonic budget")
      ->check(CLI::PositiveNumber);

  auto* cmd_wavelet =
      cmd_crlb->add_subcommand("wavelet", "multiscale bound vs scale count");
  cmd_wavelet->fallthrough();
  PatternOpts wav_opts;
  double wav_gamma = 2.5, wav_sigma0 = 1.0;
  std::vector<int> wav_harmonics;
  int wav_scales = 5;
  add_pattern_opts(cmd_wavelet, wav_opts);
  cmd_wavelet->add_option("--gamma", wav_gamma, "noise spectral exponent");
  cmd_wavelet->add_option("--sigma0", wav_sigma0, "noise amplitude");
  cmd_wavelet->add_option("--harmonics", wav_harmonics, "harmonic set")
      ->delimiter(',')
      ->required();
  cmd_wavelet->add_option("--scales", wav_scales, "largest scale count")
      ->check(CLI::PositiveNumber);

  // excluded-gamma
  auto* cmd_excluded = app.add_subcommand(
      "excluded-gamma", "exponent at which wavelet grouping degenerates");
  cmd_excluded->fallthrough();
  std::vector<std::string> excluded_profiles = {"meyer", "shannon",
                                                "simoncelli"};
  double excluded_log_sigma = 2.0;
  cmd_excluded->add_option("--profile", excluded_profiles, "profiles to scan")
      ->delimiter(',');
  cmd_excluded->add_option("--log-sigma", excluded_log_sigma,
                           "scale of the log profile (log only)");

  // noise field dump
  auto* cmd_noise = app.add_subcommand("noise", "synthesize one noise field");
  cmd_noise->fallthrough();
  double noise_gamma = 2.5, noise_sigma0 = 1.0;
  int noise_size = 256;
  cmd_noise->add_option("--gamma", noise_gamma, "spectral exponent");
  cmd_noise->add_option("--sigma0", noise_sigma0, "amplitude");
  cmd_noise->add_option("--size", noise_size, "grid side, power of two >= 64");

  // simulate
  auto* cmd_simulate =
      app.add_subcommand("simulate", "Monte Carlo accuracy experiment");
  cmd_simulate->fallthrough();
  PatternOpts sim_opts;
  double sim_gamma = 2.5;
  double sim_snr_db = std::numeric_limits<double>::quiet_NaN();
  double sim_sigma0 = std::numeric_limits<double>::quiet_NaN();
  double sim_theta_star = std::numeric_limits<double>::quiet_NaN();
  int sim_trials = 1000, sim_grid = 256;
  std::string sim_strategy = "kfold";
  std::vector<int> sim_budgets = {1, 2, 3, 4, 5, 6};
  add_pattern_opts(cmd_simulate, sim_opts);
  cmd_simulate->add_option("--gamma", sim_gamma, "noise spectral exponent");
  cmd_simulate->add_option("--snr-db", sim_snr_db,
                           "target SNR; exclusive with --sigma0");
  cmd_simulate->add_option("--sigma0", sim_sigma0,
                           "noise amplitude; exclusive with --snr-db");
  cmd_simulate->add_option("--trials", sim_trials, "Monte Carlo trials");
  cmd_simulate->add_option("--strategy", sim_strategy, "harmonic selection")
      ->check(CLI::IsMember({"first", "first_n", "best", "best_n", "kfold"}));
  cmd_simulate->add_option("--budgets", sim_budgets, "harmonic-count ladder")
      ->delimiter(',');
  cmd_simulate->add_option("--grid", sim_grid, "image side, power of two");
  cmd_simulate->add_option("--theta-star", sim_theta_star,
                           "pin theta* instead of randomizing per trial");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  const ReportFormat format = parse_format(format_name);
  try {
    if (cmd_harmonics->parsed()) {
      const Pattern pattern = pattern_from_spec(harm_opts.spec);
      const RadialProfile profile =
          profile_from_name(harm_opts.profile, harm_opts.log_sigma);
      std::vector<int> harmonics;
      for (int n = 1; n <= harm_n_max; ++n) harmonics.push_back(n);
      const HarmonicTable table =
          harm_scales.empty()
              ? harmonic_coefficients(pattern, profile, harmonics)
              : wavelet_coefficients(pattern, profile, harmonics, harm_scales);
      emit_report(table, format, default_out(out, format));
    } else if (cmd_single->parsed()) {
      const Pattern pattern = pattern_from_spec(single_opts.spec);
      const RadialProfile profile =
          profile_from_name(single_opts.profile, single_opts.log_sigma);
      const Strategy strategy = strategy_from_name(single_strategy);
      const int fold = pattern.symmetry_order();
      // candidate pool past the largest budget so best_n has room to choose
      const int pool_max =
          single_n_max * (strategy == Strategy::kfold ? fold : 2);
      std::vector<int> pool;
      for (int n = 1; n <= pool_max; ++n) pool.push_back(n);
      const HarmonicTable table = harmonic_coefficients(pattern, profile, pool);
      const CrlbReport report =
          crlb_curve(table, profile, NoiseModel{single_gamma, single_sigma0},
                     strategy, single_n_max, fold);
      emit_report(report, format, default_out(out, format));
    } else if (cmd_wavelet->parsed()) {
      const Pattern pattern = pattern_from_spec(wav_opts.spec);
      const RadialProfile profile =
          profile_from_name(wav_opts.profile, wav_opts.log_sigma);
      const WaveletCrlbReport report = wavelet_crlb_curve(
          pattern, profile, NoiseModel{wav_gamma, wav_sigma0}, wav_harmonics,
          wav_scales);
      emit_report(report, format, default_out(out, format));
    } else if (cmd_excluded->parsed()) {
      std::string csv = "profile,gamma_excluded\n";
      nlohmann::json rows = nlohmann::json::array();
      for (const auto& name : excluded_profiles) {
        const double g =
            excluded_gamma(profile_from_name(name, excluded_log_sigma));
        csv += name + ',' + fmt_double(g) + '\n';
        rows.push_back({{"profile", name}, {"gamma_excluded", detail::json_double(g)}});
      }
      const std::string path = default_out(out, format);
      if (format == ReportFormat::csv) {
        detail::write_text(path, csv);
      } else {
        detail::write_text(path,
                           nlohmann::json{{"rows", rows}}.dump(2) + "\n");
      }
    } else if (cmd_noise->parsed()) {
      const Raster field =
          synthesize(NoiseModel{noise_gamma, noise_sigma0}, noise_size, seed);
      const std::string path = out.empty() ? "field.f64" : out;
      std::ofstream raw(path, std::ios::binary);
      if (!raw) throw IoError("cannot open " + path + " for writing");
      raw.write(reinterpret_cast<const char*>(field.pix.data()),
                static_cast<std::streamsize>(field.pix.size() * sizeof(double)));
      if (!raw) throw IoError("write failed: " + path);
      raw.close();
      nlohmann::json sidecar{{"path", path},
                             {"width", field.n},
                             {"height", field.n},
                             {"pitch", field.pitch},
                             {"dtype", "float64-le"},
                             {"order", "row-major"},
                             {"gamma", noise_gamma},
                             {"sigma0", noise_sigma0},
                             {"seed", seed}};
      detail::write_text(path + ".json", sidecar.dump(2) + "\n");
    } else if (cmd_simulate->parsed()) {
      ExperimentConfig config(
          pattern_from_spec(sim_opts.spec),
          profile_from_name(sim_opts.profile, sim_opts.log_sigma));
      config.gamma = sim_gamma;
      config.snr_db = sim_snr_db;
      config.sigma0 = sim_sigma0;
      config.trials = sim_trials;
      config.strategy = strategy_from_name(sim_strategy);
      config.budgets = sim_budgets;
      config.grid = sim_grid;
      config.seed = seed;
      config.threads = threads;
      config.theta_star = sim_theta_star;
      const ExperimentReport report = run_monte_carlo(config);
      const std::string path = default_out(out, format);
      emit_report(report, format, path);
      std::fprintf(stderr, "%d trials in %.1f s -> %s\n", report.trials,
                   report.total_seconds, path.c_str());
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}

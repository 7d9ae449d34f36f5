#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "steerbound/crlb.hpp"
#include "steerbound/harness.hpp"
#include "steerbound/patterns.hpp"
#include "steerbound/wavelet.hpp"

namespace steerbound {

enum class ReportFormat { csv, json };

inline ReportFormat parse_format(const std::string& s) {
  if (s == "csv") return ReportFormat::csv;
  if (s == "json") return ReportFormat::json;
  throw std::invalid_argument("unknown report format: " + s);
}

/// Shortest round-trip decimal; non-finite values spelled inf/-inf/nan in
/// both formats (JSON numbers cannot carry them).
inline std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0.0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline nlohmann::json json_double(double v) {
  if (std::isfinite(v)) return v;
  return fmt_double(v);
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw IoError("write failed: " + path);
}

inline std::string join_harmonics(const std::vector<int>& h) {
  std::string s;
  for (std::size_t p = 0; p < h.size(); ++p) {
    if (p) s += ';';
    s += std::to_string(h[p]);
  }
  return s;
}

}  // namespace detail

inline void emit_report(const ExperimentReport& rep, ReportFormat format,
                        const std::string& path) {
  if (format == ReportFormat::csv) {
    std::string text =
        "n_harmonics,bias_rad,bias_se,var_rad2,mse_rad2,mse_se,crlb_rad2,"
        "ratio_mse_crlb\n";
    for (const auto& row : rep.rows) {
      text += std::to_string(row.harmonics.size()) + ',' +
              fmt_double(row.bias) + ',' + fmt_double(row.bias_se) + ',' +
              fmt_double(row.var) + ',' + fmt_double(row.mse) + ',' +
              fmt_double(row.mse_se) + ',' + fmt_double(row.crlb) + ',' +
              fmt_double(row.ratio) + '\n';
    }
    detail::write_text(path, text);
    return;
  }
  nlohmann::json j;
  j["version"] = rep.version;
  j["seed"] = rep.seed;
  j["trials"] = rep.trials;
  j["grid"] = rep.grid;
  j["profile"] = rep.profile_name;
  j["pattern"] = rep.pattern_name;
  j["strategy"] = strategy_name(rep.strategy);
  j["gamma"] = detail::json_double(rep.gamma);
  j["sigma0"] = detail::json_double(rep.sigma0);
  j["snr_db"] = detail::json_double(rep.snr_db);
  j["rows"] = nlohmann::json::array();
  for (const auto& row : rep.rows) {
    nlohmann::json r;
    r["n_harmonics"] = row.harmonics.size();
    r["harmonics"] = row.harmonics;
    r["bias_rad"] = detail::json_double(row.bias);
    r["bias_se"] = detail::json_double(row.bias_se);
    r["var_rad2"] = detail::json_double(row.var);
    r["mse_rad2"] = detail::json_double(row.mse);
    r["mse_se"] = detail::json_double(row.mse_se);
    r["crlb_rad2"] = detail::json_double(row.crlb);
    r["ratio_mse_crlb"] = detail::json_double(row.ratio);
    j["rows"].push_back(std::move(r));
  }
  detail::write_text(path, j.dump(2) + "\n");
}

inline void emit_report(const CrlbReport& rep, ReportFormat format,
                        const std::string& path) {
  if (format == ReportFormat::csv) {
    std::string text = "N,harmonics,crlb_rad2\n";
    for (std::size_t r = 0; r < rep.crlb.size(); ++r) {
      text += std::to_string(rep.harmonic_sets[r].size()) + ',' +
              detail::join_harmonics(rep.harmonic_sets[r]) + ',' +
              fmt_double(rep.crlb[r]) + '\n';
    }
    detail::write_text(path, text);
    return;
  }
  nlohmann::json j;
  j["strategy"] = strategy_name(rep.strategy);
  j["profile"] = rep.profile_name;
  j["gamma"] = detail::json_double(rep.gamma);
  j["sigma0"] = detail::json_double(rep.sigma0);
  j["rows"] = nlohmann::json::array();
  for (std::size_t r = 0; r < rep.crlb.size(); ++r) {
    nlohmann::json row;
    row["N"] = rep.harmonic_sets[r].size();
    row["harmonics"] = rep.harmonic_sets[r];
    row["crlb_rad2"] = detail::json_double(rep.crlb[r]);
    j["rows"].push_back(std::move(row));
  }
  detail::write_text(path, j.dump(2) + "\n");
}

inline void emit_report(const WaveletCrlbReport& rep, ReportFormat format,
                        const std::string& path) {
  if (format == ReportFormat::csv) {
    std::string text = "S,crlb_exact,crlb_lower,crlb_upper\n";
    for (std::size_t r = 0; r < rep.values.size(); ++r) {
      text += std::to_string(rep.scale_counts[r]) + ',' +
              fmt_double(rep.values[r].exact) + ',' +
              fmt_double(rep.values[r].lower) + ',' +
              fmt_double(rep.values[r].upper) + '\n';
    }
    detail::write_text(path, text);
    return;
  }
  nlohmann::json j;
  j["profile"] = rep.profile_name;
  j["gamma"] = detail::json_double(rep.gamma);
  j["sigma0"] = detail::json_double(rep.sigma0);
  j["harmonics"] = rep.harmonics;
  j["rows"] = nlohmann::json::array();
  for (std::size_t r = 0; r < rep.values.size(); ++r) {
    nlohmann::json row;
    row["S"] = rep.scale_counts[r];
    row["crlb_exact"] = detail::json_double(rep.values[r].exact);
    row["crlb_lower"] = detail::json_double(rep.values[r].lower);
    row["crlb_upper"] = detail::json_double(rep.values[r].upper);
    j["rows"].push_back(std::move(row));
  }
  detail::write_text(path, j.dump(2) + "\n");
}

inline void emit_report(const HarmonicTable& table, ReportFormat format,
                        const std::string& path) {
  if (format == ReportFormat::csv) {
    std::string text = "n,scale,re_u,im_u\n";
    for (const auto& [key, v] : table.entries) {
      text += std::to_string(key.first) + ',' + std::to_string(key.second) +
              ',' + fmt_double(v.real()) + ',' + fmt_double(v.imag()) + '\n';
    }
    detail::write_text(path, text);
    return;
  }
  nlohmann::json j;
  j["profile"] = table.profile_name;
  j["convention"] = table.convention == TableConvention::single_scale
                        ? "single_scale"
                        : "wavelet";
  j["entries"] = nlohmann::json::array();
  for (const auto& [key, v] : table.entries) {
    nlohmann::json e;
    e["n"] = key.first;
    e["scale"] = key.second;
    e["re_u"] = detail::json_double(v.real());
    e["im_u"] = detail::json_double(v.imag());
    j["entries"].push_back(std::move(e));
  }
  detail::write_text(path, j.dump(2) + "\n");
}

/// Comma-split line reader for the tests and the parse-back checks; no
/// quoting, which the emitted formats never need.
inline std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

}  // namespace steerbound

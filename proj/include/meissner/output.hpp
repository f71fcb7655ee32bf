#pragma once

#include <cstdio>
#include <fstream>
#include <iostream>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "meissner/config.hpp"
#include "meissner/errors.hpp"

namespace meissner {

/// Columnar result with scalar side-band and optional iteration history.
struct ResultTable {
  std::vector<std::pair<std::string, std::vector<double>>> columns;
  std::vector<std::pair<std::string, double>> scalars;
  std::vector<std::pair<std::string, std::string>> scalar_strings;
  std::vector<std::pair<int, double>> history;
};

/// 17 significant digits: doubles round-trip exactly through the CSV.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_csv(std::ostream& os, const ResultTable& t) {
  for (const auto& [k, v] : t.scalar_strings) os << "# " << k << "," << v << "\n";
  for (const auto& [k, v] : t.scalars) os << "# " << k << "," << format_double(v) << "\n";
  if (!t.columns.empty()) {
    for (std::size_t c = 0; c < t.columns.size(); ++c)
      os << (c ? "," : "") << t.columns[c].first;
    os << "\n";
    const std::size_t rows = t.columns.front().second.size();
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < t.columns.size(); ++c)
        os << (c ? "," : "") << format_double(t.columns[c].second[r]);
      os << "\n";
    }
  }
  for (const auto& [it, change] : t.history)
    os << "# history," << it << "," << format_double(change) << "\n";
}

inline nlohmann::json config_echo(const RunConfig& cfg) {
  nlohmann::json j;
  j["mode"] = cfg.mode ? to_string(*cfg.mode) : "";
  if (cfg.kappa) j["kappa"] = *cfg.kappa;
  j["boundary_b"] = cfg.boundary_b;
  j["grid_n"] = cfg.grid_n;
  j["rho_max"] = cfg.rho_max;
  j["tol"] = cfg.tol;
  j["max_iter"] = cfg.max_iter;
  j["mixing"] = cfg.mixing;
  j["step_delta"] = cfg.step_delta;
  j["format"] = cfg.format == OutputFormat::csv ? "csv" : "json";
  if (!cfg.b_list.empty()) j["b_list"] = cfg.b_list;
  if (cfg.applied_h) j["applied_h"] = *cfg.applied_h;
  if (cfg.physical) {
    j["physical"] = {{"mass_kg", cfg.physical->particle_mass},
                     {"charge_C", cfg.physical->charge},
                     {"density_m3", cfg.physical->density},
                     {"radius_m", cfg.physical->radius}};
  }
  return j;
}

inline nlohmann::json table_json(const ResultTable& t, const nlohmann::json& config) {
  nlohmann::json j;
  j["config"] = config;
  nlohmann::json scalars = nlohmann::json::object();
  for (const auto& [k, v] : t.scalars) scalars[k] = v;
  for (const auto& [k, v] : t.scalar_strings) scalars[k] = v;
  j["scalars"] = scalars;
  nlohmann::json cols = nlohmann::json::object();
  for (const auto& [k, v] : t.columns) cols[k] = v;
  j["columns"] = cols;
  nlohmann::json hist = nlohmann::json::array();
  for (const auto& [it, change] : t.history) hist.push_back({it, change});
  j["history"] = hist;
  return j;
}

inline void write_table(const RunConfig& cfg, const ResultTable& t) {
  const auto emit = [&](std::ostream& os) {
    if (cfg.format == OutputFormat::csv)
      write_csv(os, t);
    else
      os << table_json(t, config_echo(cfg)).dump(2) << "\n";
  };
  if (cfg.output_path.empty()) {
    emit(std::cout);
    return;
  }
  std::ofstream out(cfg.output_path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output path '" + cfg.output_path + "'");
  emit(out);
  if (!out) throw ConfigError("write failed for '" + cfg.output_path + "'");
}

}  // namespace meissner

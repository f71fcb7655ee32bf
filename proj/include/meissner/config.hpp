#pragma once

#include <algorithm>
#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "meissner/analysis.hpp"
#include "meissner/errors.hpp"
#include "meissner/grid.hpp"

namespace meissner {

enum class RunMode { solve_field, eigensolve, self_consistent, sweep, verify, phase };
enum class OutputFormat { csv, json };

inline const char* to_string(RunMode m) {
  switch (m) {
    case RunMode::solve_field: return "solve-field";
    case RunMode::eigensolve: return "eigensolve";
    case RunMode::self_consistent: return "self-consistent";
    case RunMode::sweep: return "sweep";
    case RunMode::verify: return "verify";
    case RunMode::phase: return "phase";
  }
  return "?";
}

inline RunMode parse_mode(const std::string& s) {
  if (s == "solve-field") return RunMode::solve_field;
  if (s == "eigensolve") return RunMode::eigensolve;
  if (s == "self-consistent") return RunMode::self_consistent;
  if (s == "sweep") return RunMode::sweep;
  if (s == "verify") return RunMode::verify;
  if (s == "phase") return RunMode::phase;
  throw ConfigError("unknown mode '" + s + "'");
}

inline OutputFormat parse_format(const std::string& s) {
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  throw ConfigError("unknown format '" + s + "' (expected csv or json)");
}

struct RunConfig {
  std::optional<RunMode> mode;
  std::optional<double> kappa;
  double boundary_b = 0.9;
  int grid_n = 2001;
  double rho_max = 3.0;
  double tol = 1e-8;
  int max_iter = 500;
  double mixing = 0.5;
  double step_delta = 0.05;
  std::optional<PhysicalParams> physical;
  std::string output_path;  ///< empty = stdout
  OutputFormat format = OutputFormat::csv;
  std::vector<double> b_list;
  std::optional<double> applied_h;  ///< A/m, phase mode
  std::optional<std::string> g_file;
  std::optional<double> g_const;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

inline double parse_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
  }
  if (used != v.size())
    throw ConfigError("key '" + key + "': trailing characters in '" + v + "'");
  return x;
}

inline int parse_int(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  int x = 0;
  try {
    x = std::stoi(v, &used);
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected an integer, got '" + v + "'");
  }
  if (used != v.size())
    throw ConfigError("key '" + key + "': trailing characters in '" + v + "'");
  return x;
}

inline std::vector<double> parse_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_double(key, item));
  }
  if (out.empty()) throw ConfigError("key '" + key + "': empty list");
  return out;
}

inline PhysicalParams& ensure_physical(RunConfig& cfg) {
  if (!cfg.physical) cfg.physical = PhysicalParams{};
  return *cfg.physical;
}

inline void apply_key(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "mode") cfg.mode = parse_mode(value);
  else if (key == "kappa") cfg.kappa = parse_double(key, value);
  else if (key == "boundary_b") cfg.boundary_b = parse_double(key, value);
  else if (key == "grid_n") cfg.grid_n = parse_int(key, value);
  else if (key == "rho_max") cfg.rho_max = parse_double(key, value);
  else if (key == "tol") cfg.tol = parse_double(key, value);
  else if (key == "max_iter") cfg.max_iter = parse_int(key, value);
  else if (key == "mixing") cfg.mixing = parse_double(key, value);
  else if (key == "step_delta") cfg.step_delta = parse_double(key, value);
  else if (key == "output") cfg.output_path = value;
  else if (key == "format") cfg.format = parse_format(value);
  else if (key == "b_list") cfg.b_list = parse_list(key, value);
  else if (key == "applied_h") cfg.applied_h = parse_double(key, value);
  else if (key == "g_file") cfg.g_file = value;
  else if (key == "g_const") cfg.g_const = parse_double(key, value);
  else if (key == "mass_kg") ensure_physical(cfg).particle_mass = parse_double(key, value);
  else if (key == "charge_C") ensure_physical(cfg).charge = parse_double(key, value);
  else if (key == "density_m3") ensure_physical(cfg).density = parse_double(key, value);
  else if (key == "radius_m") ensure_physical(cfg).radius = parse_double(key, value);
  else throw ConfigError("unknown key '" + key + "'");
}

}  // namespace detail

/// Flat key-value run configuration: one `key = value` (or `key: value`) per
/// line, '#' comments, unknown keys rejected.
inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto sep = line.find_first_of("=:");
    if (sep == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = detail::trim(line.substr(0, sep));
    const std::string value = detail::trim(line.substr(sep + 1));
    if (key.empty() || value.empty())
      throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key or value");
    detail::apply_key(cfg, key, value);
  }
  if (!cfg.mode) throw ConfigError(path + ": missing required key 'mode'");
  return cfg;
}

/// Checks ranges, mode-specific requirements, and snaps grid_n up so that
/// rho = 1 lands on a node. Throws ConfigError.
inline void validate(RunConfig& cfg) {
  if (!cfg.mode) throw ConfigError("mode is required");
  if (cfg.grid_n < 101) throw ConfigError("grid_n must be >= 101");
  if (!(cfg.rho_max >= 1.0)) throw ConfigError("rho_max must be >= 1");
  if (!(cfg.tol > 0.0)) throw ConfigError("tol must be positive");
  if (!(cfg.boundary_b > 0.0)) throw ConfigError("boundary_b must be positive");
  if (cfg.max_iter < 1) throw ConfigError("max_iter must be >= 1");
  if (!(cfg.mixing > 0.0 && cfg.mixing <= 1.0)) throw ConfigError("mixing must lie in (0,1]");
  if (!(cfg.step_delta > 0.0 && cfg.step_delta < 1.0))
    throw ConfigError("step_delta must lie in (0,1)");
  const RunMode mode = *cfg.mode;
  if ((mode == RunMode::solve_field || mode == RunMode::self_consistent ||
       mode == RunMode::sweep) && !cfg.kappa)
    throw ConfigError(std::string("mode=") + to_string(mode) + " requires kappa");
  if (cfg.kappa && (!(*cfg.kappa >= 0.0) || !std::isfinite(*cfg.kappa)))
    throw ConfigError("kappa must be finite and >= 0");
  if ((mode == RunMode::self_consistent || mode == RunMode::eigensolve) &&
      !(cfg.boundary_b < 1.0))
    throw ConfigError("boundary_b must be < 1 (units of H_c(R)) for this mode");
  for (double b : cfg.b_list)
    if (!(b > 0.0 && b < 1.0)) throw ConfigError("b_list entries must lie in (0,1)");
  if (cfg.physical) cfg.physical->validate();
  cfg.grid_n = RadialGrid::snap_nodes(cfg.grid_n, cfg.rho_max);
}

inline RadialGrid config_grid(const RunConfig& cfg) {
  return RadialGrid::make(cfg.grid_n, cfg.rho_max);
}

}  // namespace meissner

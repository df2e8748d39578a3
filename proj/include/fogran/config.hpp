#pragma once

#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fogran/model.hpp"

namespace fogran {

using Json = nlohmann::json;

namespace detail {

inline void reject_unknown(const Json& obj, const std::string& where, const std::set<std::string>& known) {
  if (!obj.is_object()) throw ConfigError(where.empty() ? "<root>" : where, "must be an object");
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!known.count(it.key())) throw ConfigError(where.empty() ? it.key() : where + "." + it.key(), "unknown field");
}

template <class T>
void read_field(const Json& obj, const std::string& where, const char* key, T& out) {
  if (!obj.contains(key)) return;
  const std::string name = where.empty() ? key : where + "." + key;
  try {
    out = obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(name, "has the wrong type");
  }
}

template <class T>
T require_field(const Json& obj, const std::string& where, const char* key) {
  if (!obj.contains(key)) throw ConfigError(where.empty() ? key : where + "." + key, "is required");
  T out{};
  read_field(obj, where, key, out);
  return out;
}

inline std::vector<FileSet> read_file_sets(const Json& obj, const std::string& where, const char* key,
                                           std::size_t num_files) {
  const auto lists = require_field<std::vector<std::vector<std::size_t>>>(obj, where, key);
  std::vector<FileSet> out;
  for (const auto& l : lists) {
    FileSet s;
    for (std::size_t f : l) {
      if (f >= num_files) throw ConfigError(where + "." + key, "file index " + std::to_string(f) + " out of range");
      s.insert(f);
    }
    out.push_back(s);
  }
  return out;
}

inline Matrix read_matrix(const Json& obj, const std::string& where, const char* key, std::size_t rows,
                          std::size_t cols) {
  const auto m = require_field<std::vector<std::vector<double>>>(obj, where, key);
  const std::string name = where + "." + key;
  if (m.size() != rows) throw ConfigError(name, "expected " + std::to_string(rows) + " rows");
  Matrix out(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (m[r].size() != cols) throw ConfigError(name, "row " + std::to_string(r) + " needs " + std::to_string(cols) + " entries");
    for (std::size_t c = 0; c < cols; ++c) out(r, c) = m[r][c];
  }
  return out;
}

}  // namespace detail

inline ScenarioConfig scenario_config_from_json(const Json& j, const std::string& where = "scenario") {
  static const std::set<std::string> known{
      "num_errhs",        "num_users",         "num_files",          "file_size_bits",      "cache_ratio",
      "rate_threshold",   "errh_power_dbm_per_hz", "user_power_dbm_per_hz", "noise_dbm_per_hz", "bandwidth_hz",
      "cell_radius_m",    "coverage_radius_m", "min_distance_m",     "has_fraction_min",    "has_fraction_max",
      "fading",           "redraw_positions_per_slot", "max_combination_size", "errh_positions"};
  detail::reject_unknown(j, where, known);
  ScenarioConfig c;
  detail::read_field(j, where, "num_errhs", c.num_errhs);
  detail::read_field(j, where, "num_users", c.num_users);
  detail::read_field(j, where, "num_files", c.num_files);
  detail::read_field(j, where, "file_size_bits", c.file_size_bits);
  detail::read_field(j, where, "cache_ratio", c.cache_ratio);
  detail::read_field(j, where, "rate_threshold", c.rate_threshold);
  detail::read_field(j, where, "errh_power_dbm_per_hz", c.errh_power_dbm_per_hz);
  detail::read_field(j, where, "user_power_dbm_per_hz", c.user_power_dbm_per_hz);
  detail::read_field(j, where, "noise_dbm_per_hz", c.noise_dbm_per_hz);
  detail::read_field(j, where, "bandwidth_hz", c.bandwidth_hz);
  detail::read_field(j, where, "cell_radius_m", c.cell_radius_m);
  detail::read_field(j, where, "coverage_radius_m", c.coverage_radius_m);
  detail::read_field(j, where, "min_distance_m", c.min_distance_m);
  detail::read_field(j, where, "has_fraction_min", c.has_fraction_min);
  detail::read_field(j, where, "has_fraction_max", c.has_fraction_max);
  detail::read_field(j, where, "fading", c.fading);
  detail::read_field(j, where, "redraw_positions_per_slot", c.redraw_positions_per_slot);
  detail::read_field(j, where, "max_combination_size", c.max_combination_size);
  if (j.contains("errh_positions")) {
    std::vector<std::vector<double>> pts;
    detail::read_field(j, where, "errh_positions", pts);
    for (const auto& p : pts) {
      if (p.size() != 2) throw ConfigError(where + ".errh_positions", "each point needs [x, y]");
      c.errh_positions.push_back({p[0], p[1]});
    }
  }
  return c;
}

inline Json to_json(const ScenarioConfig& c) {
  Json j{{"num_errhs", c.num_errhs},
         {"num_users", c.num_users},
         {"num_files", c.num_files},
         {"file_size_bits", c.file_size_bits},
         {"cache_ratio", c.cache_ratio},
         {"rate_threshold", c.rate_threshold},
         {"errh_power_dbm_per_hz", c.errh_power_dbm_per_hz},
         {"user_power_dbm_per_hz", c.user_power_dbm_per_hz},
         {"noise_dbm_per_hz", c.noise_dbm_per_hz},
         {"bandwidth_hz", c.bandwidth_hz},
         {"cell_radius_m", c.cell_radius_m},
         {"coverage_radius_m", c.coverage_radius_m},
         {"min_distance_m", c.min_distance_m},
         {"has_fraction_min", c.has_fraction_min},
         {"has_fraction_max", c.has_fraction_max},
         {"fading", c.fading},
         {"redraw_positions_per_slot", c.redraw_positions_per_slot},
         {"max_combination_size", c.max_combination_size}};
  if (!c.errh_positions.empty()) {
    Json pts = Json::array();
    for (Point p : c.errh_positions) pts.push_back({p.x, p.y});
    j["errh_positions"] = pts;
  }
  return j;
}

// Replay scenario: {"fixed": {...}} with 0-based user and file indices.
inline Scenario fixed_scenario_from_json(const Json& root) {
  detail::reject_unknown(root, "", {"fixed", "description"});
  if (!root.contains("fixed")) throw ConfigError("fixed", "is required");
  const Json& j = root.at("fixed");
  const std::string w = "fixed";
  detail::reject_unknown(j, w,
                         {"num_errhs", "num_users", "num_files", "file_size_bits", "rate_threshold_bps",
                          "max_combination_size", "caches", "has", "errh_capacity_bps", "csm_bps"});
  FixedScenarioSpec s;
  s.num_errhs = detail::require_field<std::size_t>(j, w, "num_errhs");
  s.num_users = detail::require_field<std::size_t>(j, w, "num_users");
  s.num_files = detail::require_field<std::size_t>(j, w, "num_files");
  s.file_size_bits = detail::require_field<double>(j, w, "file_size_bits");
  detail::read_field(j, w, "rate_threshold_bps", s.rate_threshold_bps);
  s.max_combination_size = s.num_files;
  detail::read_field(j, w, "max_combination_size", s.max_combination_size);
  if (s.num_files < 1 || s.num_files > 64) throw ConfigError("fixed.num_files", "must be in [1, 64]");
  s.caches = detail::read_file_sets(j, w, "caches", s.num_files);
  s.has = detail::read_file_sets(j, w, "has", s.num_files);
  s.errh_capacity = detail::read_matrix(j, w, "errh_capacity_bps", s.num_users, s.num_errhs);
  s.csm = detail::read_matrix(j, w, "csm_bps", s.num_users, s.num_users);
  return make_fixed_scenario(s);
}

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open file");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path, std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace fogran

#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "fogran/config.hpp"
#include "fogran/sim.hpp"

namespace fogran {

enum class SweepVar { users, files, file_size };

inline const char* sweep_name(SweepVar v) {
  switch (v) {
    case SweepVar::users: return "users";
    case SweepVar::files: return "files";
    case SweepVar::file_size: return "file-size";
  }
  return "?";
}

inline SweepVar parse_sweep(const std::string& s) {
  if (s == "users") return SweepVar::users;
  if (s == "files") return SweepVar::files;
  if (s == "file-size" || s == "file_size") return SweepVar::file_size;
  throw ConfigError("sweep.variable", "must be users, files or file-size");
}

struct ExperimentSpec {
  ScenarioConfig base;
  SweepVar sweep = SweepVar::users;
  std::vector<double> values;  // empty: the base value only
  std::vector<Scheme> schemes;
  std::size_t iterations = 200;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  std::size_t max_slots = 5000;
  std::string out;

  void validate() const {
    if (schemes.empty()) throw ConfigError("schemes", "must list at least one scheme");
    for (std::size_t i = 0; i < schemes.size(); ++i)
      for (std::size_t j = i + 1; j < schemes.size(); ++j)
        if (schemes[i] == schemes[j]) throw ConfigError("schemes", "lists a scheme twice");
    if (iterations < 1) throw ConfigError("iterations", "must be >= 1");
    if (threads < 1) throw ConfigError("threads", "must be >= 1");
    for (std::size_t i = 1; i < values.size(); ++i)
      if (!(values[i] > values[i - 1])) throw ConfigError("sweep.values", "must be strictly increasing");
    for (const ScenarioConfig& c : points()) c.validate();
  }

  std::vector<double> sweep_values() const {
    if (!values.empty()) return values;
    switch (sweep) {
      case SweepVar::users: return {static_cast<double>(base.num_users)};
      case SweepVar::files: return {static_cast<double>(base.num_files)};
      case SweepVar::file_size: return {base.file_size_bits};
    }
    return {};
  }

  ScenarioConfig point(double v) const {
    ScenarioConfig c = base;
    auto as_count = [&](const char* field) {
      if (!(v >= 1.0) || v != std::floor(v)) throw ConfigError(field, "sweep value must be a positive integer");
      return static_cast<std::size_t>(v);
    };
    switch (sweep) {
      case SweepVar::users: c.num_users = as_count("users"); break;
      case SweepVar::files: c.num_files = as_count("files"); break;
      case SweepVar::file_size: c.file_size_bits = v; break;
    }
    return c;
  }

  std::vector<ScenarioConfig> points() const {
    std::vector<ScenarioConfig> out;
    for (double v : sweep_values()) out.push_back(point(v));
    return out;
  }
};

struct ExperimentRow {
  std::string sweep_var;
  double sweep_value = 0.0;
  PointSummary summary;
};

struct ExperimentResult {
  std::vector<ExperimentRow> rows;
  std::vector<MonteCarloResult> points;
  bool any_point_fully_stalled = false;
};

inline ExperimentResult run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  ExperimentResult res;
  for (double v : spec.sweep_values()) {
    MonteCarloOptions mo;
    mo.iterations = spec.iterations;
    mo.base_seed = spec.seed;
    mo.threads = spec.threads;
    mo.episode.max_slots = spec.max_slots;
    MonteCarloResult mc = monte_carlo(spec.point(v), spec.schemes, mo);
    for (const PointSummary& s : mc.summaries) {
      res.rows.push_back({sweep_name(spec.sweep), v, s});
      if (s.completed == 0) res.any_point_fully_stalled = true;
    }
    res.points.push_back(std::move(mc));
  }
  return res;
}

inline std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

inline void write_csv(std::ostream& os, const std::vector<ExperimentRow>& rows) {
  os << "scheme,sweep_var,sweep_value,iterations,completed,stalled,mean_T_o_s,std_T_o_s,ci95_lo,ci95_hi,mean_slots\n";
  for (const ExperimentRow& r : rows) {
    const PointSummary& s = r.summary;
    os << scheme_name(s.scheme) << ',' << r.sweep_var << ',' << format_number(r.sweep_value) << ',' << s.iterations
       << ',' << s.completed << ',' << s.stalled << ',' << format_number(s.mean) << ',' << format_number(s.stddev)
       << ',' << format_number(s.ci95_lo) << ',' << format_number(s.ci95_hi) << ',' << format_number(s.mean_slots)
       << '\n';
  }
}

}  // namespace fogran

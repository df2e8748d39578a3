#pragma once

#include <string>

#include "fogran/fogran.hpp"

namespace fixtures {

inline fogran::Scenario example1() {
  return fogran::fixed_scenario_from_json(fogran::load_json_file(std::string(FOGRAN_SCENARIO_DIR) + "/example1.json"));
}

// Two eRRHs, capacities given per user; everyone misses exactly one file.
inline fogran::Scenario two_errh(const fogran::Matrix& caps, fogran::Matrix csm, double rth = 0.0) {
  using namespace fogran;
  FixedScenarioSpec s;
  s.num_errhs = 2;
  s.num_users = caps.rows();
  s.num_files = caps.rows();
  s.file_size_bits = 10.0;
  s.rate_threshold_bps = rth;
  s.caches = {FileSet::first_n(s.num_files), FileSet::first_n(s.num_files)};
  for (std::size_t u = 0; u < s.num_users; ++u) s.has.push_back(FileSet::first_n(s.num_files) - FileSet::single(u));
  s.errh_capacity = caps;
  s.csm = std::move(csm);
  return make_fixed_scenario(s);
}

}  // namespace fixtures

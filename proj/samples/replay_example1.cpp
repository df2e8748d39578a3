// Replays the bundled two-eRRH scenario with every scheme and prints the completion times.

#include <iostream>

#include "fogran/fogran.hpp"

int main(int argc, char** argv) {
  using namespace fogran;
  const std::string path = argc > 1 ? argv[1] : std::string(FOGRAN_SCENARIO_DIR) + "/example1.json";
  const Scenario sc = fixed_scenario_from_json(load_json_file(path));
  for (Scheme s : kAllSchemes) {
    const EpisodeResult r = run_episode(sc.instance, sc.side, s, 7);
    std::cout << scheme_name(s) << ": ";
    if (r.stalled)
      std::cout << "stalled (" << r.stall_reason << ")\n";
    else
      std::cout << r.completion_time << " s in " << r.num_slots << " slot(s)\n";
  }
}

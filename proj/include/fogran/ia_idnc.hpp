#pragma once

#include <algorithm>
#include <vector>

#include "fogran/graphs.hpp"
#include "fogran/model.hpp"
#include "fogran/nc.hpp"

namespace fogran {

// One candidate eRRH schedule: combination, adopted rate and the users it reaches.
struct IaIdncVertex {
  std::size_t errh = 0;
  FileSet files;
  double rate = 0.0;
  UserSet targets;
};

using IaIdncGraph = WeightedGraph<IaIdncVertex>;

// Distinct capacities from `e` to the users in `users`, highest first, keeping those >= floor.
inline std::vector<double> candidate_rates(const Matrix& caps, std::size_t e, UserSet users, double floor) {
  std::vector<double> r;
  for (std::size_t u : users)
    if (caps(u, e) >= floor && caps(u, e) > 0.0) r.push_back(caps(u, e));
  std::sort(r.begin(), r.end(), std::greater<>());
  r.erase(std::unique(r.begin(), r.end()), r.end());
  return r;
}

// caps is N x K. Vertices are listed by target count (largest first), then eRRH,
// combination and decreasing rate, so that lowest-id tie-breaking favors wider plans.
inline IaIdncGraph build_ia_idnc_graph(const NetworkInstance& inst, const SideState& side, const Matrix& caps,
                                       double rate_floor, std::size_t combo_cap) {
  std::vector<IaIdncVertex> verts;
  const UserSet wanting = side.wanting();
  for (std::size_t e = 0; e < inst.num_errhs; ++e) {
    UserSet eligible;
    for (std::size_t u : wanting)
      if (caps(u, e) > 0.0 && caps(u, e) >= rate_floor) eligible.insert(u);
    if (eligible.empty()) continue;
    for (FileSet combo : enumerate_idnc_combinations(inst.caches[e], side, eligible, combo_cap)) {
      UserSet served;
      for (std::size_t u : eligible)
        if (is_instantly_decodable(combo, u, side)) served.insert(u);
      for (double r : candidate_rates(caps, e, served, rate_floor)) {
        UserSet t;
        for (std::size_t u : served)
          if (caps(u, e) >= r) t.insert(u);
        verts.push_back({e, combo, r, t});
      }
    }
  }
  std::stable_sort(verts.begin(), verts.end(), [](const IaIdncVertex& a, const IaIdncVertex& b) {
    if (a.targets.size() != b.targets.size()) return a.targets.size() > b.targets.size();
    return a.errh < b.errh;
  });
  IaIdncGraph g(Semantics::compatibility);
  for (const IaIdncVertex& v : verts)
    g.add_vertex(v, static_cast<double>(v.targets.size()) * v.rate / inst.file_size_bits);
  for (std::size_t a = 0; a < g.size(); ++a)
    for (std::size_t b = a + 1; b < g.size(); ++b)
      if (verts[a].errh != verts[b].errh && !verts[a].targets.intersects(verts[b].targets)) g.add_edge(a, b);
  return g;
}

}  // namespace fogran

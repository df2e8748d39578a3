#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "fogran/channel.hpp"
#include "fogran/decision.hpp"
#include "fogran/graphs.hpp"
#include "fogran/model.hpp"
#include "fogran/slot_channel.hpp"

namespace fogran {

struct D2dVertex {
  std::size_t transmitter = 0;
  double rate = 0.0;
  std::size_t receiver = 0;
  std::size_t file = 0;
};

using D2dGraph = WeightedGraph<D2dVertex>;

struct D2dTransmitter {
  std::size_t user = 0;
  FileSet has;             // files it may send
  double rate_floor = 0.0; // lowest rate that still meets its time constraint
  std::optional<std::size_t> idle_host;
};

struct D2dGraphOptions {
  bool rate_aware = true;             // false drops CC2 and uses one vertex per (k, i, f)
  bool single_receiver = false;       // uncoded unicast: one receiver per transmitter
  std::optional<double> only_rate;    // restrict vertices to this rate
};

// Zone members of k among `receivers` that want something k holds.
inline std::size_t d2d_demand(const NetworkInstance& inst, const SideState& side, const D2dTransmitter& t,
                              UserSet receivers) {
  std::size_t n = 0;
  for (std::size_t i : inst.zones[t.user] & receivers)
    if (side.wants[i].intersects(t.has)) ++n;
  return n;
}

inline D2dGraph build_d2d_conflict_graph(const NetworkInstance& inst, const SideState& side,
                                         const CapacityStatusMatrix& csm, std::span<const D2dTransmitter> txs,
                                         UserSet receivers, const D2dGraphOptions& opt = {}) {
  const double b = inst.file_size_bits;
  std::vector<D2dVertex> verts;
  std::vector<double> weights;
  receivers &= side.wanting();
  for (const D2dTransmitter& t : txs) {
    const UserSet reach = (inst.zones[t.user] & receivers) - UserSet::single(t.user);
    if (reach.empty()) continue;
    const double demand = static_cast<double>(d2d_demand(inst, side, t, receivers));
    std::vector<double> rates;
    if (opt.only_rate) {
      rates.push_back(*opt.only_rate);
    } else {
      for (std::size_t i : reach)
        if (csm(t.user, i) > 0.0 && csm(t.user, i) >= t.rate_floor) rates.push_back(csm(t.user, i));
      std::sort(rates.begin(), rates.end(), std::greater<>());
      rates.erase(std::unique(rates.begin(), rates.end()), rates.end());
    }
    for (std::size_t i : reach) {
      const FileSet files = t.has & side.wants[i];
      if (files.empty()) continue;
      if (!opt.rate_aware) {
        if (csm(t.user, i) <= 0.0) continue;
        for (std::size_t f : files) {
          verts.push_back({t.user, csm(t.user, i), i, f});
          weights.push_back(1.0);
        }
        continue;
      }
      for (double r : rates) {
        if (r > csm(t.user, i) || r < t.rate_floor || !(r > 0.0)) continue;
        for (std::size_t f : files) {
          verts.push_back({t.user, r, i, f});
          weights.push_back(demand * r / b);
        }
      }
    }
  }
  D2dGraph g(Semantics::conflict);
  for (std::size_t v = 0; v < verts.size(); ++v) g.add_vertex(verts[v], weights[v]);
  for (std::size_t a = 0; a < verts.size(); ++a)
    for (std::size_t c = a + 1; c < verts.size(); ++c) {
      const D2dVertex &x = verts[a], &y = verts[c];
      bool conflict = false;
      if (x.transmitter == y.transmitter) {
        if (opt.single_receiver && x.receiver != y.receiver) conflict = true;
        // CC1: the two files must each be known to the other receiver
        if (x.file != y.file && !(side.has[y.receiver].contains(x.file) && side.has[x.receiver].contains(y.file)))
          conflict = true;
        if (x.receiver == y.receiver && (x.file != y.file || x.rate != y.rate)) conflict = true;
        if (opt.rate_aware && x.rate != y.rate) conflict = true;  // CC2
      } else {
        if (x.receiver == y.receiver) conflict = true;  // CC3
        if (x.transmitter == y.receiver || y.transmitter == x.receiver) conflict = true;  // CC4
      }
      if (conflict) g.add_edge(a, c);
    }
  return g;
}

// Groups selected vertices into one plan per transmitter.
inline std::vector<D2dPlan> plans_from_selection(const D2dGraph& g, std::span<const std::size_t> sel,
                                                 std::span<const D2dTransmitter> txs) {
  std::map<std::size_t, D2dPlan> by_tx;
  for (std::size_t v : sel) {
    const D2dVertex& x = g.payload(v);
    D2dPlan& p = by_tx[x.transmitter];
    p.transmitter = x.transmitter;
    p.files.insert(x.file);
    p.targets.insert(x.receiver);
    p.rate = p.rate == 0.0 ? x.rate : std::min(p.rate, x.rate);
    for (const D2dTransmitter& t : txs)
      if (t.user == x.transmitter) p.idle_host = t.idle_host;
  }
  std::vector<D2dPlan> out;
  for (auto& [k, p] : by_tx) out.push_back(p);
  return out;
}

// Recomputes D2D capacities with every selected transmitter active. Receivers whose
// capacity falls below their transmitter's floor are dropped, rates are clamped to the
// weakest remaining receiver, and transmitters left without receivers fall silent.
// Repeats until nothing changes; removing a transmitter only helps the others.
inline void settle_d2d_interference(std::vector<D2dPlan>& plans, const SlotChannel& ch, const SideState& side,
                                    const std::map<std::size_t, double>& floors) {
  for (;;) {
    UserSet active;
    for (const D2dPlan& p : plans) active.insert(p.transmitter);
    bool changed = false;
    for (D2dPlan& p : plans) {
      const auto it = floors.find(p.transmitter);
      const double floor = it == floors.end() ? 0.0 : it->second;
      UserSet keep;
      double rate = p.rate;
      for (std::size_t i : p.targets) {
        const double c = ch.d2d_capacity(active, p.transmitter, i);
        if (c > 0.0 && c >= floor) {
          keep.insert(i);
          rate = std::min(rate, c);
        }
      }
      if (keep != p.targets) {
        changed = true;
        FileSet files;
        for (std::size_t i : keep) files |= p.files & side.wants[i];
        p.files = files;
        p.targets = keep;
      }
      p.rate = keep.empty() ? 0.0 : rate;
    }
    const std::size_t before = plans.size();
    std::erase_if(plans, [](const D2dPlan& p) { return p.targets.empty(); });
    if (!changed && plans.size() == before) return;
  }
}

}  // namespace fogran

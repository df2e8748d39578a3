#pragma once

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <vector>

#include "fogran/context.hpp"
#include "fogran/coordinated.hpp"
#include "fogran/d2d.hpp"
#include "fogran/decision.hpp"
#include "fogran/graphs.hpp"
#include "fogran/ia_idnc.hpp"
#include "fogran/nc.hpp"

namespace fogran {

// Baselines ignore R_th and run every eRRH at P_max.
inline constexpr DecisionPolicy kBaselinePolicy{false, false};

namespace detail {

inline SlotDecision baseline_decision(const NetworkInstance& inst) {
  SlotDecision d;
  d.policy = kBaselinePolicy;
  d.powers.assign(inst.num_errhs, 0.0);
  return d;
}

inline void set_powers(SlotDecision& d, const NetworkInstance& inst, const SlotChannel& ch) {
  for (const ErrhPlan& p : d.errh_plans) d.powers[p.errh] = inst.errh_max_power_w;
  adopt_rates_at_powers(d, ch);
}

inline void finish(SlotDecision& d, const NetworkInstance& inst, const SlotChannel& ch, const char* scheme,
                   bool adopt_rates = true) {
  if (adopt_rates) set_powers(d, inst, ch);
  if (d.empty()) throw StallError(std::string(scheme) + ": nothing can be scheduled");
  d.t_max = compute_t_max(d, inst.file_size_bits);
}

// Strongest eRRH that caches something the user wants, or K when none can reach it.
inline std::size_t best_errh(const NetworkInstance& inst, const SideState& side, const Matrix& caps, std::size_t u) {
  std::size_t best = inst.num_errhs;
  double best_c = 0.0;
  for (std::size_t e = 0; e < inst.num_errhs; ++e)
    if (side.wants[u].intersects(inst.caches[e]) && caps(u, e) > best_c) {
      best_c = caps(u, e);
      best = e;
    }
  return best;
}

// Free users broadcast to the users no eRRH serves, using the D2D conflict graph.
inline void add_d2d_stage(const SchedulerContext& ctx, SlotDecision& d, const D2dGraphOptions& opt,
                          WeightMode mode, const char* label) {
  const NetworkInstance& inst = ctx.instance;
  const SideState& side = ctx.side;
  const UserSet served = errh_targets(d);
  std::vector<D2dTransmitter> txs;
  for (std::size_t u = 0; u < inst.num_users; ++u)
    if (!served.contains(u)) txs.push_back({u, side.has[u], opt.only_rate.value_or(0.0), std::nullopt});
  const D2dGraph g = build_d2d_conflict_graph(inst, side, ctx.channel.csm(), txs, side.wanting() - served, opt);
  const VertexSet sel = greedy_max_weight_independent_set(g, mode);
  ctx.observe(label, g, sel);
  d.d2d_plans = plans_from_selection(g, sel, txs);
  std::map<std::size_t, double> floors;
  for (const D2dTransmitter& t : txs) floors[t.user] = t.rate_floor;
  settle_d2d_interference(d.d2d_plans, ctx.channel, side, floors);
}

}  // namespace detail

// Each user joins its strongest eRRH; every eRRH sends one random linear combination of
// its cache at the rate of its weakest member. A reception credits one wanted file.
inline SlotDecision rlnc_schedule(const SchedulerContext& ctx) {
  const NetworkInstance& inst = ctx.instance;
  const SideState& side = ctx.side;
  const Matrix& caps = ctx.channel.capacities_at_max();
  SlotDecision d = detail::baseline_decision(inst);
  if (side.complete()) return d;
  std::vector<UserSet> members(inst.num_errhs);
  for (std::size_t u : side.wanting())
    if (std::size_t e = detail::best_errh(inst, side, caps, u); e < inst.num_errhs) members[e].insert(u);
  for (std::size_t e = 0; e < inst.num_errhs; ++e) {
    if (members[e].empty()) continue;
    ErrhPlan p;
    p.errh = e;
    p.coding = Coding::rlnc;
    p.files = inst.caches[e];
    p.targets = members[e];
    p.rate = std::numeric_limits<double>::infinity();
    for (std::size_t u : members[e]) p.rate = std::min(p.rate, caps(u, e));
    d.errh_plans.push_back(p);
  }
  detail::finish(d, inst, ctx.channel, "rlnc");
  return d;
}

// Rate-unaware IDNC: combinations picked by how many users they reach, rate set to the
// weakest scheduled user afterwards, for both eRRHs and D2D.
inline SlotDecision classical_idnc_schedule(const SchedulerContext& ctx) {
  const NetworkInstance& inst = ctx.instance;
  const SideState& side = ctx.side;
  const Matrix& caps = ctx.channel.capacities_at_max();
  SlotDecision d = detail::baseline_decision(inst);
  if (side.complete()) return d;
  std::vector<IaIdncVertex> verts;
  for (std::size_t e = 0; e < inst.num_errhs; ++e) {
    UserSet eligible;
    for (std::size_t u : side.wanting())
      if (caps(u, e) > 0.0) eligible.insert(u);
    for (FileSet combo : enumerate_idnc_combinations(inst.caches[e], side, eligible, inst.max_combination_size)) {
      IaIdncVertex v{e, combo, 0.0, {}};
      for (std::size_t u : eligible)
        if (is_instantly_decodable(combo, u, side)) v.targets.insert(u);
      verts.push_back(v);
    }
  }
  IaIdncGraph g(Semantics::compatibility);
  for (const IaIdncVertex& v : verts) g.add_vertex(v, static_cast<double>(v.targets.size()));
  for (std::size_t a = 0; a < verts.size(); ++a)
    for (std::size_t b = a + 1; b < verts.size(); ++b)
      if (verts[a].errh != verts[b].errh && !verts[a].targets.intersects(verts[b].targets)) g.add_edge(a, b);
  const VertexSet sel = greedy_max_weight_clique(g);
  ctx.observe("classical-idnc", g, sel);
  for (std::size_t v : sel) {
    const IaIdncVertex& x = g.payload(v);
    ErrhPlan p;
    p.errh = x.errh;
    p.files = x.files;
    p.targets = x.targets;
    p.rate = std::numeric_limits<double>::infinity();
    for (std::size_t u : x.targets) p.rate = std::min(p.rate, caps(u, x.errh));
    d.errh_plans.push_back(p);
  }
  D2dGraphOptions opt;
  opt.rate_aware = false;
  detail::add_d2d_stage(ctx, d, opt, WeightMode::original, "classical-idnc-d2d");
  detail::finish(d, inst, ctx.channel, "classical-idnc");
  return d;
}

// One user per eRRH at that user's full capacity, then uncoded D2D unicast.
inline SlotDecision uncoded_unicast_schedule(const SchedulerContext& ctx) {
  const NetworkInstance& inst = ctx.instance;
  const SideState& side = ctx.side;
  const Matrix& caps = ctx.channel.capacities_at_max();
  SlotDecision d = detail::baseline_decision(inst);
  if (side.complete()) return d;
  struct Pair {
    double cap;
    std::size_t e, u;
  };
  std::vector<Pair> pairs;
  for (std::size_t u : side.wanting())
    for (std::size_t e = 0; e < inst.num_errhs; ++e)
      if (caps(u, e) > 0.0 && side.wants[u].intersects(inst.caches[e])) pairs.push_back({caps(u, e), e, u});
  std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) { return a.cap > b.cap; });
  std::vector<char> errh_used(inst.num_errhs, 0);
  UserSet users_used;
  for (const Pair& pr : pairs) {
    if (errh_used[pr.e] || users_used.contains(pr.u)) continue;
    errh_used[pr.e] = 1;
    users_used.insert(pr.u);
    ErrhPlan p;
    p.errh = pr.e;
    p.files = FileSet::single((side.wants[pr.u] & inst.caches[pr.e]).front());
    p.targets = UserSet::single(pr.u);
    p.rate = pr.cap;
    d.errh_plans.push_back(p);
  }
  D2dGraphOptions opt;
  opt.single_receiver = true;
  detail::add_d2d_stage(ctx, d, opt, WeightMode::original, "uncoded-unicast-d2d");
  detail::finish(d, inst, ctx.channel, "uncoded-unicast");
  return d;
}

// Each eRRH broadcasts, uncoded, the cached file most wanted by the users associated with it.
inline SlotDecision uncoded_broadcast_fran_schedule(const SchedulerContext& ctx) {
  const NetworkInstance& inst = ctx.instance;
  const SideState& side = ctx.side;
  const Matrix& caps = ctx.channel.capacities_at_max();
  SlotDecision d = detail::baseline_decision(inst);
  if (side.complete()) return d;
  std::vector<UserSet> members(inst.num_errhs);
  for (std::size_t u : side.wanting())
    if (std::size_t e = detail::best_errh(inst, side, caps, u); e < inst.num_errhs) members[e].insert(u);
  for (std::size_t e = 0; e < inst.num_errhs; ++e) {
    if (members[e].empty()) continue;
    std::size_t best_f = 0, best_n = 0;
    for (std::size_t f : inst.caches[e]) {
      std::size_t n = 0;
      for (std::size_t u : members[e]) n += side.wants[u].contains(f);
      if (n > best_n) {
        best_n = n;
        best_f = f;
      }
    }
    ErrhPlan p;
    p.errh = e;
    p.files = FileSet::single(best_f);
    p.rate = std::numeric_limits<double>::infinity();
    for (std::size_t u : members[e])
      if (side.wants[u].contains(best_f)) {
        p.targets.insert(u);
        p.rate = std::min(p.rate, caps(u, e));
      }
    d.errh_plans.push_back(p);
  }
  detail::finish(d, inst, ctx.channel, "uncoded-broadcast-fran");
  return d;
}

// Randomly ordered users broadcast the file missing at most of their free neighbors.
// Users no D2D transmitter can reach fall back to a channel-unaware eRRH broadcast.
inline SlotDecision uncoded_broadcast_d2d_schedule(const SchedulerContext& ctx) {
  const NetworkInstance& inst = ctx.instance;
  const SideState& side = ctx.side;
  const Matrix& caps = ctx.channel.capacities_at_max();
  const CapacityStatusMatrix& csm = ctx.channel.csm();
  SlotDecision d = detail::baseline_decision(inst);
  if (side.complete()) return d;
  std::vector<std::size_t> order(inst.num_users);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), ctx.rng);
  UserSet busy;  // transmitting or already targeted
  for (std::size_t k : order) {
    if (busy.contains(k)) continue;
    const UserSet free = (inst.zones[k] & side.wanting()) - busy;
    std::size_t best_f = 0, best_n = 0;
    for (std::size_t f : side.has[k]) {
      std::size_t n = 0;
      for (std::size_t i : free) n += side.wants[i].contains(f);
      if (n > best_n) {
        best_n = n;
        best_f = f;
      }
    }
    if (best_n == 0) continue;
    D2dPlan p;
    p.transmitter = k;
    p.files = FileSet::single(best_f);
    p.rate = std::numeric_limits<double>::infinity();
    for (std::size_t i : free)
      if (side.wants[i].contains(best_f) && csm(k, i) > 0.0) {
        p.targets.insert(i);
        p.rate = std::min(p.rate, csm(k, i));
      }
    if (p.targets.empty()) continue;
    busy.insert(k);
    busy |= p.targets;
    d.d2d_plans.push_back(p);
  }
  settle_d2d_interference(d.d2d_plans, ctx.channel, side, {});

  UserSet rest = side.wanting() - all_targets(d) - d2d_transmitters(d);
  for (std::size_t e = 0; e < inst.num_errhs && !rest.empty(); ++e) {
    std::size_t best_f = 0, best_n = 0;
    for (std::size_t f : inst.caches[e]) {
      std::size_t n = 0;
      for (std::size_t u : rest) n += side.wants[u].contains(f) && caps(u, e) > 0.0;
      if (n > best_n) {
        best_n = n;
        best_f = f;
      }
    }
    if (best_n == 0) continue;
    ErrhPlan p;
    p.errh = e;
    p.files = FileSet::single(best_f);
    p.rate = std::numeric_limits<double>::infinity();
    for (std::size_t u : rest)
      if (side.wants[u].contains(best_f) && caps(u, e) > 0.0) {
        p.targets.insert(u);
        p.rate = std::min(p.rate, caps(u, e));
      }
    rest -= p.targets;
    d.errh_plans.push_back(p);
  }
  detail::finish(d, inst, ctx.channel, "uncoded-broadcast-d2d");
  return d;
}

// IA-IDNC clique at P_max, then every eRRH and D2D link uses the slowest selected rate.
inline SlotDecision ra_idnc_schedule(const SchedulerContext& ctx) {
  const NetworkInstance& inst = ctx.instance;
  const SideState& side = ctx.side;
  SlotDecision d = detail::baseline_decision(inst);
  d.policy.bound_free_d2d = true;
  if (side.complete()) return d;
  const IaIdncGraph g = build_ia_idnc_graph(inst, side, ctx.channel.capacities_at_max(), 0.0, inst.max_combination_size);
  const VertexSet sel = greedy_max_weight_clique(g);
  ctx.observe("ra-idnc", g, sel);
  for (std::size_t v : sel) {
    const IaIdncVertex& x = g.payload(v);
    ErrhPlan p;
    p.errh = x.errh;
    p.files = x.files;
    p.targets = x.targets;
    p.rate = x.rate;
    d.errh_plans.push_back(p);
  }
  detail::set_powers(d, inst, ctx.channel);
  double common = std::numeric_limits<double>::infinity();
  for (const ErrhPlan& p : d.errh_plans) common = std::min(common, p.rate);
  for (ErrhPlan& p : d.errh_plans) p.rate = common;
  D2dGraphOptions opt;
  if (!sel.empty()) opt.only_rate = common;
  detail::add_d2d_stage(ctx, d, opt, WeightMode::modified, "ra-idnc-d2d");
  detail::finish(d, inst, ctx.channel, "ra-idnc", false);
  return d;
}

}  // namespace fogran

#pragma once

#include <algorithm>
#include <limits>
#include <map>
#include <vector>

#include "fogran/context.hpp"
#include "fogran/d2d.hpp"
#include "fogran/decision.hpp"
#include "fogran/ia_idnc.hpp"
#include "fogran/power.hpp"

namespace fogran {

namespace detail {

inline PowerProblem power_problem(const SchedulerContext& ctx, std::vector<UserSet> targets) {
  return PowerProblem{std::move(targets), &ctx.channel.errh_gains(), ctx.instance.errh_max_power_w,
                      ctx.instance.noise_w, ctx.instance.file_size_bits};
}

// Stage 1 of the joint scheme: greedy clique in the IA-IDNC graph where each pick is
// scored by the power-optimized objective of the partial schedule.
inline std::vector<ErrhPlan> joint_errh_stage(const SchedulerContext& ctx, std::vector<double>& powers) {
  const NetworkInstance& inst = ctx.instance;
  const SlotChannel& ch = ctx.channel;
  const double rth = inst.rate_threshold_bps;
  const IaIdncGraph g =
      build_ia_idnc_graph(inst, ctx.side, ch.capacities_at_max(), rth, inst.max_combination_size);

  ReweighFn reweigh;
  std::map<std::pair<std::size_t, std::uint64_t>, double> memo;
  std::size_t memo_depth = 0;
  if (ch.power_dependent()) {
    reweigh = [&](std::span<const std::size_t> selected, std::size_t v) {
      if (selected.size() != memo_depth) {
        memo.clear();
        memo_depth = selected.size();
      }
      const IaIdncVertex& x = g.payload(v);
      const auto key = std::make_pair(x.errh, x.targets.bits());
      if (auto it = memo.find(key); it != memo.end()) return it->second;
      std::vector<UserSet> targets(inst.num_errhs);
      for (std::size_t s : selected) targets[g.payload(s).errh] = g.payload(s).targets;
      targets[x.errh] = x.targets;
      const double obj = optimize_powers(power_problem(ctx, std::move(targets)), ctx.power_options).objective;
      memo.emplace(key, obj);
      return obj;
    };
  }
  const VertexSet sel = greedy_max_weight_clique(g, reweigh);
  ctx.observe("ia-idnc", g, sel);

  std::vector<ErrhPlan> plans;
  std::vector<UserSet> targets(inst.num_errhs);
  for (std::size_t v : sel) {
    const IaIdncVertex& x = g.payload(v);
    ErrhPlan p;
    p.errh = x.errh;
    p.files = x.files;
    p.rate = x.rate;
    p.targets = x.targets;
    plans.push_back(p);
    targets[x.errh] = x.targets;
  }
  powers.assign(inst.num_errhs, 0.0);
  if (ch.power_dependent()) {
    powers = optimize_powers(power_problem(ctx, targets), ctx.power_options).powers;
  } else {
    for (const ErrhPlan& p : plans) powers[p.errh] = inst.errh_max_power_w;
  }

  // Rates at the chosen powers: drop users that fell below the floor, clamp to the weakest
  // remaining user. Silencing an eRRH only raises the others' capacities, so a second
  // pass settles it.
  for (int pass = 0; pass < 2; ++pass) {
    for (ErrhPlan& p : plans) {
      if (!(powers[p.errh] > 0.0)) {
        p.targets = UserSet{};
        continue;
      }
      UserSet keep;
      double rate = std::numeric_limits<double>::infinity();
      for (std::size_t u : p.targets) {
        const double c = ch.errh_capacity(powers, p.errh, u);
        if (c > 0.0 && c >= rth) {
          keep.insert(u);
          rate = std::min(rate, c);
        }
      }
      // survivors still decode the full combination
      p.targets = keep;
      p.rate = keep.empty() ? 0.0 : rate;
    }
    for (const ErrhPlan& p : plans)
      if (p.targets.empty()) powers[p.errh] = 0.0;
    std::erase_if(plans, [](const ErrhPlan& p) { return p.targets.empty(); });
  }
  return plans;
}

}  // namespace detail

// Stage 2 transmitters: users no eRRH serves (free), and users served by an eRRH
// that finishes early (idle-time relays).
inline std::vector<D2dTransmitter> joint_d2d_transmitters(const NetworkInstance& inst, const SideState& side,
                                                          const std::vector<ErrhPlan>& plans) {
  const double b = inst.file_size_bits, rth = inst.rate_threshold_bps;
  double t_star = 0.0;
  for (const ErrhPlan& p : plans) t_star = std::max(t_star, p.duration(b));
  const double free_floor = plans.empty() ? rth : std::max(rth, b / t_star);
  UserSet served;
  for (const ErrhPlan& p : plans) served |= p.targets;
  std::vector<D2dTransmitter> txs;
  for (std::size_t u = 0; u < inst.num_users; ++u) {
    if (!served.contains(u)) {
      txs.push_back({u, side.has[u], free_floor, std::nullopt});
      continue;
    }
    for (const ErrhPlan& p : plans) {
      if (!p.targets.contains(u)) continue;
      const double idle = t_star - p.duration(b);
      if (idle > 0.0) {
        FileSet h = side.has[u];
        h.insert(delivered_file(p, u, side));
        txs.push_back({u, h, std::max(rth, b / idle), p.errh});
      }
    }
  }
  return txs;
}

inline SlotDecision joint_schedule(const SchedulerContext& ctx) {
  const NetworkInstance& inst = ctx.instance;
  const SideState& side = ctx.side;
  SlotDecision d;
  d.policy = {true, true};
  d.powers.assign(inst.num_errhs, 0.0);
  if (side.complete()) return d;

  d.errh_plans = detail::joint_errh_stage(ctx, d.powers);

  const std::vector<D2dTransmitter> txs = joint_d2d_transmitters(inst, side, d.errh_plans);
  const UserSet receivers = side.wanting() - errh_targets(d);
  const D2dGraph g = build_d2d_conflict_graph(inst, side, ctx.channel.csm(), txs, receivers);
  const VertexSet sel = greedy_max_weight_independent_set(g, WeightMode::modified);
  ctx.observe("d2d", g, sel);
  d.d2d_plans = plans_from_selection(g, sel, txs);
  std::map<std::size_t, double> floors;
  for (const D2dTransmitter& t : txs) floors[t.user] = t.rate_floor;
  settle_d2d_interference(d.d2d_plans, ctx.channel, side, floors);

  if (d.empty()) throw StallError("joint: no transmission meets the rate threshold");
  d.t_max = compute_t_max(d, inst.file_size_bits);
  return d;
}

}  // namespace fogran

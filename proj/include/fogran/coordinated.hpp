#pragma once

#include <algorithm>
#include <limits>
#include <map>
#include <random>
#include <vector>

#include "fogran/context.hpp"
#include "fogran/d2d.hpp"
#include "fogran/decision.hpp"
#include "fogran/graphs.hpp"

namespace fogran {

struct CoordinatedVertex {
  std::size_t errh = 0;
  std::size_t user = 0;
  std::size_t file = 0;
  double rate = 0.0;
};

using CoordinatedGraph = WeightedGraph<CoordinatedVertex>;

namespace detail {
template <class T>
std::size_t uniform_pick(const std::vector<T>& items, Rng& rng) {
  if (items.size() == 1) return 0;
  return std::uniform_int_distribution<std::size_t>(0, items.size() - 1)(rng);
}
}  // namespace detail

// Vertices (e, u, f, R) for users in `users`. Same-eRRH vertices conflict unless they share
// the rate and pass the IDNC pairing conditions; one user can't be served by two eRRHs.
inline CoordinatedGraph build_coordinated_graph(const NetworkInstance& inst, const SideState& side, const Matrix& caps,
                                                UserSet users, double rate_floor) {
  std::vector<CoordinatedVertex> verts;
  users &= side.wanting();
  for (std::size_t e = 0; e < inst.num_errhs; ++e) {
    std::vector<double> rates;
    for (std::size_t u : users)
      if (caps(u, e) > 0.0 && caps(u, e) >= rate_floor && side.wants[u].intersects(inst.caches[e]))
        rates.push_back(caps(u, e));
    std::sort(rates.begin(), rates.end(), std::greater<>());
    rates.erase(std::unique(rates.begin(), rates.end()), rates.end());
    for (std::size_t u : users)
      for (std::size_t f : side.wants[u] & inst.caches[e])
        for (double r : rates)
          if (r <= caps(u, e)) verts.push_back({e, u, f, r});
  }
  CoordinatedGraph g(Semantics::conflict);
  for (const CoordinatedVertex& v : verts) g.add_vertex(v, v.rate / inst.file_size_bits);
  for (std::size_t a = 0; a < verts.size(); ++a)
    for (std::size_t b = a + 1; b < verts.size(); ++b) {
      const CoordinatedVertex &x = verts[a], &y = verts[b];
      bool conflict;
      if (x.errh == y.errh) {
        const bool pairable = x.user != y.user && (x.file == y.file || (side.has[x.user].contains(y.file) &&
                                                                        side.has[y.user].contains(x.file)));
        conflict = x.rate != y.rate || !pairable;
      } else {
        conflict = x.user == y.user;
      }
      if (conflict) g.add_edge(a, b);
    }
  return g;
}

// Largest score wins; exact ties are broken uniformly at random with the slot RNG.
template <class ScoreFn>
std::size_t pick_max_random_tie(std::span<const std::size_t> cand, ScoreFn&& score, Rng& rng) {
  std::vector<std::size_t> best;
  double best_s = -std::numeric_limits<double>::infinity();
  for (std::size_t v : cand) {
    const double s = score(v);
    if (s > best_s) {
      best_s = s;
      best.assign(1, v);
    } else if (s == best_s) {
      best.push_back(v);
    }
  }
  return best[detail::uniform_pick(best, rng)];
}

inline SlotDecision coordinated_schedule(const SchedulerContext& ctx) {
  const NetworkInstance& inst = ctx.instance;
  const SideState& side = ctx.side;
  const SlotChannel& ch = ctx.channel;
  const double b = inst.file_size_bits, rth = inst.rate_threshold_bps;
  const Matrix& caps = ch.capacities_at_max();
  SlotDecision d;
  d.policy = {true, false};
  d.powers.assign(inst.num_errhs, 0.0);
  if (side.complete()) return d;

  // Stage 1: D2D first. Every user may transmit, receivers are all users still wanting files.
  std::vector<D2dTransmitter> txs;
  for (std::size_t u = 0; u < inst.num_users; ++u) txs.push_back({u, side.has[u], rth, std::nullopt});
  const D2dGraph g1 = build_d2d_conflict_graph(inst, side, ch.csm(), txs, side.wanting());
  // Primary weight of an association (u, f): B over the worst capacity among the eRRHs
  // caching f. Users the eRRHs reach poorly go to D2D first.
  auto primary = [&](std::size_t v) {
    const D2dVertex& x = g1.payload(v);
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t e = 0; e < inst.num_errhs; ++e)
      if (inst.caches[e].contains(x.file)) worst = std::min(worst, caps(x.receiver, e));
    return worst > 0.0 ? b / worst : std::numeric_limits<double>::infinity();
  };
  const VertexSet sel1 = greedy_independent_set_by(g1, [&](std::span<const std::size_t> cand) {
    double top = -1.0;
    for (std::size_t v : cand) top = std::max(top, primary(v));
    std::vector<std::size_t> assoc;
    for (std::size_t v : cand)
      if (primary(v) == top) assoc.push_back(v);
    return pick_max_random_tie(assoc, [&](std::size_t v) { return g1.weight(v); }, ctx.rng);
  });
  ctx.observe("coordinated-d2d", g1, sel1);
  d.d2d_plans = plans_from_selection(g1, sel1, txs);
  std::map<std::size_t, double> floors;
  for (const D2dTransmitter& t : txs) floors[t.user] = rth;
  settle_d2d_interference(d.d2d_plans, ch, side, floors);

  // Stage 2: eRRHs serve whoever is neither receiving nor sending on D2D.
  double r_min = std::numeric_limits<double>::infinity();
  for (const D2dPlan& p : d.d2d_plans) r_min = std::min(r_min, p.rate);
  if (d.d2d_plans.empty()) r_min = rth;
  const UserSet rest = side.wanting() - all_targets(d) - d2d_transmitters(d);
  CoordinatedGraph g2 = build_coordinated_graph(inst, side, caps, rest, std::max(r_min, rth));
  if (g2.empty() && !rest.empty() && r_min > rth) {
    g2 = build_coordinated_graph(inst, side, caps, rest, rth);
    d.notes.push_back("stage-2 rate floor r_min left no vertex; fell back to R_th");
  }
  const VertexSet sel2 = greedy_independent_set_by(g2, [&](std::span<const std::size_t> cand) {
    return pick_max_random_tie(cand, [&](std::size_t v) { return g2.weight(v); }, ctx.rng);
  });
  ctx.observe("coordinated-errh", g2, sel2);
  std::map<std::size_t, ErrhPlan> by_errh;
  for (std::size_t v : sel2) {
    const CoordinatedVertex& x = g2.payload(v);
    ErrhPlan& p = by_errh[x.errh];
    p.errh = x.errh;
    p.files.insert(x.file);
    p.targets.insert(x.user);
    p.rate = x.rate;
  }
  for (auto& [e, p] : by_errh) {
    d.errh_plans.push_back(p);
    d.powers[e] = inst.errh_max_power_w;
  }
  adopt_rates_at_powers(d, ch);
  if (d.empty()) throw StallError("coordinated: no transmission meets the rate threshold");
  d.t_max = compute_t_max(d, b);
  return d;
}

}  // namespace fogran

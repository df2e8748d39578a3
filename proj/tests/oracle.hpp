#pragma once

// Exhaustive optimum for tiny fixed-rate instances, written independently of the
// schedulers. Each slot may use any combination of:
//  - per eRRH: silence, or an XOR of cached files to any subset of users that can
//    decode it instantly and whose capacity reaches max(R_th, rate);
//  - per user not receiving over D2D: one uncoded file it holds (or decodes from an
//    eRRH this slot) sent to any subset of its zone that wants it.
// Each user receives at most one file. A relay served by an eRRH must finish its D2D
// transmission within the slot after its eRRH packet. Slot length is the longest
// finishing time. This is a superset of what both proposed schedulers can emit, so the
// shortest path over Has states lower-bounds their completion time.
//
// With `bounded` set, every D2D transmission must also end by the time the slowest eRRH
// finishes (no eRRH transmission means no D2D either): the feasible set of the joint
// scheme, which enforces that bound.

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <random>
#include <vector>

#include "fogran/fogran.hpp"

namespace oracle {

struct Tiny {
  std::size_t k = 0, n = 0, f = 0;
  double b = 10.0;
  double rth = 0.0;
  std::vector<std::uint32_t> cache;  // per eRRH bitmask
  std::vector<std::uint32_t> has;    // per user bitmask
  std::vector<std::vector<double>> cap;  // [user][errh]
  std::vector<std::vector<double>> csm;  // [tx][rx]
};

inline int popcount(std::uint32_t x) {
  int c = 0;
  for (; x; x &= x - 1) ++c;
  return c;
}

inline int lowest(std::uint32_t x) {
  int i = 0;
  while (!(x >> i & 1U)) ++i;
  return i;
}

using State = std::vector<std::uint32_t>;

struct Partial {
  std::vector<int> got;           // file received per user, -1 none
  std::vector<double> finish_rx;  // time the eRRH packet of a user ends
  std::vector<char> transmits;
  double t = 0.0;
  double t_star = 0.0;  // slowest eRRH
};

inline void d2d_stage(const Tiny& in, const State& has, std::size_t tx, Partial& p,
                      std::map<std::vector<int>, double>& best, bool bounded) {
  const std::uint32_t all = (1U << in.f) - 1U;
  if (tx == in.n) {
    bool any = false;
    for (int g : p.got) any |= g >= 0;
    if (!any) return;
    auto [it, fresh] = best.emplace(p.got, p.t);
    if (!fresh && p.t < it->second) it->second = p.t;
    return;
  }
  d2d_stage(in, has, tx + 1, p, best, bounded);
  const bool d2d_rx = p.got[tx] >= 0 && p.finish_rx[tx] < 0.0;
  if (d2d_rx) return;
  std::uint32_t avail = has[tx];
  const double start = p.got[tx] >= 0 ? p.finish_rx[tx] : 0.0;
  if (p.got[tx] >= 0) avail |= 1U << p.got[tx];
  for (std::size_t file = 0; file < in.f; ++file) {
    if (!(avail >> file & 1U)) continue;
    std::vector<std::size_t> cand;
    for (std::size_t r = 0; r < in.n; ++r)
      if (r != tx && in.csm[tx][r] > 0.0 && in.csm[tx][r] >= in.rth && p.got[r] < 0 && !p.transmits[r] &&
          ((all & ~has[r]) >> file & 1U))
        cand.push_back(r);
    for (std::uint32_t sub = 1; sub < (1U << cand.size()); ++sub) {
      double rate = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < cand.size(); ++j)
        if (sub >> j & 1U) rate = std::min(rate, in.csm[tx][cand[j]]);
      const double end = start + in.b / rate;
      if (bounded && end > p.t_star * (1.0 + 1e-12)) continue;
      Partial q = p;
      q.transmits[tx] = 1;
      for (std::size_t j = 0; j < cand.size(); ++j)
        if (sub >> j & 1U) q.got[cand[j]] = static_cast<int>(file);
      q.t = std::max(q.t, end);
      d2d_stage(in, has, tx + 1, q, best, bounded);
    }
  }
}

inline void errh_stage(const Tiny& in, const State& has, std::size_t e, Partial& p,
                       std::map<std::vector<int>, double>& best, bool bounded) {
  const std::uint32_t all = (1U << in.f) - 1U;
  if (e == in.k) {
    p.t_star = p.t;
    d2d_stage(in, has, 0, p, best, bounded);
    return;
  }
  errh_stage(in, has, e + 1, p, best, bounded);
  for (std::uint32_t combo = in.cache[e]; combo; combo = (combo - 1) & in.cache[e]) {
    std::vector<std::size_t> cand;
    for (std::size_t u = 0; u < in.n; ++u)
      if (p.got[u] < 0 && popcount(combo & (all & ~has[u])) == 1 && in.cap[u][e] > 0.0 && in.cap[u][e] >= in.rth)
        cand.push_back(u);
    for (std::uint32_t sub = 1; sub < (1U << cand.size()); ++sub) {
      double rate = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < cand.size(); ++j)
        if (sub >> j & 1U) rate = std::min(rate, in.cap[cand[j]][e]);
      const double d = in.b / rate;
      Partial q = p;
      for (std::size_t j = 0; j < cand.size(); ++j)
        if (sub >> j & 1U) {
          q.got[cand[j]] = lowest(combo & (all & ~has[cand[j]]));
          q.finish_rx[cand[j]] = d;
        }
      q.t = std::max(q.t, d);
      errh_stage(in, has, e + 1, q, best, bounded);
    }
  }
}

// Minimum completion time, or +inf when some wanted file can never arrive.
inline double optimal_completion(const Tiny& in, bool bounded = false) {
  const std::uint32_t all = (1U << in.f) - 1U;
  auto done = [&](const State& s) {
    for (std::uint32_t h : s)
      if (h != all) return false;
    return true;
  };
  std::map<State, double> dist;
  using Item = std::pair<double, State>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[in.has] = 0.0;
  pq.push({0.0, in.has});
  while (!pq.empty()) {
    auto [d, s] = pq.top();
    pq.pop();
    if (d > dist[s]) continue;
    if (done(s)) return d;
    Partial p{std::vector<int>(in.n, -1), std::vector<double>(in.n, -1.0), std::vector<char>(in.n, 0)};
    std::map<std::vector<int>, double> outcomes;
    errh_stage(in, s, 0, p, outcomes, bounded);
    for (const auto& [got, t] : outcomes) {
      State next = s;
      for (std::size_t u = 0; u < in.n; ++u)
        if (got[u] >= 0) next[u] |= 1U << got[u];
      const double nd = d + t;
      auto it = dist.find(next);
      if (it == dist.end() || nd < it->second) {
        dist[next] = nd;
        pq.push({nd, next});
      }
    }
  }
  return std::numeric_limits<double>::infinity();
}

// Random instance with N <= 4, F <= 4, K <= 2. Capacities come from a small grid so
// ties and exact arithmetic both occur.
inline Tiny random_tiny(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nd(2, 4), fd(2, 4), kd(1, 2), coin(0, 1);
  static const double grid[] = {0.5, 1.0, 2.0, 2.5, 5.0};
  std::uniform_int_distribution<int> gd(0, 4), zero(0, 3);
  Tiny t;
  t.n = static_cast<std::size_t>(nd(rng));
  t.f = static_cast<std::size_t>(fd(rng));
  t.k = static_cast<std::size_t>(kd(rng));
  t.b = 10.0;
  t.rth = coin(rng) ? 0.5 : 0.0;
  const std::uint32_t all = (1U << t.f) - 1U;
  std::uniform_int_distribution<std::uint32_t> sd(1, all);
  std::uint32_t covered = 0;
  for (std::size_t e = 0; e < t.k; ++e) {
    t.cache.push_back(sd(rng));
    covered |= t.cache.back();
  }
  t.cache.back() |= all & ~covered;
  std::uniform_int_distribution<std::uint32_t> hd(0, all);
  for (std::size_t u = 0; u < t.n; ++u) t.has.push_back(hd(rng));
  t.cap.assign(t.n, std::vector<double>(t.k));
  for (auto& row : t.cap)
    for (double& c : row) c = grid[gd(rng)];
  t.csm.assign(t.n, std::vector<double>(t.n, 0.0));
  for (std::size_t a = 0; a < t.n; ++a)
    for (std::size_t b = a + 1; b < t.n; ++b)
      if (zero(rng) != 0) t.csm[a][b] = t.csm[b][a] = grid[gd(rng)];
  return t;
}

inline fogran::Scenario to_scenario(const Tiny& t) {
  fogran::FixedScenarioSpec s;
  s.num_errhs = t.k;
  s.num_users = t.n;
  s.num_files = t.f;
  s.file_size_bits = t.b;
  s.rate_threshold_bps = t.rth;
  s.max_combination_size = t.f;
  for (std::uint32_t c : t.cache) s.caches.push_back(fogran::FileSet::from_bits(c));
  for (std::uint32_t h : t.has) s.has.push_back(fogran::FileSet::from_bits(h));
  s.errh_capacity = fogran::Matrix(t.n, t.k);
  s.csm = fogran::Matrix(t.n, t.n);
  for (std::size_t u = 0; u < t.n; ++u) {
    for (std::size_t e = 0; e < t.k; ++e) s.errh_capacity(u, e) = t.cap[u][e];
    for (std::size_t v = 0; v < t.n; ++v) s.csm(u, v) = t.csm[u][v];
  }
  return fogran::make_fixed_scenario(s);
}

}  // namespace oracle

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "fogran/channel.hpp"
#include "fogran/core.hpp"

namespace fogran {

struct PowerProblem {
  std::vector<UserSet> targets;  // per eRRH; empty means unassigned
  const Matrix* gains = nullptr; // N x K
  double max_power_w = 1.0;
  double noise_w = 1.0;
  double file_size_bits = 1.0;
};

struct PowerOptions {
  std::size_t grid_points = 12;
  std::size_t golden_iterations = 40;
  std::size_t max_sweeps = 50;
  double tolerance = 1e-6;
  bool multi_start = true;  // also start from every on/off corner of the box
};

struct PowerResult {
  std::vector<double> powers;
  double objective = 0.0;
};

// Sum over assigned eRRHs of |targets| / B * min over targets of log2(1 + SINR).
inline double power_objective(const PowerProblem& p, std::span<const double> powers) {
  double total = 0.0;
  for (std::size_t e = 0; e < p.targets.size(); ++e) {
    if (p.targets[e].empty()) continue;
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t u : p.targets[e]) worst = std::min(worst, std::log2(1.0 + errh_sinr(powers, *p.gains, e, u, p.noise_w)));
    total += static_cast<double>(p.targets[e].size()) / p.file_size_bits * worst;
  }
  return total;
}

namespace detail {

inline double line_search(const PowerProblem& p, std::vector<double>& x, std::size_t e, const PowerOptions& opt) {
  const double hi = p.max_power_w;
  auto f = [&](double v) {
    x[e] = v;
    return power_objective(p, x);
  };
  const double start = x[e];
  double best_x = start, best_f = f(start);
  // moves must beat the current best by the optimizer tolerance, so rounding noise cannot
  // pull a coordinate off a corner of the box
  auto better = [&](double fv) { return fv > best_f + opt.tolerance * std::abs(best_f); };
  const std::size_t g = std::max<std::size_t>(opt.grid_points, 2);
  for (std::size_t i = 0; i <= g; ++i) {
    const double v = hi * static_cast<double>(i) / static_cast<double>(g);
    const double fv = f(v);
    if (better(fv)) {
      best_f = fv;
      best_x = v;
    }
  }
  // golden-section refinement inside the grid cell pair around the best point
  const double step = hi / static_cast<double>(g);
  double a = std::max(0.0, best_x - step), b = std::min(hi, best_x + step);
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double fc = f(c), fd = f(d);
  for (std::size_t it = 0; it < opt.golden_iterations; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = f(d);
    }
  }
  if (better(fc)) {
    best_f = fc;
    best_x = c;
  }
  if (better(fd)) {
    best_f = fd;
    best_x = d;
  }
  x[e] = best_x;
  return best_f;
}

inline PowerResult coordinate_ascent(const PowerProblem& p, std::vector<double> x, const PowerOptions& opt) {
  double cur = power_objective(p, x);
  for (std::size_t sweep = 0; sweep < opt.max_sweeps; ++sweep) {
    const double before = cur;
    for (std::size_t e = 0; e < x.size(); ++e)
      if (!p.targets[e].empty()) cur = line_search(p, x, e, opt);
    if (cur - before <= opt.tolerance * std::max(std::abs(before), std::numeric_limits<double>::min())) break;
  }
  return {std::move(x), cur};
}

}  // namespace detail

// Local maximizer of power_objective over [0, P_max]^K by cyclic coordinate ascent.
inline PowerResult optimize_powers(const PowerProblem& p, const PowerOptions& opt = {}) {
  const std::size_t k = p.targets.size();
  std::vector<std::size_t> assigned;
  for (std::size_t e = 0; e < k; ++e)
    if (!p.targets[e].empty()) assigned.push_back(e);
  if (assigned.empty()) return {std::vector<double>(k, 0.0), 0.0};

  std::vector<double> uniform(k, 0.0);
  for (std::size_t e : assigned) uniform[e] = p.max_power_w;
  // one active eRRH sees no interference, so full power is optimal
  if (assigned.size() == 1) return {uniform, power_objective(p, uniform)};

  PowerResult best = detail::coordinate_ascent(p, uniform, opt);
  if (opt.multi_start) {
    const std::size_t corners = std::size_t{1} << assigned.size();
    for (std::size_t mask = 1; mask + 1 < corners; ++mask) {
      std::vector<double> x(k, 0.0);
      for (std::size_t j = 0; j < assigned.size(); ++j)
        if ((mask >> j) & 1u) x[assigned[j]] = p.max_power_w;
      PowerResult r = detail::coordinate_ascent(p, std::move(x), opt);
      if (r.objective > best.objective) best = std::move(r);
    }
  }
  return best;
}

}  // namespace fogran

#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "fogran/core.hpp"

namespace fogran {

inline constexpr double kDefaultMinDistanceM = 1.0;

// 148 + 40 log10(d[km])
inline double path_loss_db(double distance_km) {
  if (!(distance_km > 0.0)) throw std::invalid_argument("path_loss_db: distance must be > 0");
  return 148.0 + 40.0 * std::log10(distance_km);
}

inline double path_loss_db_m(double distance_m, double min_distance_m = kDefaultMinDistanceM) {
  return path_loss_db(std::max(distance_m, min_distance_m) / 1000.0);
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

inline double mean_gain(double distance_m, double min_distance_m = kDefaultMinDistanceM) {
  return db_to_linear(-path_loss_db_m(distance_m, min_distance_m));
}

inline double dbm_per_hz_to_watts(double dbm_per_hz, double bandwidth_hz) {
  return std::pow(10.0, (dbm_per_hz - 30.0) / 10.0) * bandwidth_hz;
}

inline double shannon_rate(double sinr, double bandwidth_hz) { return bandwidth_hz * std::log2(1.0 + sinr); }

// gains: N x K, |h|^2 from eRRH e to user u.
inline double errh_sinr(std::span<const double> powers, const Matrix& gains, std::size_t e, std::size_t u,
                        double noise_w) {
  double interference = 0.0;
  for (std::size_t n = 0; n < powers.size(); ++n)
    if (n != e) interference += powers[n] * gains(u, n);
  return powers[e] * gains(u, e) / (noise_w + interference);
}

inline double errh_rate(std::span<const double> powers, const Matrix& gains, std::size_t e, std::size_t u,
                        double noise_w, double bandwidth_hz) {
  if (powers[e] <= 0.0) return 0.0;
  return shannon_rate(errh_sinr(powers, gains, e, u, noise_w), bandwidth_hz);
}

// Static D2D geometry and power shared by the rate functions below.
struct D2dLinkModel {
  const Matrix* gains = nullptr;          // N x N, [tx][rx]
  const std::vector<UserSet>* zones = nullptr;  // zones[k] = users reachable from k
  double user_power_w = 0.0;
  double noise_w = 1.0;
  double bandwidth_hz = 1.0;
};

// Interference comes from the other active transmitters whose zone also holds the receiver.
inline double d2d_rate(const D2dLinkModel& m, UserSet active, std::size_t k, std::size_t i) {
  if (k == i || !(*m.zones)[k].contains(i)) return 0.0;
  double interference = 0.0;
  for (std::size_t other : active)
    if (other != k && other != i && (*m.zones)[other].contains(i))
      interference += m.user_power_w * (*m.gains)(other, i);
  return shannon_rate(m.user_power_w * (*m.gains)(k, i) / (m.noise_w + interference), m.bandwidth_hz);
}

struct CapacityStatusMatrix {
  Matrix r;

  explicit CapacityStatusMatrix(std::size_t n = 0) : r(n, n, 0.0) {}
  std::size_t size() const { return r.rows(); }
  double operator()(std::size_t k, std::size_t i) const { return r(k, i); }
  double& operator()(std::size_t k, std::size_t i) { return r(k, i); }
};

// Entry (k, i) is computed as if k transmitted alongside `active`; pass an empty set
// for the interference-free matrix.
inline CapacityStatusMatrix build_csm(const D2dLinkModel& m, UserSet active) {
  const std::size_t n = m.zones->size();
  CapacityStatusMatrix csm(n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i : (*m.zones)[k]) csm(k, i) = d2d_rate(m, active | UserSet::single(k), k, i);
  return csm;
}

}  // namespace fogran

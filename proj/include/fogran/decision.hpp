#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fogran/model.hpp"
#include "fogran/nc.hpp"
#include "fogran/slot_channel.hpp"

namespace fogran {

struct ErrhPlan : TransmissionPlan {
  std::size_t errh = 0;
};

struct D2dPlan : TransmissionPlan {
  std::size_t transmitter = 0;
  std::optional<std::size_t> idle_host;  // set for relays inside an eRRH's idle time
};

struct DecisionPolicy {
  bool enforce_rate_floor = true;  // C6/C7
  bool bound_free_d2d = true;      // free-standing D2D must end within the longest eRRH transmission
};

struct SlotDecision {
  std::vector<ErrhPlan> errh_plans;
  std::vector<D2dPlan> d2d_plans;
  std::vector<double> powers;  // per eRRH, 0 when silent
  double t_max = 0.0;
  DecisionPolicy policy;
  std::vector<std::string> notes;

  bool empty() const { return errh_plans.empty() && d2d_plans.empty(); }
};

class StallError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline UserSet errh_targets(const SlotDecision& d) {
  UserSet s;
  for (const ErrhPlan& p : d.errh_plans) s |= p.targets;
  return s;
}

inline UserSet all_targets(const SlotDecision& d) {
  UserSet s = errh_targets(d);
  for (const D2dPlan& p : d.d2d_plans) s |= p.targets;
  return s;
}

inline UserSet d2d_transmitters(const SlotDecision& d) {
  UserSet s;
  for (const D2dPlan& p : d.d2d_plans) s.insert(p.transmitter);
  return s;
}

inline double longest_errh_duration(const SlotDecision& d, double file_size_bits) {
  double t = 0.0;
  for (const ErrhPlan& p : d.errh_plans) t = std::max(t, p.duration(file_size_bits));
  return t;
}

// Longest eRRH transmission or free-standing D2D transmission. Idle-time relays end
// inside their host's slack, so they never set the slot length.
inline double compute_t_max(const SlotDecision& d, double file_size_bits) {
  double t = longest_errh_duration(d, file_size_bits);
  for (const D2dPlan& p : d.d2d_plans)
    if (!p.idle_host) t = std::max(t, p.duration(file_size_bits));
  return t;
}

inline const ErrhPlan* plan_of_errh(const SlotDecision& d, std::size_t e) {
  for (const ErrhPlan& p : d.errh_plans)
    if (p.errh == e) return &p;
  return nullptr;
}

// File a target recovers. XOR plans are instantly decodable; RLNC receptions credit the
// lowest-indexed wanted file of the generation.
inline std::size_t delivered_file(const TransmissionPlan& p, std::size_t user, const SideState& side) {
  return (p.files & side.wants[user]).front();
}

inline std::vector<Delivery> deliveries_of(const SlotDecision& d, const SideState& side) {
  std::vector<Delivery> out;
  for (const ErrhPlan& p : d.errh_plans)
    for (std::size_t u : p.targets) out.push_back({u, delivered_file(p, u, side), p.rate});
  for (const D2dPlan& p : d.d2d_plans)
    for (std::size_t u : p.targets) out.push_back({u, delivered_file(p, u, side), p.rate});
  return out;
}

// Users charged a full slot of delay: they still want files and receive nothing.
inline UserSet unserved_users(const SlotDecision& d, const SideState& side) {
  return side.wanting() - all_targets(d);
}

// Sets each eRRH plan's rate to its weakest target's capacity at the decision powers.
// Silent eRRHs radiate nothing, so this never lowers a rate chosen at uniform P_max.
inline void adopt_rates_at_powers(SlotDecision& d, const SlotChannel& ch) {
  for (ErrhPlan& p : d.errh_plans) {
    double r = std::numeric_limits<double>::infinity();
    for (std::size_t u : p.targets) r = std::min(r, ch.errh_capacity(d.powers, p.errh, u));
    if (!p.targets.empty()) p.rate = std::max(p.rate, r);
  }
}

// Has set an idle-time relay may draw from: its own Has plus what its host delivers this slot.
inline FileSet relay_has(const SlotDecision& d, const D2dPlan& p, const SideState& side) {
  FileSet h = side.has[p.transmitter];
  if (p.idle_host)
    if (const ErrhPlan* host = plan_of_errh(d, *p.idle_host); host && host->targets.contains(p.transmitter))
      h.insert(delivered_file(*host, p.transmitter, side));
  return h;
}

namespace detail {
inline bool leq_tol(double a, double b, double rel = 1e-9) { return a <= b + rel * std::max(std::abs(a), std::abs(b)); }
}  // namespace detail

// Returns one message per violated constraint; empty means the decision is feasible.
inline std::vector<std::string> check_decision(const SlotDecision& d, const NetworkInstance& inst,
                                               const SideState& side, const SlotChannel& ch) {
  std::vector<std::string> v;
  auto fail = [&](const std::string& s) { v.push_back(s); };
  const double b = inst.file_size_bits;
  const double rth = inst.rate_threshold_bps;

  if (d.powers.size() != inst.num_errhs) {
    fail("power vector has wrong length");
    return v;
  }
  for (std::size_t e = 0; e < inst.num_errhs; ++e)
    if (!(d.powers[e] >= 0.0) || !detail::leq_tol(d.powers[e], inst.errh_max_power_w, 1e-12))
      fail("C5: power of eRRH " + std::to_string(e) + " outside [0, P_max]");

  auto decodes = [&](const TransmissionPlan& p, std::size_t u) {
    if (p.coding == Coding::rlnc) return (p.files & side.wants[u]).size() >= 1;
    return is_instantly_decodable(p.files, u, side);
  };

  UserSet seen_errh;
  std::vector<char> errh_used(inst.num_errhs, 0);
  for (const ErrhPlan& p : d.errh_plans) {
    const std::string tag = "eRRH " + std::to_string(p.errh);
    if (p.errh >= inst.num_errhs) {
      fail(tag + ": no such eRRH");
      continue;
    }
    if (errh_used[p.errh]++) fail(tag + ": more than one plan");
    if (p.targets.empty()) fail(tag + ": empty target set");
    if (p.files.empty()) fail(tag + ": empty combination");
    if (!(p.rate > 0.0) || !std::isfinite(p.rate)) fail(tag + ": rate must be positive");
    if (!p.files.subset_of(inst.caches[p.errh])) fail("C4: " + tag + " sends an uncached file");
    if (!(d.powers[p.errh] > 0.0)) fail(tag + ": transmits with zero power");
    if (d.policy.enforce_rate_floor && !detail::leq_tol(rth, p.rate)) fail("C6: " + tag + " rate below R_th");
    if (p.targets.intersects(seen_errh)) fail("C1: " + tag + " shares targets with another eRRH");
    seen_errh |= p.targets;
    for (std::size_t u : p.targets) {
      if (u >= inst.num_users) {
        fail(tag + ": target out of range");
        continue;
      }
      if (!decodes(p, u)) fail(tag + ": user " + std::to_string(u) + " cannot decode");
      if (!detail::leq_tol(p.rate, ch.errh_capacity(d.powers, p.errh, u)))
        fail(tag + ": rate exceeds capacity of user " + std::to_string(u));
    }
  }

  const double t_star = longest_errh_duration(d, b);
  const UserSet txs = d2d_transmitters(d);
  UserSet seen_d2d;
  UserSet tx_seen;
  for (const D2dPlan& p : d.d2d_plans) {
    const std::string tag = "D2D u" + std::to_string(p.transmitter);
    if (p.transmitter >= inst.num_users) {
      fail(tag + ": no such user");
      continue;
    }
    if (tx_seen.contains(p.transmitter)) fail(tag + ": more than one plan");
    tx_seen.insert(p.transmitter);
    if (p.targets.empty()) fail(tag + ": empty target set");
    if (p.files.empty()) fail(tag + ": empty combination");
    if (!(p.rate > 0.0) || !std::isfinite(p.rate)) fail(tag + ": rate must be positive");
    if (!p.files.subset_of(relay_has(d, p, side))) fail("C4: " + tag + " sends a file it does not hold");
    if (d.policy.enforce_rate_floor && !detail::leq_tol(rth, p.rate)) fail("C7: " + tag + " rate below R_th");
    if (p.targets.intersects(seen_d2d)) fail("C2: " + tag + " shares targets with another D2D transmitter");
    if (p.targets.intersects(seen_errh)) fail("C2: " + tag + " targets a user served by an eRRH");
    seen_d2d |= p.targets;
    if (p.targets.intersects(txs)) fail("half-duplex: " + tag + " targets a transmitting user");
    for (std::size_t u : p.targets) {
      if (u >= inst.num_users || !inst.in_zone(p.transmitter, u)) {
        fail(tag + ": target outside coverage zone");
        continue;
      }
      if (!decodes(p, u)) fail(tag + ": user " + std::to_string(u) + " cannot decode");
      if (!detail::leq_tol(p.rate, ch.d2d_capacity(txs, p.transmitter, u)))
        fail(tag + ": rate exceeds capacity of user " + std::to_string(u));
    }
    if (p.idle_host) {
      const ErrhPlan* host = *p.idle_host < inst.num_errhs ? plan_of_errh(d, *p.idle_host) : nullptr;
      if (!host || !host->targets.contains(p.transmitter)) {
        fail(tag + ": idle-time relay not served by its host eRRH");
      } else if (!detail::leq_tol(b, p.rate * (t_star - host->duration(b)))) {
        fail("C3: " + tag + " does not fit in the idle time of its host");
      }
    } else {
      if (seen_errh.contains(p.transmitter)) fail("half-duplex: " + tag + " is served by an eRRH in the same slot");
      if (d.policy.bound_free_d2d && !d.errh_plans.empty() && !detail::leq_tol(p.duration(b), t_star))
        fail(tag + ": outlasts the longest eRRH transmission");
    }
  }

  const double t = compute_t_max(d, b);
  if (std::abs(d.t_max - t) > 1e-12 * std::max(1.0, t)) fail("t_max does not match the plan durations");
  return v;
}

inline std::string describe(const SlotDecision& d, double file_size_bits) {
  std::ostringstream os;
  for (const ErrhPlan& p : d.errh_plans)
    os << "  e" << p.errh + 1 << " sends " << to_string(p.files, "f") << (p.coding == Coding::rlnc ? " (RLNC)" : "")
       << " @ " << p.rate << " b/s to " << to_string(p.targets, "u") << ", " << p.duration(file_size_bits) << " s\n";
  for (const D2dPlan& p : d.d2d_plans) {
    os << "  u" << p.transmitter + 1 << " sends " << to_string(p.files, "f") << " @ " << p.rate << " b/s to "
       << to_string(p.targets, "u") << ", " << p.duration(file_size_bits) << " s";
    if (p.idle_host) os << " (idle time of e" << *p.idle_host + 1 << ")";
    os << "\n";
  }
  for (const std::string& n : d.notes) os << "  note: " << n << "\n";
  return os.str();
}

}  // namespace fogran

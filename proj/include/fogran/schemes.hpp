#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>

#include "fogran/baselines.hpp"
#include "fogran/context.hpp"
#include "fogran/coordinated.hpp"
#include "fogran/joint.hpp"

namespace fogran {

enum class Scheme {
  joint,
  coordinated,
  rlnc,
  classical_idnc,
  uncoded_unicast,
  uncoded_broadcast_fran,
  uncoded_broadcast_d2d,
  ra_idnc,
};

inline constexpr std::array<Scheme, 8> kAllSchemes{
    Scheme::joint,           Scheme::coordinated,           Scheme::rlnc,
    Scheme::classical_idnc,  Scheme::uncoded_unicast,       Scheme::uncoded_broadcast_fran,
    Scheme::uncoded_broadcast_d2d, Scheme::ra_idnc,
};

inline constexpr std::string_view scheme_name(Scheme s) {
  switch (s) {
    case Scheme::joint: return "joint";
    case Scheme::coordinated: return "coordinated";
    case Scheme::rlnc: return "rlnc";
    case Scheme::classical_idnc: return "classical-idnc";
    case Scheme::uncoded_unicast: return "uncoded-unicast";
    case Scheme::uncoded_broadcast_fran: return "uncoded-broadcast-fran";
    case Scheme::uncoded_broadcast_d2d: return "uncoded-broadcast-d2d";
    case Scheme::ra_idnc: return "ra-idnc";
  }
  return "?";
}

inline Scheme parse_scheme(std::string_view name) {
  for (Scheme s : kAllSchemes)
    if (scheme_name(s) == name) return s;
  throw std::invalid_argument("unknown scheme '" + std::string(name) + "'");
}

inline SlotDecision schedule(Scheme s, const SchedulerContext& ctx) {
  switch (s) {
    case Scheme::joint: return joint_schedule(ctx);
    case Scheme::coordinated: return coordinated_schedule(ctx);
    case Scheme::rlnc: return rlnc_schedule(ctx);
    case Scheme::classical_idnc: return classical_idnc_schedule(ctx);
    case Scheme::uncoded_unicast: return uncoded_unicast_schedule(ctx);
    case Scheme::uncoded_broadcast_fran: return uncoded_broadcast_fran_schedule(ctx);
    case Scheme::uncoded_broadcast_d2d: return uncoded_broadcast_d2d_schedule(ctx);
    case Scheme::ra_idnc: return ra_idnc_schedule(ctx);
  }
  throw std::logic_error("schedule: bad scheme");
}

}  // namespace fogran

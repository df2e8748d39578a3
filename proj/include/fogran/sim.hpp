#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "fogran/decision.hpp"
#include "fogran/model.hpp"
#include "fogran/schemes.hpp"
#include "fogran/slot_channel.hpp"

namespace fogran {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return splitmix64(splitmix64(seed ^ splitmix64(stream)) + index);
}

// RNG streams. Fading and mobility depend only on (seed, slot) so every scheme sees the
// same channel draws for a given seed.
inline constexpr std::uint64_t kFadingStream = 1;
inline constexpr std::uint64_t kMobilityStream = 2;
inline constexpr std::uint64_t kTieBreakStream = 3;

struct SlotRecord {
  SlotDecision decision;
  double t_max = 0.0;
  std::size_t delivered = 0;
};

struct EpisodeResult {
  Scheme scheme = Scheme::joint;
  std::uint64_t seed = 0;
  std::vector<double> completion;  // per user, seconds; 0 for users that wanted nothing
  double completion_time = 0.0;    // T_o
  std::size_t num_slots = 0;
  std::vector<SlotRecord> slots;   // filled when EpisodeOptions::keep_log
  bool stalled = false;
  std::string stall_reason;
  SideState final_side;
};

struct EpisodeOptions {
  std::size_t max_slots = 5000;
  bool keep_log = true;
  bool validate = true;
  bool redraw_positions_per_slot = false;
  GraphObserver* observer = nullptr;
  PowerOptions power_options = {};
};

class ConstraintViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline EpisodeResult run_episode(const NetworkInstance& instance, const SideState& initial, Scheme scheme,
                                 std::uint64_t seed, const EpisodeOptions& opt = {}) {
  EpisodeResult r;
  r.scheme = scheme;
  r.seed = seed;
  r.completion.assign(instance.num_users, 0.0);
  SideState side = initial;
  NetworkInstance moving;
  if (opt.redraw_positions_per_slot && !instance.fixed) moving = instance;
  const NetworkInstance* inst = &instance;
  Rng tie_rng(derive_seed(seed, kTieBreakStream, static_cast<std::uint64_t>(scheme)));
  double clock = 0.0;
  for (std::size_t slot = 0; !side.complete(); ++slot) {
    if (slot >= opt.max_slots) {
      r.stalled = true;
      r.stall_reason = "slot cap of " + std::to_string(opt.max_slots) + " reached";
      break;
    }
    if (opt.redraw_positions_per_slot && !instance.fixed) {
      Rng move_rng(derive_seed(seed, kMobilityStream, slot));
      redraw_user_positions(moving, move_rng);
      inst = &moving;
    }
    Rng fade_rng(derive_seed(seed, kFadingStream, slot));
    const SlotChannel ch = SlotChannel::draw(*inst, fade_rng);
    SchedulerContext ctx{*inst, side, ch, tie_rng, opt.observer, opt.power_options};
    SlotDecision d;
    try {
      d = schedule(scheme, ctx);
    } catch (const StallError& e) {
      r.stalled = true;
      r.stall_reason = e.what();
      break;
    }
    if (opt.validate) {
      const std::vector<std::string> v = check_decision(d, *inst, side, ch);
      if (!v.empty())
        throw ConstraintViolation(std::string(scheme_name(scheme)) + " slot " + std::to_string(slot + 1) + ": " +
                                  v.front());
    }
    const UserSet before = side.wanting();
    const std::vector<Delivery> del = deliveries_of(d, side);
    apply_deliveries(side, del, d.t_max, unserved_users(d, side));
    clock += d.t_max;
    for (std::size_t u : before - side.wanting()) r.completion[u] = clock;
    ++r.num_slots;
    if (opt.keep_log) {
      const double t = d.t_max;
      r.slots.push_back({std::move(d), t, del.size()});
    }
  }
  r.completion_time = r.completion.empty() ? 0.0 : *std::max_element(r.completion.begin(), r.completion.end());
  r.final_side = std::move(side);
  return r;
}

// Largest relative gap between the anticipated completion time (from the final
// accumulators) and the logged completion time, over completed users that wanted files.
inline double completion_identity_error(const EpisodeResult& r, double file_size_bits) {
  double worst = 0.0;
  for (std::size_t u = 0; u < r.completion.size(); ++u) {
    if (!r.final_side.wants[u].empty() || r.final_side.initial_wants_size[u] == 0) continue;
    const double predicted = anticipated_completion(r.final_side, u, file_size_bits);
    const double logged = r.completion[u];
    worst = std::max(worst, std::abs(predicted - logged) / std::max(std::abs(logged), 1e-300));
  }
  return worst;
}

// ---- Monte Carlo -------------------------------------------------------------

struct EpisodeSummary {
  bool stalled = false;
  double completion_time = 0.0;
  std::size_t num_slots = 0;
  double identity_error = 0.0;
};

struct PointSummary {
  Scheme scheme = Scheme::joint;
  std::size_t iterations = 0;
  std::size_t completed = 0;
  std::size_t stalled = 0;
  double mean = 0.0;
  double stddev = 0.0;
  double ci95_lo = 0.0;
  double ci95_hi = 0.0;
  double mean_slots = 0.0;
};

struct MonteCarloResult {
  std::vector<Scheme> schemes;
  std::vector<std::vector<EpisodeSummary>> episodes;  // [scheme][iteration], seed = base_seed + iteration
  std::vector<PointSummary> summaries;
};

inline PointSummary summarize(Scheme s, const std::vector<EpisodeSummary>& eps) {
  PointSummary p;
  p.scheme = s;
  p.iterations = eps.size();
  double sum = 0.0, slots = 0.0;
  for (const EpisodeSummary& e : eps) {
    if (e.stalled) {
      ++p.stalled;
      continue;
    }
    ++p.completed;
    sum += e.completion_time;
    slots += static_cast<double>(e.num_slots);
  }
  if (p.completed == 0) return p;
  const double n = static_cast<double>(p.completed);
  p.mean = sum / n;
  p.mean_slots = slots / n;
  double ss = 0.0;
  for (const EpisodeSummary& e : eps)
    if (!e.stalled) ss += (e.completion_time - p.mean) * (e.completion_time - p.mean);
  p.stddev = p.completed > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  const double half = 1.96 * p.stddev / std::sqrt(n);
  p.ci95_lo = p.mean - half;
  p.ci95_hi = p.mean + half;
  return p;
}

struct MonteCarloOptions {
  std::size_t iterations = 200;
  std::uint64_t base_seed = 1;
  std::size_t threads = 1;
  EpisodeOptions episode = {};
};

// Iteration i draws the scenario and every channel from seed base_seed + i and runs all
// schemes on it, so schemes are compared on identical draws.
inline MonteCarloResult monte_carlo(const ScenarioConfig& cfg, const std::vector<Scheme>& schemes,
                                    const MonteCarloOptions& opt) {
  cfg.validate();
  if (opt.iterations < 1) throw std::invalid_argument("monte_carlo: iterations must be >= 1");
  MonteCarloResult out;
  out.schemes = schemes;
  out.episodes.assign(schemes.size(), std::vector<EpisodeSummary>(opt.iterations));
  EpisodeOptions eo = opt.episode;
  eo.keep_log = false;
  eo.redraw_positions_per_slot = cfg.redraw_positions_per_slot;
  eo.max_slots = std::max<std::size_t>(opt.episode.max_slots, 1);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= opt.iterations) return;
      try {
        const std::uint64_t seed = opt.base_seed + i;
        const Scenario sc = generate_scenario(cfg, seed);
        for (std::size_t s = 0; s < schemes.size(); ++s) {
          const EpisodeResult r = run_episode(sc.instance, sc.side, schemes[s], seed, eo);
          out.episodes[s][i] = {r.stalled, r.completion_time, r.num_slots,
                                r.stalled ? 0.0 : completion_identity_error(r, cfg.file_size_bits)};
        }
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next = opt.iterations;
        return;
      }
    }
  };
  const std::size_t n_threads = std::max<std::size_t>(1, std::min(opt.threads, opt.iterations));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  for (std::size_t s = 0; s < schemes.size(); ++s) out.summaries.push_back(summarize(schemes[s], out.episodes[s]));
  return out;
}

// Mean and normal 95% interval of the per-seed differences a - b over seeds where both completed.
struct PairedDifference {
  std::size_t pairs = 0;
  double mean = 0.0;
  double ci95_lo = 0.0;
  double ci95_hi = 0.0;
};

inline PairedDifference paired_difference(const std::vector<EpisodeSummary>& a, const std::vector<EpisodeSummary>& b) {
  std::vector<double> diff;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i)
    if (!a[i].stalled && !b[i].stalled) diff.push_back(a[i].completion_time - b[i].completion_time);
  PairedDifference p;
  p.pairs = diff.size();
  if (diff.empty()) return p;
  const double n = static_cast<double>(diff.size());
  for (double x : diff) p.mean += x;
  p.mean /= n;
  double ss = 0.0;
  for (double x : diff) ss += (x - p.mean) * (x - p.mean);
  const double sd = diff.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  p.ci95_lo = p.mean - 1.96 * sd / std::sqrt(n);
  p.ci95_hi = p.mean + 1.96 * sd / std::sqrt(n);
  return p;
}

}  // namespace fogran

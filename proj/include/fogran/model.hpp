#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fogran/channel.hpp"
#include "fogran/core.hpp"

namespace fogran {

class ConfigError : public std::invalid_argument {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct ScenarioConfig {
  std::size_t num_errhs = 3;
  std::size_t num_users = 12;
  std::size_t num_files = 15;
  double file_size_bits = 1e6;
  double cache_ratio = 0.6;
  double rate_threshold = 0.0;  // bits/s/Hz, scaled by the bandwidth
  double errh_power_dbm_per_hz = -42.60;
  double user_power_dbm_per_hz = -42.60;
  double noise_dbm_per_hz = -174.0;
  double bandwidth_hz = 1e6;
  double cell_radius_m = 900.0;
  double coverage_radius_m = 50.0;
  double min_distance_m = kDefaultMinDistanceM;
  double has_fraction_min = 0.45;
  double has_fraction_max = 0.55;
  bool fading = true;
  bool redraw_positions_per_slot = false;
  std::size_t max_combination_size = 4;
  std::vector<Point> errh_positions;  // empty: default layout

  void validate() const {
    auto positive = [](const char* f, double v) {
      if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(f, "must be a positive finite number");
    };
    if (num_errhs < 1) throw ConfigError("num_errhs", "must be >= 1");
    if (num_users < 1 || num_users > 64) throw ConfigError("num_users", "must be in [1, 64]");
    if (num_files < 1 || num_files > 64) throw ConfigError("num_files", "must be in [1, 64]");
    positive("file_size_bits", file_size_bits);
    positive("bandwidth_hz", bandwidth_hz);
    positive("cell_radius_m", cell_radius_m);
    positive("coverage_radius_m", coverage_radius_m);
    positive("min_distance_m", min_distance_m);
    if (!(cache_ratio > 0.0 && cache_ratio <= 1.0)) throw ConfigError("cache_ratio", "must be in (0, 1]");
    if (!(rate_threshold >= 0.0) || !std::isfinite(rate_threshold))
      throw ConfigError("rate_threshold", "must be >= 0");
    if (!(has_fraction_min >= 0.0 && has_fraction_min <= has_fraction_max && has_fraction_max <= 1.0))
      throw ConfigError("has_fraction_min", "need 0 <= has_fraction_min <= has_fraction_max <= 1");
    if (max_combination_size < 1) throw ConfigError("max_combination_size", "must be >= 1");
    if (!errh_positions.empty() && errh_positions.size() != num_errhs)
      throw ConfigError("errh_positions", "must list exactly num_errhs points");
    const std::size_t cache = cache_size();
    if (cache < 1) throw ConfigError("cache_ratio", "round(cache_ratio * num_files) must be >= 1");
    if (cache * num_errhs < num_files)
      throw ConfigError("cache_ratio", "caches cannot cover all files (round(mu*F)*K < F)");
  }

  std::size_t cache_size() const {
    return static_cast<std::size_t>(std::llround(cache_ratio * static_cast<double>(num_files)));
  }
};

// Capacities given directly in bits/s, bypassing the channel model.
struct FixedRates {
  Matrix errh;  // N x K
  CapacityStatusMatrix csm;
};

struct NetworkInstance {
  std::size_t num_errhs = 0;
  std::size_t num_users = 0;
  std::size_t num_files = 0;
  double file_size_bits = 0.0;
  double cache_ratio = 0.0;
  double rate_threshold_bps = 0.0;
  double errh_max_power_w = 0.0;
  double user_power_w = 0.0;
  double noise_w = 0.0;
  double bandwidth_hz = 1.0;
  double cell_radius_m = 0.0;
  double coverage_radius_m = 0.0;
  double min_distance_m = kDefaultMinDistanceM;
  bool fading = false;
  std::size_t max_combination_size = 4;
  std::vector<Point> errh_positions;
  std::vector<Point> user_positions;
  std::vector<FileSet> caches;
  Matrix errh_gains;  // N x K, path loss only
  Matrix d2d_gains;   // N x N, path loss only
  std::vector<UserSet> zones;
  std::optional<FixedRates> fixed;

  FileSet frame() const { return FileSet::first_n(num_files); }
  UserSet all_users() const { return UserSet::first_n(num_users); }
  bool in_zone(std::size_t k, std::size_t i) const { return zones[k].contains(i); }
  D2dLinkModel d2d_model(const Matrix& gains) const {
    return D2dLinkModel{&gains, &zones, user_power_w, noise_w, bandwidth_hz};
  }
};

struct SideState {
  std::vector<FileSet> has;
  std::vector<FileSet> wants;
  std::vector<std::size_t> initial_wants_size;
  std::vector<double> delay;
  std::vector<double> inv_rate_sum;
  std::vector<std::size_t> recv_count;

  static SideState from_has(std::vector<FileSet> has_sets, std::size_t num_files) {
    const FileSet frame = FileSet::first_n(num_files);
    SideState s;
    const std::size_t n = has_sets.size();
    s.has = std::move(has_sets);
    s.wants.resize(n);
    s.initial_wants_size.resize(n);
    for (std::size_t u = 0; u < n; ++u) {
      if (!s.has[u].subset_of(frame)) throw std::invalid_argument("has set outside the frame");
      s.wants[u] = frame - s.has[u];
      s.initial_wants_size[u] = s.wants[u].size();
    }
    s.delay.assign(n, 0.0);
    s.inv_rate_sum.assign(n, 0.0);
    s.recv_count.assign(n, 0);
    return s;
  }

  std::size_t num_users() const { return has.size(); }
  UserSet wanting() const {
    UserSet w;
    for (std::size_t u = 0; u < wants.size(); ++u)
      if (!wants[u].empty()) w.insert(u);
    return w;
  }
  bool complete() const { return wanting().empty(); }
  std::size_t total_wants() const {
    std::size_t t = 0;
    for (FileSet w : wants) t += w.size();
    return t;
  }
};

struct Scenario {
  NetworkInstance instance;
  SideState side;
};

struct Delivery {
  std::size_t user = 0;
  std::size_t file = 0;
  double rate = 0.0;
};

// Moves delivered files into Has and charges t_max to every listed user that still wants files.
inline void apply_deliveries(SideState& s, std::span<const Delivery> delivered, double t_max,
                             UserSet idle_or_unserved) {
  for (std::size_t u : idle_or_unserved)
    if (!s.wants.at(u).empty()) s.delay[u] += t_max;
  for (const Delivery& d : delivered) {
    if (!s.wants.at(d.user).contains(d.file))
      throw std::logic_error("apply_deliveries: user " + std::to_string(d.user) + " does not want file " +
                             std::to_string(d.file));
    if (!(d.rate > 0.0)) throw std::logic_error("apply_deliveries: non-positive rate");
    s.wants[d.user].erase(d.file);
    s.has[d.user].insert(d.file);
    s.recv_count[d.user] += 1;
    s.inv_rate_sum[d.user] += 1.0 / d.rate;
  }
}

inline constexpr double kUnboundedCompletion = std::numeric_limits<double>::infinity();

// B |W_0| / harmonic-mean rate + accumulated delay.
inline double anticipated_completion(const SideState& s, std::size_t u, double file_size_bits) {
  if (s.recv_count[u] == 0) return s.wants[u].empty() ? s.delay[u] : kUnboundedCompletion;
  const double harmonic = static_cast<double>(s.recv_count[u]) / s.inv_rate_sum[u];
  return file_size_bits * static_cast<double>(s.initial_wants_size[u]) / harmonic + s.delay[u];
}

inline double harmonic_mean_rate(const SideState& s, std::size_t u) {
  return s.recv_count[u] == 0 ? 0.0 : static_cast<double>(s.recv_count[u]) / s.inv_rate_sum[u];
}

// ---- scenario generation --------------------------------------------------

// Center first, the remaining eRRHs evenly spaced on a ring of half the cell radius.
inline std::vector<Point> default_errh_positions(std::size_t k, double cell_radius_m) {
  std::vector<Point> pos{{0.0, 0.0}};
  for (std::size_t j = 1; j < k; ++j) {
    const double a = 2.0 * std::numbers::pi * static_cast<double>(j - 1) / static_cast<double>(k - 1);
    pos.push_back({0.5 * cell_radius_m * std::cos(a), 0.5 * cell_radius_m * std::sin(a)});
  }
  return pos;
}

// Flat-top regular hexagon with circumradius r, centered at the origin.
inline bool inside_hexagon(Point p, double r) {
  const double ax = std::abs(p.x), ay = std::abs(p.y), s3 = std::sqrt(3.0);
  return ay <= 0.5 * s3 * r && s3 * ax + ay <= s3 * r;
}

inline Point sample_in_hexagon(double r, Rng& rng) {
  std::uniform_real_distribution<double> ux(-r, r), uy(-0.5 * std::sqrt(3.0) * r, 0.5 * std::sqrt(3.0) * r);
  for (;;) {
    Point p{ux(rng), uy(rng)};
    if (inside_hexagon(p, r)) return p;
  }
}

inline void compute_geometry(NetworkInstance& inst) {
  const std::size_t n = inst.num_users, k = inst.num_errhs;
  inst.errh_gains = Matrix(n, k);
  inst.d2d_gains = Matrix(n, n);
  inst.zones.assign(n, UserSet{});
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t e = 0; e < k; ++e)
      inst.errh_gains(u, e) = mean_gain(distance(inst.user_positions[u], inst.errh_positions[e]), inst.min_distance_m);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b) continue;
      const double d = distance(inst.user_positions[a], inst.user_positions[b]);
      inst.d2d_gains(a, b) = mean_gain(d, inst.min_distance_m);
      if (d <= inst.coverage_radius_m) inst.zones[a].insert(b);
    }
}

inline void redraw_user_positions(NetworkInstance& inst, Rng& rng) {
  for (Point& p : inst.user_positions) p = sample_in_hexagon(inst.cell_radius_m, rng);
  compute_geometry(inst);
}

inline std::vector<FileSet> generate_caches(std::size_t k, std::size_t num_files, std::size_t cache_size, Rng& rng) {
  std::vector<std::size_t> order(num_files);
  for (std::size_t f = 0; f < num_files; ++f) order[f] = f;
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<FileSet> caches(k);
  for (std::size_t j = 0; j < num_files; ++j) caches[j % k].insert(order[j]);
  const FileSet frame = FileSet::first_n(num_files);
  for (FileSet& c : caches) {
    std::vector<std::size_t> rest = (frame - c).to_vector();
    std::shuffle(rest.begin(), rest.end(), rng);
    for (std::size_t j = 0; c.size() < cache_size; ++j) c.insert(rest[j]);
  }
  return caches;
}

inline FileSet random_subset(std::size_t num_files, std::size_t size, Rng& rng) {
  std::vector<std::size_t> order(num_files);
  for (std::size_t f = 0; f < num_files; ++f) order[f] = f;
  std::shuffle(order.begin(), order.end(), rng);
  FileSet s;
  for (std::size_t j = 0; j < size; ++j) s.insert(order[j]);
  return s;
}

inline Scenario generate_scenario(const ScenarioConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  Rng rng(seed);
  Scenario sc;
  NetworkInstance& inst = sc.instance;
  inst.num_errhs = cfg.num_errhs;
  inst.num_users = cfg.num_users;
  inst.num_files = cfg.num_files;
  inst.file_size_bits = cfg.file_size_bits;
  inst.cache_ratio = cfg.cache_ratio;
  inst.rate_threshold_bps = cfg.rate_threshold * cfg.bandwidth_hz;
  inst.errh_max_power_w = dbm_per_hz_to_watts(cfg.errh_power_dbm_per_hz, cfg.bandwidth_hz);
  inst.user_power_w = dbm_per_hz_to_watts(cfg.user_power_dbm_per_hz, cfg.bandwidth_hz);
  inst.noise_w = dbm_per_hz_to_watts(cfg.noise_dbm_per_hz, cfg.bandwidth_hz);
  inst.bandwidth_hz = cfg.bandwidth_hz;
  inst.cell_radius_m = cfg.cell_radius_m;
  inst.coverage_radius_m = cfg.coverage_radius_m;
  inst.min_distance_m = cfg.min_distance_m;
  inst.fading = cfg.fading;
  inst.max_combination_size = cfg.max_combination_size;
  inst.errh_positions =
      cfg.errh_positions.empty() ? default_errh_positions(cfg.num_errhs, cfg.cell_radius_m) : cfg.errh_positions;

  inst.user_positions.resize(cfg.num_users);
  for (Point& p : inst.user_positions) p = sample_in_hexagon(cfg.cell_radius_m, rng);
  compute_geometry(inst);
  inst.caches = generate_caches(cfg.num_errhs, cfg.num_files, cfg.cache_size(), rng);

  const double f = static_cast<double>(cfg.num_files);
  const auto lo = static_cast<std::size_t>(std::ceil(cfg.has_fraction_min * f - 1e-9));
  const auto hi = std::max(lo, static_cast<std::size_t>(std::floor(cfg.has_fraction_max * f + 1e-9)));
  std::uniform_int_distribution<std::size_t> has_size(lo, hi);
  std::vector<FileSet> has(cfg.num_users);
  for (FileSet& h : has) h = random_subset(cfg.num_files, std::min(has_size(rng), cfg.num_files), rng);
  sc.side = SideState::from_has(std::move(has), cfg.num_files);
  return sc;
}

// Replay scenario: capacities in bits/s, zones read off the positive CSM entries.
struct FixedScenarioSpec {
  std::size_t num_errhs = 0;
  std::size_t num_users = 0;
  std::size_t num_files = 0;
  double file_size_bits = 1.0;
  double rate_threshold_bps = 0.0;
  std::vector<FileSet> caches;
  std::vector<FileSet> has;
  Matrix errh_capacity;  // N x K
  Matrix csm;            // N x N
  std::size_t max_combination_size = 4;
};

inline Scenario make_fixed_scenario(const FixedScenarioSpec& spec) {
  const std::size_t n = spec.num_users, k = spec.num_errhs, f = spec.num_files;
  if (k < 1) throw ConfigError("num_errhs", "must be >= 1");
  if (n < 1 || n > 64) throw ConfigError("num_users", "must be in [1, 64]");
  if (f < 1 || f > 64) throw ConfigError("num_files", "must be in [1, 64]");
  if (!(spec.file_size_bits > 0.0)) throw ConfigError("file_size_bits", "must be > 0");
  if (!(spec.rate_threshold_bps >= 0.0)) throw ConfigError("rate_threshold_bps", "must be >= 0");
  if (spec.caches.size() != k) throw ConfigError("fixed.caches", "need one cache per eRRH");
  if (spec.has.size() != n) throw ConfigError("fixed.has", "need one Has set per user");
  if (spec.errh_capacity.rows() != n || spec.errh_capacity.cols() != k)
    throw ConfigError("fixed.errh_capacity_bps", "must be num_users x num_errhs");
  if (spec.csm.rows() != n || spec.csm.cols() != n) throw ConfigError("fixed.csm_bps", "must be num_users x num_users");
  const FileSet frame = FileSet::first_n(f);
  FileSet covered;
  for (FileSet c : spec.caches) {
    if (!c.subset_of(frame)) throw ConfigError("fixed.caches", "file index out of range");
    covered |= c;
  }
  if (covered != frame) throw ConfigError("fixed.caches", "caches must jointly hold every file");
  for (std::size_t u = 0; u < n; ++u) {
    if (spec.csm(u, u) != 0.0) throw ConfigError("fixed.csm_bps", "diagonal must be zero");
    for (std::size_t v = 0; v < n; ++v)
      if (!(spec.csm(u, v) >= 0.0)) throw ConfigError("fixed.csm_bps", "entries must be >= 0");
    for (std::size_t e = 0; e < k; ++e)
      if (!(spec.errh_capacity(u, e) >= 0.0)) throw ConfigError("fixed.errh_capacity_bps", "entries must be >= 0");
  }

  Scenario sc;
  NetworkInstance& inst = sc.instance;
  inst.num_errhs = k;
  inst.num_users = n;
  inst.num_files = f;
  inst.file_size_bits = spec.file_size_bits;
  inst.cache_ratio = static_cast<double>(spec.caches.front().size()) / static_cast<double>(f);
  inst.rate_threshold_bps = spec.rate_threshold_bps;
  inst.errh_max_power_w = 1.0;
  inst.user_power_w = 1.0;
  inst.noise_w = 1.0;
  inst.bandwidth_hz = 1.0;
  inst.max_combination_size = spec.max_combination_size;
  inst.caches = spec.caches;
  inst.errh_positions.assign(k, Point{});
  inst.user_positions.assign(n, Point{});
  inst.errh_gains = Matrix(n, k, 0.0);
  inst.d2d_gains = Matrix(n, n, 0.0);
  inst.zones.assign(n, UserSet{});
  FixedRates fixed{spec.errh_capacity, CapacityStatusMatrix(n)};
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      fixed.csm(a, b) = spec.csm(a, b);
      if (spec.csm(a, b) > 0.0) inst.zones[a].insert(b);
    }
  inst.fixed = std::move(fixed);
  sc.side = SideState::from_has(spec.has, f);
  return sc;
}

}  // namespace fogran

#pragma once

#include <span>
#include <vector>

#include "fogran/channel.hpp"
#include "fogran/model.hpp"

namespace fogran {

// Channel state seen by the schedulers during one slot. Either a physical
// realization (path loss times fading) or the fixed capacities of a replay scenario.
class SlotChannel {
 public:
  SlotChannel(const NetworkInstance& inst, Matrix errh_gains, Matrix d2d_gains)
      : inst_(&inst), errh_gains_(std::move(errh_gains)), d2d_gains_(std::move(d2d_gains)) {
    max_powers_.assign(inst.num_errhs, inst.errh_max_power_w);
    at_max_ = Matrix(inst.num_users, inst.num_errhs);
    for (std::size_t u = 0; u < inst.num_users; ++u)
      for (std::size_t e = 0; e < inst.num_errhs; ++e)
        at_max_(u, e) = errh_rate(max_powers_, errh_gains_, e, u, inst.noise_w, inst.bandwidth_hz);
    csm_ = build_csm(inst.d2d_model(d2d_gains_), UserSet{});
  }

  // Fixed-rate replay channel.
  explicit SlotChannel(const NetworkInstance& inst) : inst_(&inst), fixed_(true) {
    max_powers_.assign(inst.num_errhs, inst.errh_max_power_w);
    at_max_ = inst.fixed->errh;
    csm_ = inst.fixed->csm;
  }

  // Draws one fading realization (unit-mean exponential power gain per link).
  static SlotChannel draw(const NetworkInstance& inst, Rng& rng) {
    if (inst.fixed) return SlotChannel(inst);
    Matrix eg = inst.errh_gains, dg = inst.d2d_gains;
    if (inst.fading) {
      std::exponential_distribution<double> chi(1.0);
      for (std::size_t u = 0; u < eg.rows(); ++u)
        for (std::size_t e = 0; e < eg.cols(); ++e) eg(u, e) *= chi(rng);
      for (std::size_t a = 0; a < dg.rows(); ++a)
        for (std::size_t b = 0; b < dg.cols(); ++b) dg(a, b) *= chi(rng);
    }
    return SlotChannel(inst, std::move(eg), std::move(dg));
  }

  const NetworkInstance& instance() const { return *inst_; }
  bool power_dependent() const { return !fixed_; }
  std::span<const double> max_powers() const { return max_powers_; }
  const Matrix& errh_gains() const { return errh_gains_; }
  const Matrix& d2d_gains() const { return d2d_gains_; }

  double errh_capacity(std::span<const double> powers, std::size_t e, std::size_t u) const {
    if (fixed_) return powers[e] > 0.0 ? at_max_(u, e) : 0.0;
    return errh_rate(powers, errh_gains_, e, u, inst_->noise_w, inst_->bandwidth_hz);
  }
  // Every eRRH at P_max.
  double errh_capacity_at_max(std::size_t e, std::size_t u) const { return at_max_(u, e); }
  const Matrix& capacities_at_max() const { return at_max_; }

  // Interference-free D2D capacities.
  const CapacityStatusMatrix& csm() const { return csm_; }

  double d2d_capacity(UserSet active, std::size_t k, std::size_t i) const {
    if (fixed_) return csm_(k, i);
    return d2d_rate(inst_->d2d_model(d2d_gains_), active, k, i);
  }

 private:
  const NetworkInstance* inst_;
  bool fixed_ = false;
  Matrix errh_gains_;
  Matrix d2d_gains_;
  std::vector<double> max_powers_;
  Matrix at_max_;
  CapacityStatusMatrix csm_;
};

}  // namespace fogran

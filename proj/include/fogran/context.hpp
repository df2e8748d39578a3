#pragma once

#include <span>
#include <string_view>

#include "fogran/graphs.hpp"
#include "fogran/model.hpp"
#include "fogran/power.hpp"
#include "fogran/slot_channel.hpp"

namespace fogran {

// Sees every graph a scheduler builds together with the vertices it picked.
class GraphObserver {
 public:
  virtual ~GraphObserver() = default;
  virtual void on_graph(std::string_view label, const GraphCore& g, std::span<const std::size_t> selection) = 0;
};

struct SchedulerContext {
  const NetworkInstance& instance;
  const SideState& side;
  const SlotChannel& channel;
  Rng& rng;
  GraphObserver* observer = nullptr;
  PowerOptions power_options = {};

  void observe(std::string_view label, const GraphCore& g, std::span<const std::size_t> sel) const {
    if (observer) observer->on_graph(label, g, sel);
  }
};

}  // namespace fogran

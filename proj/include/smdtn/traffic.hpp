#pragma once

#include <cstdint>
#include <vector>

#include "smdtn/mobility.hpp"
#include "smdtn/rng.hpp"
#include "smdtn/types.hpp"

namespace smdtn::traffic {

enum class DestMode { random, downline };

struct TrafficSpec {
  double first_at = 40.0;
  double interval = 82.8;
  int count_target = 521;
  std::uint64_t size = 0;
  std::vector<NodeId> sources;
  std::vector<NodeId> destinations;
  DestMode dest_mode = DestMode::random;
};

struct TrafficEvent {
  double time = 0.0;
  NodeId source{};
  NodeId destination{};
};

/// Events at first_at + k*interval while time < duration and fewer than
/// count_target have been emitted. Source and destination are drawn from the
/// pools; the destination is redrawn while it equals the source.
std::vector<TrafficEvent> schedule(const TrafficSpec& spec, double duration, RngStream& rng);

/// For downline traffic: a node on the source's route ahead of it in its
/// direction of travel, drawn uniformly. Falls back to `fallback` when no
/// such node exists.
NodeId pick_downline(const mobility::TrainState& source, const std::vector<mobility::TrainState>& nodes,
                     NodeId fallback, RngStream& rng);

}  // namespace smdtn::traffic

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "smdtn/geo.hpp"
#include "smdtn/rng.hpp"
#include "smdtn/types.hpp"

namespace smdtn::mobility {

inline constexpr double kMetresPerSecondPerMph = 0.44704;
inline constexpr double kLocalSpeedMps = 17.4 * kMetresPerSecondPerMph;    // 7.778496
inline constexpr double kExpressSpeedMps = 55.0 * kMetresPerSecondPerMph;  // 24.5872

enum class TrainKind { local, express, event };

struct MobilityParams {
  double local_speed = kLocalSpeedMps;
  double express_speed = kExpressSpeedMps;
  double dwell = 30.0;
};

struct TrainState {
  NodeId node_id{};
  std::string name;  // L<i>, E<i> or e<i>
  std::size_t route = 0;
  TrainKind kind = TrainKind::local;
  double offset = 0.0;
  int direction = 1;  // +1 towards the route's end, -1 towards its start
  double speed_max = 0.0;
  double dwell_remaining = 0.0;
  geo::Point position;
};

/// A stationary event node pinned to a point on a route.
struct EventPin {
  std::size_t route = 0;
  double offset = 0.0;
};

/// Locals L0.. get ids 0..n_local-1, expresses E0.. follow, then event nodes e0..
/// Trains are assigned to routes round-robin in id order.
std::vector<TrainState> place_initial(const geo::RouteGraph& graph, int n_local, int n_express,
                                      RngStream& rng, const MobilityParams& params = {},
                                      const std::vector<EventPin>& events = {});

bool stops_at(TrainKind kind, const geo::Station& station);

/// Advances one node by dt seconds: dwell first, then travel at speed_max,
/// clamping to the next station this kind serves and reversing at termini.
TrainState step(TrainState state, const geo::RouteGraph& graph, double dt, const MobilityParams& params);

}  // namespace smdtn::mobility

#include "smdtn/traffic.hpp"

namespace smdtn::traffic {

std::vector<TrafficEvent> schedule(const TrafficSpec& spec, double duration, RngStream& rng) {
  if (!(spec.interval > 0.0)) throw ConfigError("traffic interval must be > 0");
  if (spec.count_target < 0) throw ConfigError("traffic count target must be >= 0");
  std::vector<TrafficEvent> events;
  if (spec.count_target == 0) return events;
  if (spec.sources.empty() || spec.destinations.empty()) throw ConfigError("traffic pools must be non-empty");
  if (spec.sources.size() == 1 && spec.destinations.size() == 1 && spec.sources[0] == spec.destinations[0]) {
    throw ConfigError("traffic pools admit no pair with source != destination");
  }
  for (std::size_t k = 0; events.size() < static_cast<std::size_t>(spec.count_target); ++k) {
    // Multiply rather than accumulate so times carry no drift.
    const double t = spec.first_at + static_cast<double>(k) * spec.interval;
    if (t >= duration) break;
    TrafficEvent ev;
    ev.time = t;
    ev.source = spec.sources[rng.below(spec.sources.size())];
    do {
      ev.destination = spec.destinations[rng.below(spec.destinations.size())];
    } while (ev.destination == ev.source);
    events.push_back(ev);
  }
  return events;
}

NodeId pick_downline(const mobility::TrainState& source, const std::vector<mobility::TrainState>& nodes,
                     NodeId fallback, RngStream& rng) {
  std::vector<NodeId> ahead;
  for (const auto& n : nodes) {
    if (n.node_id == source.node_id || n.route != source.route) continue;
    const double delta = (n.offset - source.offset) * source.direction;
    if (delta > 0.0) ahead.push_back(n.node_id);
  }
  if (ahead.empty()) return fallback;
  return ahead[rng.below(ahead.size())];
}

}  // namespace smdtn::traffic

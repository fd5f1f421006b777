#include "smdtn/mobility.hpp"

#include <algorithm>

namespace smdtn::mobility {

namespace {

bool at_outer_terminus(const TrainState& s, double length) {
  return (s.direction > 0 && s.offset >= length) || (s.direction < 0 && s.offset <= 0.0);
}

// Offset of the next station strictly ahead that `kind` serves. Termini always qualify.
double next_stop(const geo::PolyRoute& route, const TrainState& s) {
  const auto& st = route.stations;
  if (s.direction > 0) {
    auto it = std::upper_bound(st.begin(), st.end(), s.offset,
                               [](double v, const geo::Station& x) { return v < x.offset; });
    for (; it != st.end(); ++it) {
      if (stops_at(s.kind, *it)) return it->offset;
    }
    return route.length();
  }
  auto it = std::lower_bound(st.begin(), st.end(), s.offset,
                             [](const geo::Station& x, double v) { return x.offset < v; });
  while (it != st.begin()) {
    --it;
    if (stops_at(s.kind, *it)) return it->offset;
  }
  return 0.0;
}

}  // namespace

bool stops_at(TrainKind kind, const geo::Station& station) {
  return kind != TrainKind::express || station.express_stop;
}

std::vector<TrainState> place_initial(const geo::RouteGraph& graph, int n_local, int n_express,
                                      RngStream& rng, const MobilityParams& params,
                                      const std::vector<EventPin>& events) {
  if (graph.routes.empty()) throw ConfigError("graph has no routes");
  if (n_local < 0 || n_express < 0) throw ConfigError("node counts must be non-negative");
  if (n_local + n_express == 0) throw ConfigError("empty scenario: no train nodes");

  std::vector<TrainState> nodes;
  const auto total = static_cast<std::size_t>(n_local + n_express);
  nodes.reserve(total + events.size());
  for (std::size_t i = 0; i < total; ++i) {
    TrainState s;
    s.node_id = node_id(i);
    const bool local = i < static_cast<std::size_t>(n_local);
    s.kind = local ? TrainKind::local : TrainKind::express;
    s.name = local ? "L" + std::to_string(i) : "E" + std::to_string(i - static_cast<std::size_t>(n_local));
    s.speed_max = local ? params.local_speed : params.express_speed;
    s.route = i % graph.routes.size();
    const auto& route = graph.routes[s.route];
    s.offset = rng.uniform(0.0, route.length());
    s.direction = rng.below(2) == 0 ? 1 : -1;
    s.position = route.point_at(s.offset);
    nodes.push_back(std::move(s));
  }
  for (std::size_t e = 0; e < events.size(); ++e) {
    const auto& pin = events[e];
    if (pin.route >= graph.routes.size()) throw ConfigError("event node on unknown route");
    const auto& route = graph.routes[pin.route];
    if (pin.offset < 0.0 || pin.offset > route.length()) throw ConfigError("event node offset outside route");
    TrainState s;
    s.node_id = node_id(total + e);
    s.name = "e" + std::to_string(e);
    s.kind = TrainKind::event;
    s.route = pin.route;
    s.offset = pin.offset;
    s.position = route.point_at(pin.offset);
    nodes.push_back(std::move(s));
  }
  return nodes;
}

TrainState step(TrainState s, const geo::RouteGraph& graph, double dt, const MobilityParams& params) {
  if (s.kind == TrainKind::event) return s;
  const auto& route = graph.routes[s.route];
  const double length = route.length();
  double remaining = dt;
  while (remaining > 0.0) {
    if (s.dwell_remaining > 0.0) {
      const double used = std::min(s.dwell_remaining, remaining);
      s.dwell_remaining -= used;
      remaining -= used;
      if (s.dwell_remaining <= 0.0) {
        s.dwell_remaining = 0.0;
        if (at_outer_terminus(s, length)) s.direction = -s.direction;
      }
      continue;
    }
    if (at_outer_terminus(s, length)) s.direction = -s.direction;
    if (s.speed_max <= 0.0) break;

    const double target = next_stop(route, s);
    const double gap = std::abs(target - s.offset);
    const double reach = s.speed_max * remaining;
    if (reach >= gap) {
      s.offset = target;
      remaining -= gap / s.speed_max;
      s.dwell_remaining = params.dwell;
      if (params.dwell <= 0.0 && at_outer_terminus(s, length)) s.direction = -s.direction;
    } else {
      s.offset += s.direction * reach;
      remaining = 0.0;
    }
  }
  s.offset = std::clamp(s.offset, 0.0, length);
  s.position = route.point_at(s.offset);
  return s;
}

}  // namespace smdtn::mobility

#include "smdtn/engine.hpp"

#include <cmath>

#include "smdtn/epidemic.hpp"
#include "smdtn/maxprop.hpp"
#include "smdtn/text_util.hpp"

namespace smdtn::engine {

namespace {

std::uint64_t tick_count(double duration, double tick) {
  const double t = duration / tick;
  const double r = std::round(t);
  const auto n = std::abs(t - r) < 1e-9 ? static_cast<std::uint64_t>(r) : static_cast<std::uint64_t>(std::ceil(t));
  return std::max<std::uint64_t>(n, 1);
}

std::vector<mobility::EventPin> resolve_events(const config::ScenarioConfig& c, const geo::RouteGraph& g) {
  std::vector<mobility::EventPin> pins;
  for (const auto& e : c.events) {
    std::size_t r = 0;
    while (r < g.routes.size() && g.routes[r].route_id != e.route_id) ++r;
    if (r == g.routes.size()) throw ConfigError("event node on unknown route '" + e.route_id + "'");
    pins.push_back({r, e.offset});
  }
  return pins;
}

std::vector<NodeId> resolve_pool(const std::vector<std::string>& names, const config::ScenarioConfig& c) {
  std::vector<NodeId> pool;
  if (names.empty()) {
    for (int i = 0; i < c.n_local + c.n_express; ++i) pool.push_back(node_id(static_cast<std::size_t>(i)));
    return pool;
  }
  for (const auto& n : names) {
    const auto id = resolve_node(n, c);
    if (!id) throw ConfigError("traffic pool names unknown node '" + n + "'");
    pool.push_back(*id);
  }
  return pool;
}

std::unique_ptr<routing::Router> make_router(const config::ScenarioConfig& c, NodeId id, std::size_t n_nodes) {
  const routing::RoutingLimits limits{c.hop_limit};
  if (c.router == config::RouterKind::maxprop) {
    return std::make_unique<maxprop::MaxPropRouter>(id, n_nodes, c.buffer_capacity, limits,
                                                    c.maxprop_threshold_hops);
  }
  return std::make_unique<epidemic::EpidemicRouter>(id, c.buffer_capacity, limits);
}

}  // namespace

std::optional<NodeId> resolve_node(std::string_view name, const config::ScenarioConfig& c) {
  if (name.size() < 2) return std::nullopt;
  const auto n = parse_int(name.substr(1));
  if (!n || *n < 0) return std::nullopt;
  const auto i = static_cast<std::size_t>(*n);
  const auto locals = static_cast<std::size_t>(c.n_local);
  const auto expresses = static_cast<std::size_t>(c.n_express);
  switch (name.front()) {
    case 'L':
      if (i < locals) return node_id(i);
      break;
    case 'E':
      if (i < expresses) return node_id(locals + i);
      break;
    case 'e':
      if (i < c.events.size()) return node_id(locals + expresses + i);
      break;
    default:
      break;
  }
  return std::nullopt;
}

Simulation::Simulation(const config::ScenarioConfig& config, const geo::RouteGraph& graph)
    : config_(config),
      graph_(graph),
      clock_{config.tick, 0},
      total_ticks_(tick_count(config.duration, config.tick)),
      links_(config.radio),
      metrics_(config::scenario_label(config), config.seed,
               static_cast<std::size_t>(config.n_local + config.n_express) + config.events.size()),
      traffic_rng_(rng_stream(config.seed, "traffic")) {
  config::validate(config_);
  auto placement = rng_stream(config_.seed, "placement");
  nodes_ = mobility::place_initial(graph_, config_.n_local, config_.n_express, placement, config_.movement,
                                   resolve_events(config_, graph_));
  positions_.reserve(nodes_.size());
  for (const auto& n : nodes_) positions_.push_back(n.position);
  for (const auto& n : nodes_) routers_.push_back(make_router(config_, n.node_id, nodes_.size()));

  traffic::TrafficSpec spec;
  spec.first_at = config_.traffic_first_at;
  spec.interval = config_.traffic_interval;
  spec.count_target = config_.traffic_count_target;
  spec.size = config_.msg_size;
  spec.sources = resolve_pool(config_.traffic_sources, config_);
  spec.destinations = resolve_pool(config_.traffic_destinations, config_);
  spec.dest_mode = config_.traffic_dest_mode;
  schedule_ = traffic::schedule(spec, config_.duration, traffic_rng_);
}

Simulation::~Simulation() = default;

void Simulation::generate_traffic(double now) {
  while (next_event_ < schedule_.size() && schedule_[next_event_].time <= now) {
    const auto& ev = schedule_[next_event_];
    routing::AlertMessage m;
    m.id = message_id(next_event_);
    m.source = ev.source;
    m.destination = ev.destination;
    if (config_.traffic_dest_mode == traffic::DestMode::downline) {
      m.destination = traffic::pick_downline(nodes_[index(ev.source)], nodes_, ev.destination, traffic_rng_);
    }
    m.size = config_.msg_size;
    m.created_at = ev.time;
    m.ttl = config_.ttl;
    m.hop_count = 0;
    ++next_event_;
    metrics_.on_created(m);
    auto& router = *routers_[index(m.source)];
    const auto r = router.originate(m);
    metrics_.on_evicted(r.victims.size());
  }
}

void Simulation::complete(const link::Transfer& transfer, double now) {
  routing::AlertMessage copy = transfer.message;
  copy.hop_count += 1;
  auto& receiver = *routers_[index(transfer.to)];
  const auto before = receiver.evictions();
  const auto d = receiver.on_received(copy, transfer.from, now);
  metrics_.on_evicted(receiver.evictions() - before);
  if (d == routing::Disposition::deliver) {
    metrics_.on_delivered(copy, now);
  } else if (d == routing::Disposition::store) {
    metrics_.on_held(copy.id, transfer.to);
  }
  routers_[index(transfer.from)]->on_transfer_done(transfer.to, copy, d, now);
}

void Simulation::run_link(NodeId from, NodeId to, double now, double budget) {
  const link::DirectedLink dl{from, to};
  auto& sender = *routers_[index(from)];
  auto& receiver = *routers_[index(to)];
  while (true) {
    if (links_.busy(dl)) {
      auto done = links_.advance_link(dl, budget);
      if (!done) return;
      complete(*done, now);
      continue;
    }
    if (budget <= 0.0) return;
    const std::pair versions{sender.version(), receiver.version()};
    if (const auto it = idle_.find(dl); it != idle_.end() && it->second == versions) return;
    const auto candidates = sender.select_for_transfer(receiver, now);
    if (candidates.empty()) {
      idle_[dl] = versions;
      return;
    }
    const MessageId id = candidates.front();
    sender.on_transfer_started(to, id);
    links_.start_transfer(from, to, *sender.buffer().find(id), now);
  }
}

void Simulation::step_once() {
  ++clock_.tick_index;
  const double now = clock_.now();
  const double dt = clock_.tick;

  generate_traffic(now);

  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    nodes_[i] = mobility::step(nodes_[i], graph_, dt, config_.movement);
    positions_[i] = nodes_[i].position;
  }

  const auto delta = links_.update_contacts(positions_, now);

  for (const auto& p : delta.downs) {
    routers_[index(p.a)]->connection_down(p.b);
    routers_[index(p.b)]->connection_down(p.a);
    idle_.erase({p.a, p.b});
    idle_.erase({p.b, p.a});
  }
  for (const auto& p : delta.ups) {
    auto& a = *routers_[index(p.a)];
    auto& b = *routers_[index(p.b)];
    a.connection_up(p.b, now);
    b.connection_up(p.a, now);
    a.exchange(b, now);
    b.exchange(a, now);
  }

  const double budget = links_.profile().bandwidth * dt;
  for (const auto& p : links_.live_pairs()) {
    run_link(p.a, p.b, now, budget);
    run_link(p.b, p.a, now, budget);
  }

  std::uint64_t expired = 0;
  for (auto& r : routers_) expired += r->sweep(now).size();
  metrics_.on_expired(expired);
}

metrics::ScenarioReport Simulation::run(const ProgressFn& progress) {
  while (clock_.tick_index < total_ticks_) {
    try {
      step_once();
    } catch (const Error& e) {
      throw SimulationError("tick " + std::to_string(clock_.tick_index) + ": " + e.what());
    }
    if (progress) progress(clock_.tick_index, total_ticks_);
  }
  links_.close_all(clock_.now());
  return metrics_.finalize(links_);
}

metrics::ScenarioReport run(const config::ScenarioConfig& config, const geo::RouteGraph& graph,
                            const ProgressFn& progress) {
  if (graph.routes.empty()) throw ConfigError("graph has no routes");
  Simulation sim(config, graph);
  return sim.run(progress);
}

}  // namespace smdtn::engine

#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "smdtn/config.hpp"
#include "smdtn/geo.hpp"
#include "smdtn/link.hpp"
#include "smdtn/metrics.hpp"
#include "smdtn/mobility.hpp"
#include "smdtn/routing.hpp"
#include "smdtn/traffic.hpp"

namespace smdtn::engine {

/// now = tick_index * tick, with the index counted in integers.
struct SimClock {
  double tick = 0.5;
  std::uint64_t tick_index = 0;

  double now() const { return static_cast<double>(tick_index) * tick; }
};

/// Called after each tick with (tick_index, total_ticks).
using ProgressFn = std::function<void(std::uint64_t, std::uint64_t)>;

/// One simulation run. Each tick runs, in order: traffic generation, mobility,
/// contact detection, router connection callbacks, transfers and deliveries,
/// expiry sweep, sampling.
class Simulation {
 public:
  Simulation(const config::ScenarioConfig& config, const geo::RouteGraph& graph);
  ~Simulation();
  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  /// Runs to completion. Module errors are rethrown as SimulationError
  /// prefixed with the tick index.
  metrics::ScenarioReport run(const ProgressFn& progress = {});

  /// Advances a single tick. Exposed for scripted tests.
  void step_once();

  const SimClock& clock() const { return clock_; }
  const std::vector<mobility::TrainState>& nodes() const { return nodes_; }
  const routing::Router& router(NodeId id) const { return *routers_[index(id)]; }
  const link::LinkLayer& links() const { return links_; }
  const std::vector<traffic::TrafficEvent>& schedule() const { return schedule_; }
  std::uint64_t total_ticks() const { return total_ticks_; }

 private:
  void generate_traffic(double now);
  void run_link(NodeId from, NodeId to, double now, double budget);
  void complete(const link::Transfer& transfer, double now);

  config::ScenarioConfig config_;
  const geo::RouteGraph& graph_;
  SimClock clock_;
  std::uint64_t total_ticks_ = 0;
  std::vector<mobility::TrainState> nodes_;
  std::vector<geo::Point> positions_;
  std::vector<std::unique_ptr<routing::Router>> routers_;
  link::LinkLayer links_;
  metrics::MetricsCollector metrics_;
  std::vector<traffic::TrafficEvent> schedule_;
  std::size_t next_event_ = 0;
  RngStream traffic_rng_;
  // Directed link -> (sender version, receiver version) at which selection came back empty.
  std::map<link::DirectedLink, std::pair<std::uint64_t, std::uint64_t>> idle_;
};

/// Convenience wrapper: validate, build a Simulation, run it.
metrics::ScenarioReport run(const config::ScenarioConfig& config, const geo::RouteGraph& graph,
                            const ProgressFn& progress = {});

/// Node id for a name such as L3, E0 or e1 given the configured counts.
std::optional<NodeId> resolve_node(std::string_view name, const config::ScenarioConfig& config);

}  // namespace smdtn::engine

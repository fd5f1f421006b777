#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "smdtn/link.hpp"
#include "smdtn/mobility.hpp"
#include "smdtn/traffic.hpp"

namespace smdtn::config {

enum class RouterKind { epidemic, maxprop };

/// A stationary event node: route id plus offset in metres.
struct EventNodeSpec {
  std::string route_id;
  double offset = 0.0;
};

struct ScenarioConfig {
  double duration = 43200.0;
  double tick = 0.5;
  std::uint64_t seed = 1;

  int n_local = 60;
  int n_express = 60;
  std::vector<EventNodeSpec> events;

  link::RadioProfile radio = link::RadioProfile::bluetooth();
  RouterKind router = RouterKind::epidemic;

  std::uint64_t msg_size = 500000;
  double ttl = 21600.0;
  int hop_limit = 40;
  std::uint64_t buffer_capacity = 50000000;
  int maxprop_threshold_hops = 3;

  double traffic_first_at = 40.0;
  double traffic_interval = 82.8;
  int traffic_count_target = 521;
  traffic::DestMode traffic_dest_mode = traffic::DestMode::random;
  // Node names (L0, E5, e0, ...); empty means every train node.
  std::vector<std::string> traffic_sources;
  std::vector<std::string> traffic_destinations;

  mobility::MobilityParams movement;
  double station_spacing = 800.0;
  int express_every_k = 3;

  // Resolved relative to the config file's directory.
  std::string graph_path;
};

/// Parses `key = value` lines (`#` comments). Keys not set keep the values of
/// `base`. Unknown keys and malformed values throw ConfigError naming the line.
ScenarioConfig parse_config(std::string_view text, const ScenarioConfig& base = {},
                            const std::filesystem::path& base_dir = {});
ScenarioConfig load_config(const std::filesystem::path& path);

/// Throws ConfigError if any invariant is violated.
void validate(const ScenarioConfig& config);

/// Short scenario label such as EP-BT or MP-WIFI.
std::string scenario_label(const ScenarioConfig& config);
std::string router_name(RouterKind kind);
std::optional<RouterKind> parse_router(std::string_view text);
std::optional<link::RadioProfile> profile_by_name(std::string_view name);

}  // namespace smdtn::config

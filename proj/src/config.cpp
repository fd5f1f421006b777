#include "smdtn/config.hpp"

#include <cmath>
#include <functional>
#include <map>

#include "smdtn/text_util.hpp"

namespace smdtn::config {

namespace {

struct Entry {
  std::string value;
  std::size_t line = 0;
};

std::string where(std::size_t line, std::string_view key) {
  return "config line " + std::to_string(line) + " (" + std::string(key) + "): ";
}

double as_double(const Entry& e, std::string_view key) {
  const auto v = parse_double(e.value);
  if (!v || !std::isfinite(*v)) throw ConfigError(where(e.line, key) + "expected a number, got '" + e.value + "'");
  return *v;
}

std::int64_t as_int(const Entry& e, std::string_view key) {
  const auto v = parse_int(e.value);
  if (!v) throw ConfigError(where(e.line, key) + "expected an integer, got '" + e.value + "'");
  return *v;
}

std::vector<std::string> as_list(const Entry& e) {
  std::vector<std::string> out;
  if (trim(e.value) == "all") return out;
  for (auto part : split(e.value, ',')) {
    part = trim(part);
    if (!part.empty()) out.emplace_back(part);
  }
  return out;
}

}  // namespace

std::string router_name(RouterKind kind) { return kind == RouterKind::maxprop ? "maxprop" : "epidemic"; }

std::optional<RouterKind> parse_router(std::string_view text) {
  if (text == "epidemic") return RouterKind::epidemic;
  if (text == "maxprop") return RouterKind::maxprop;
  return std::nullopt;
}

std::optional<link::RadioProfile> profile_by_name(std::string_view name) {
  if (name == "bluetooth") return link::RadioProfile::bluetooth();
  if (name == "wifi") return link::RadioProfile::wifi();
  return std::nullopt;
}

ScenarioConfig parse_config(std::string_view text, const ScenarioConfig& base,
                            const std::filesystem::path& base_dir) {
  std::map<std::string, Entry, std::less<>> entries;
  std::size_t line_no = 0;
  for (auto raw : split(text, '\n')) {
    ++line_no;
    std::string_view line = raw.substr(0, raw.find('#'));
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    entries[key] = Entry{std::string(trim(line.substr(eq + 1))), line_no};
  }

  ScenarioConfig c = base;
  using Setter = std::function<void(const Entry&, std::string_view)>;
  const std::map<std::string, Setter, std::less<>> setters = {
      {"sim.durationSec", [&](const Entry& e, auto k) { c.duration = as_double(e, k); }},
      {"sim.tickSec", [&](const Entry& e, auto k) { c.tick = as_double(e, k); }},
      {"sim.seed", [&](const Entry& e, auto k) {
         const auto v = as_int(e, k);
         if (v < 0) throw ConfigError(where(e.line, k) + "seed must be non-negative");
         c.seed = static_cast<std::uint64_t>(v);
       }},
      {"nodes.local", [&](const Entry& e, auto k) { c.n_local = static_cast<int>(as_int(e, k)); }},
      {"nodes.express", [&](const Entry& e, auto k) { c.n_express = static_cast<int>(as_int(e, k)); }},
      {"nodes.events", [&](const Entry& e, auto k) {
         c.events.clear();
         for (const auto& item : as_list(e)) {
           const auto at = item.rfind('@');
           const auto off = at == std::string::npos ? std::nullopt : parse_double(item.substr(at + 1));
           if (!off) throw ConfigError(where(e.line, k) + "expected route@offset, got '" + item + "'");
           c.events.push_back({item.substr(0, at), *off});
         }
       }},
      {"radio.profile", [&](const Entry& e, auto k) {
         const auto p = profile_by_name(e.value);
         if (!p) throw ConfigError(where(e.line, k) + "unknown radio profile '" + e.value + "'");
         c.radio = *p;
       }},
      {"radio.rangeM", [&](const Entry& e, auto k) { c.radio.range = as_double(e, k); }},
      {"radio.bandwidthBps", [&](const Entry& e, auto k) { c.radio.bandwidth = as_double(e, k); }},
      {"router", [&](const Entry& e, auto k) {
         const auto r = parse_router(e.value);
         if (!r) throw ConfigError(where(e.line, k) + "unknown router '" + e.value + "'");
         c.router = *r;
       }},
      {"msg.sizeBytes", [&](const Entry& e, auto k) {
         const auto v = as_int(e, k);
         if (v <= 0) throw ConfigError(where(e.line, k) + "message size must be > 0");
         c.msg_size = static_cast<std::uint64_t>(v);
       }},
      {"msg.ttlSec", [&](const Entry& e, auto k) { c.ttl = as_double(e, k); }},
      {"msg.hopLimit", [&](const Entry& e, auto k) { c.hop_limit = static_cast<int>(as_int(e, k)); }},
      {"buffer.capacityBytes", [&](const Entry& e, auto k) {
         const auto v = as_int(e, k);
         if (v <= 0) throw ConfigError(where(e.line, k) + "buffer capacity must be > 0");
         c.buffer_capacity = static_cast<std::uint64_t>(v);
       }},
      {"maxprop.thresholdHops", [&](const Entry& e, auto k) { c.maxprop_threshold_hops = static_cast<int>(as_int(e, k)); }},
      {"traffic.firstAtSec", [&](const Entry& e, auto k) { c.traffic_first_at = as_double(e, k); }},
      {"traffic.intervalSec", [&](const Entry& e, auto k) { c.traffic_interval = as_double(e, k); }},
      {"traffic.countTarget", [&](const Entry& e, auto k) { c.traffic_count_target = static_cast<int>(as_int(e, k)); }},
      {"traffic.destMode", [&](const Entry& e, auto k) {
         if (e.value == "random") {
           c.traffic_dest_mode = traffic::DestMode::random;
         } else if (e.value == "downline") {
           c.traffic_dest_mode = traffic::DestMode::downline;
         } else {
           throw ConfigError(where(e.line, k) + "expected random|downline, got '" + e.value + "'");
         }
       }},
      {"traffic.sources", [&](const Entry& e, auto) { c.traffic_sources = as_list(e); }},
      {"traffic.destinations", [&](const Entry& e, auto) { c.traffic_destinations = as_list(e); }},
      {"movement.localSpeedMps", [&](const Entry& e, auto k) { c.movement.local_speed = as_double(e, k); }},
      {"movement.expressSpeedMps", [&](const Entry& e, auto k) { c.movement.express_speed = as_double(e, k); }},
      {"movement.dwellSec", [&](const Entry& e, auto k) { c.movement.dwell = as_double(e, k); }},
      {"movement.stationSpacingM", [&](const Entry& e, auto k) { c.station_spacing = as_double(e, k); }},
      {"movement.expressEveryK", [&](const Entry& e, auto k) { c.express_every_k = static_cast<int>(as_int(e, k)); }},
      {"graph.path", [&](const Entry& e, auto) {
         std::filesystem::path p(e.value);
         if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
         c.graph_path = p.string();
       }},
  };

  for (const auto& [key, entry] : entries) {
    if (!setters.contains(key)) {
      throw ConfigError("config line " + std::to_string(entry.line) + ": unknown key '" + key + "'");
    }
  }
  // The profile sets both range and bandwidth; explicit overrides apply after it.
  if (const auto it = entries.find("radio.profile"); it != entries.end()) {
    setters.find("radio.profile")->second(it->second, it->first);
  }
  for (const auto& [key, entry] : entries) {
    if (key != "radio.profile") setters.find(key)->second(entry, key);
  }
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  return parse_config(text, ScenarioConfig{}, path.parent_path());
}

void validate(const ScenarioConfig& c) {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError("invalid config: " + what);
  };
  require(c.duration > 0.0, "sim.durationSec must be > 0");
  require(c.tick > 0.0 && c.tick <= 1.0, "sim.tickSec must be in (0, 1]");
  require(c.n_local >= 0 && c.n_express >= 0, "node counts must be >= 0");
  require(c.n_local + c.n_express > 0, "at least one train node is required");
  require(c.radio.range > 0.0, "radio.rangeM must be > 0");
  require(c.radio.bandwidth > 0.0, "radio.bandwidthBps must be > 0");
  require(c.msg_size > 0, "msg.sizeBytes must be > 0");
  require(c.msg_size <= c.buffer_capacity, "msg.sizeBytes must not exceed buffer.capacityBytes");
  require(c.ttl > 0.0, "msg.ttlSec must be > 0");
  require(c.hop_limit >= 1, "msg.hopLimit must be >= 1");
  require(c.maxprop_threshold_hops >= 0, "maxprop.thresholdHops must be >= 0");
  require(c.traffic_interval > 0.0, "traffic.intervalSec must be > 0");
  require(c.traffic_first_at >= 0.0, "traffic.firstAtSec must be >= 0");
  require(c.traffic_count_target >= 0, "traffic.countTarget must be >= 0");
  require(c.movement.local_speed > 0.0 && c.movement.express_speed > 0.0, "speeds must be > 0");
  require(c.movement.dwell >= 0.0, "movement.dwellSec must be >= 0");
  require(c.station_spacing > 0.0, "movement.stationSpacingM must be > 0");
  require(c.express_every_k >= 1, "movement.expressEveryK must be >= 1");
}

std::string scenario_label(const ScenarioConfig& c) {
  const std::string router = c.router == RouterKind::maxprop ? "MP" : "EP";
  std::string radio = c.radio.name == "bluetooth" ? "BT" : c.radio.name == "wifi" ? "WIFI" : c.radio.name;
  return router + "-" + radio;
}

}  // namespace smdtn::config

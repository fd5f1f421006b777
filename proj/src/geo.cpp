#include "smdtn/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "smdtn/text_util.hpp"
#include "smdtn/types.hpp"

namespace smdtn::geo {

namespace {

using nlohmann::json;

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr std::string_view kGraphMagic = "SMDTN-GRAPH";
constexpr int kGraphVersion = 1;

std::string feature_prefix(std::size_t index) { return "feature " + std::to_string(index) + ": "; }

std::vector<LonLat> read_line(const json& coords, std::size_t feature) {
  if (!coords.is_array()) throw DatasetError(feature_prefix(feature) + "coordinates must be an array");
  std::vector<LonLat> out;
  out.reserve(coords.size());
  for (const auto& pos : coords) {
    if (!pos.is_array() || pos.size() < 2 || !pos[0].is_number() || !pos[1].is_number()) {
      throw DatasetError(feature_prefix(feature) + "position must be [lon, lat]");
    }
    LonLat p{pos[0].get<double>(), pos[1].get<double>()};
    if (!std::isfinite(p.lon) || !std::isfinite(p.lat) || std::abs(p.lat) >= 85.0) {
      throw DatasetError(feature_prefix(feature) + "position out of range");
    }
    // Repeated vertices carry no arc length.
    if (!out.empty() && out.back().lon == p.lon && out.back().lat == p.lat) continue;
    out.push_back(p);
  }
  if (out.size() < 2) throw DatasetError(feature_prefix(feature) + "line needs at least 2 distinct vertices");
  return out;
}

std::string property_text(const json& value) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number_integer()) return std::to_string(value.get<std::int64_t>());
  if (value.is_number()) return format_double(value.get<double>());
  return {};
}

std::vector<Station> synthesize_stations(double length, const StationOptions& options) {
  std::vector<Station> stations;
  for (std::size_t i = 0;; ++i) {
    const double offset = static_cast<double>(i) * options.spacing;
    if (offset >= length) break;
    stations.push_back({offset, i % static_cast<std::size_t>(options.express_every_k) == 0});
  }
  stations.push_back({length, true});
  return stations;
}

std::vector<Station> override_stations(double length, std::vector<double> offsets, int every_k,
                                       const std::string& route_id) {
  for (double o : offsets) {
    if (!(o >= 0.0 && o <= length)) {
      throw DatasetError("station override for route " + route_id + " outside [0, " +
                         format_double(length) + "]: " + format_double(o));
    }
  }
  offsets.push_back(0.0);
  offsets.push_back(length);
  std::sort(offsets.begin(), offsets.end());
  offsets.erase(std::unique(offsets.begin(), offsets.end()), offsets.end());
  std::vector<Station> stations;
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    const bool terminus = i == 0 || i + 1 == offsets.size();
    stations.push_back({offsets[i], terminus || i % static_cast<std::size_t>(every_k) == 0});
  }
  return stations;
}

std::string_view next_line(std::string_view& text) {
  const auto pos = text.find('\n');
  std::string_view line = text.substr(0, pos);
  text = pos == std::string_view::npos ? std::string_view{} : text.substr(pos + 1);
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

}  // namespace

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

Point PolyRoute::point_at(double offset) const {
  if (offset <= 0.0) return vertices.front();
  if (offset >= length()) return vertices.back();
  // First vertex whose cumulative length exceeds offset.
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), offset);
  const auto hi = static_cast<std::size_t>(it - cumulative.begin());
  const std::size_t lo = hi - 1;
  const double t = (offset - cumulative[lo]) / (cumulative[hi] - cumulative[lo]);
  return {vertices[lo].x + t * (vertices[hi].x - vertices[lo].x),
          vertices[lo].y + t * (vertices[hi].y - vertices[lo].y)};
}

std::vector<GeoRoute> parse_lines(std::string_view geojson, const ParseOptions& options) {
  json doc;
  try {
    doc = json::parse(geojson.begin(), geojson.end());
  } catch (const json::parse_error& e) {
    throw ParseError("malformed JSON", e.byte);
  }
  if (!doc.is_object() || doc.value("type", "") != "FeatureCollection") {
    throw DatasetError("top-level object must be a FeatureCollection");
  }
  const auto features = doc.find("features");
  if (features == doc.end() || !features->is_array()) {
    throw DatasetError("FeatureCollection lacks a features array");
  }
  if (features->empty()) throw DatasetError("empty dataset: FeatureCollection has no features");

  std::vector<GeoRoute> routes;
  for (std::size_t i = 0; i < features->size(); ++i) {
    const json& feature = (*features)[i];
    const json* geometry = nullptr;
    if (feature.is_object()) {
      const auto g = feature.find("geometry");
      if (g != feature.end() && g->is_object()) geometry = &*g;
    }
    if (geometry == nullptr) throw DatasetError(feature_prefix(i) + "missing geometry");

    std::string name;
    RouteKind kind = RouteKind::local;
    if (const auto props = feature.find("properties"); props != feature.end() && props->is_object()) {
      if (const auto n = props->find(options.name_key); n != props->end()) name = property_text(*n);
      if (const auto k = props->find(options.kind_key); k != props->end() && k->is_string() &&
                                                        k->get<std::string>() == "express") {
        kind = RouteKind::express;
      }
    }
    if (name.empty()) throw DatasetError(feature_prefix(i) + "missing property '" + options.name_key + "'");

    const std::string type = geometry->value("type", "");
    const auto coords = geometry->find("coordinates");
    if (coords == geometry->end()) throw DatasetError(feature_prefix(i) + "geometry has no coordinates");
    if (type == "LineString") {
      routes.push_back({name, kind, read_line(*coords, i)});
    } else if (type == "MultiLineString") {
      if (!coords->is_array() || coords->empty()) {
        throw DatasetError(feature_prefix(i) + "MultiLineString has no parts");
      }
      for (std::size_t part = 0; part < coords->size(); ++part) {
        routes.push_back({name + "-" + std::to_string(part), kind, read_line((*coords)[part], i)});
      }
    } else {
      throw DatasetError(feature_prefix(i) + "unsupported geometry type '" + type + "'");
    }
  }
  return routes;
}

Point project(LonLat point, LonLat origin) {
  return {kEarthRadiusM * (point.lon - origin.lon) * kDegToRad * std::cos(origin.lat * kDegToRad),
          kEarthRadiusM * (point.lat - origin.lat) * kDegToRad};
}

LonLat unproject(Point point, LonLat origin) {
  return {origin.lon + point.x / (kEarthRadiusM * std::cos(origin.lat * kDegToRad)) / kDegToRad,
          origin.lat + point.y / kEarthRadiusM / kDegToRad};
}

RouteGraph build_graph(const std::vector<GeoRoute>& routes, const StationOptions& options,
                       const StationOverrides* overrides) {
  if (!(options.spacing > 0.0)) throw ConfigError("station spacing must be > 0");
  if (options.express_every_k < 1) throw ConfigError("express stop interval k must be >= 1");
  if (routes.empty()) throw DatasetError("empty dataset: no routes");

  RouteGraph graph;
  double lon_sum = 0.0;
  double lat_sum = 0.0;
  std::size_t count = 0;
  for (const auto& r : routes) {
    for (const auto& v : r.vertices) {
      lon_sum += v.lon;
      lat_sum += v.lat;
      ++count;
    }
  }
  graph.projection_origin = {lon_sum / static_cast<double>(count), lat_sum / static_cast<double>(count)};

  for (const auto& r : routes) {
    if (r.route_id.empty()) throw DatasetError("route with empty id");
    PolyRoute route;
    route.route_id = r.route_id;
    route.kind = r.kind;
    double acc = 0.0;
    for (const auto& v : r.vertices) {
      const Point p = project(v, graph.projection_origin);
      if (!route.vertices.empty()) {
        const double seg = distance(route.vertices.back(), p);
        if (seg <= 0.0) continue;
        acc += seg;
      }
      route.vertices.push_back(p);
      route.cumulative.push_back(acc);
    }
    if (route.vertices.size() < 2 || acc < 1.0) {
      throw DatasetError("degenerate route " + r.route_id + ": shorter than 1 m");
    }
    const StationOverrides::const_iterator ov =
        overrides != nullptr ? overrides->find(r.route_id) : StationOverrides::const_iterator{};
    if (overrides != nullptr && ov != overrides->end()) {
      route.stations = override_stations(acc, ov->second, options.express_every_k, r.route_id);
    } else {
      route.stations = synthesize_stations(acc, options);
    }
    graph.routes.push_back(std::move(route));
  }
  return graph;
}

StationOverrides parse_station_overrides(std::string_view text) {
  StationOverrides out;
  std::size_t consumed = 0;
  while (!text.empty()) {
    const std::size_t line_start = consumed;
    const std::string_view raw = next_line(text);
    consumed += raw.size() + 1;
    std::string_view line = raw.substr(0, raw.find('#'));
    line = trim(line);
    if (line.empty()) continue;
    std::istringstream in{std::string(line)};
    std::string route_id;
    in >> route_id;
    std::vector<double> offsets;
    for (std::string tok; in >> tok;) {
      const auto v = parse_double(tok);
      if (!v) throw ParseError("bad station offset '" + tok + "'", line_start);
      offsets.push_back(*v);
    }
    out[route_id] = std::move(offsets);
  }
  return out;
}

std::string serialize(const RouteGraph& graph) {
  std::ostringstream out;
  out << kGraphMagic << ' ' << kGraphVersion << '\n';
  out << "origin " << format_double(graph.projection_origin.lon) << ' '
      << format_double(graph.projection_origin.lat) << '\n';
  out << "routes " << graph.routes.size() << '\n';
  for (const auto& r : graph.routes) {
    out << "route " << (r.kind == RouteKind::express ? "express" : "local") << ' ' << r.vertices.size()
        << ' ' << r.stations.size() << '\n'
        << r.route_id << '\n';
    for (std::size_t i = 0; i < r.vertices.size(); ++i) {
      out << "v " << format_double(r.vertices[i].x) << ' ' << format_double(r.vertices[i].y) << ' '
          << format_double(r.cumulative[i]) << '\n';
    }
    for (const auto& s : r.stations) {
      out << "s " << format_double(s.offset) << ' ' << (s.express_stop ? 1 : 0) << '\n';
    }
  }
  return out.str();
}

bool looks_serialized(std::string_view text) { return text.starts_with(kGraphMagic); }

RouteGraph deserialize(std::string_view text) {
  const std::string_view full = text;
  auto fail = [&](const std::string& what) -> ParseError {
    return ParseError("graph file: " + what, static_cast<std::size_t>(full.size() - text.size()));
  };
  auto fields = [&](std::string_view line) {
    std::vector<std::string_view> out;
    for (auto f : split(line, ' ')) {
      if (!f.empty()) out.push_back(f);
    }
    return out;
  };
  auto number = [&](std::string_view tok) {
    const auto v = parse_double(tok);
    if (!v) throw fail("bad number '" + std::string(tok) + "'");
    return *v;
  };
  auto count = [&](std::string_view tok) {
    const auto v = parse_int(tok);
    if (!v || *v < 0) throw fail("bad count '" + std::string(tok) + "'");
    return static_cast<std::size_t>(*v);
  };

  auto header = fields(next_line(text));
  if (header.size() != 2 || header[0] != kGraphMagic) throw fail("missing header");
  if (count(header[1]) != kGraphVersion) throw fail("unsupported version " + std::string(header[1]));

  RouteGraph graph;
  auto origin = fields(next_line(text));
  if (origin.size() != 3 || origin[0] != "origin") throw fail("expected origin");
  graph.projection_origin = {number(origin[1]), number(origin[2])};
  auto nroutes = fields(next_line(text));
  if (nroutes.size() != 2 || nroutes[0] != "routes") throw fail("expected routes");
  const std::size_t n = count(nroutes[1]);
  for (std::size_t r = 0; r < n; ++r) {
    auto head = fields(next_line(text));
    if (head.size() != 4 || head[0] != "route") throw fail("expected route");
    PolyRoute route;
    route.kind = head[1] == "express" ? RouteKind::express : RouteKind::local;
    route.route_id = std::string(next_line(text));
    const std::size_t nv = count(head[2]);
    const std::size_t ns = count(head[3]);
    for (std::size_t i = 0; i < nv; ++i) {
      auto v = fields(next_line(text));
      if (v.size() != 4 || v[0] != "v") throw fail("expected vertex");
      route.vertices.push_back({number(v[1]), number(v[2])});
      route.cumulative.push_back(number(v[3]));
    }
    for (std::size_t i = 0; i < ns; ++i) {
      auto s = fields(next_line(text));
      if (s.size() != 3 || s[0] != "s") throw fail("expected station");
      route.stations.push_back({number(s[1]), s[2] == "1"});
    }
    if (route.vertices.size() < 2 || route.stations.size() < 2) throw fail("route " + route.route_id + " is incomplete");
    graph.routes.push_back(std::move(route));
  }
  if (graph.routes.empty()) throw fail("no routes");
  return graph;
}

RouteGraph load_graph(const std::string& path, const StationOptions& options,
                      const ParseOptions& parse_options) {
  const std::string text = read_file(path);
  if (looks_serialized(text)) return deserialize(text);
  return build_graph(parse_lines(text, parse_options), options);
}

}  // namespace smdtn::geo

#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "smdtn/types.hpp"

namespace smdtn::geo {

inline constexpr double kEarthRadiusM = 6371000.0;

struct LonLat {
  double lon = 0.0;
  double lat = 0.0;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

double distance(Point a, Point b);

enum class RouteKind { local, express };

/// One polyline of the source dataset, still in geographic coordinates.
struct GeoRoute {
  std::string route_id;
  RouteKind kind = RouteKind::local;
  std::vector<LonLat> vertices;
};

struct Station {
  double offset = 0.0;  // metres of arc length from the first vertex
  bool express_stop = false;
};

/// A route projected to planar metres with its stations.
struct PolyRoute {
  std::string route_id;
  RouteKind kind = RouteKind::local;
  std::vector<Point> vertices;
  std::vector<double> cumulative;  // cumulative[i] = arc length up to vertices[i]
  std::vector<Station> stations;   // ascending by offset; termini always present

  double length() const { return cumulative.back(); }
  /// Position at `offset` metres along the route, clamped to [0, length()].
  Point point_at(double offset) const;
};

struct RouteGraph {
  std::vector<PolyRoute> routes;
  LonLat projection_origin;
};

struct ParseOptions {
  std::string name_key = "name";
  // Optional property; the value "express" marks an express route.
  std::string kind_key = "kind";
};

/// Parses a GeoJSON FeatureCollection of LineString / MultiLineString features.
/// Throws ParseError (with byte offset) on malformed JSON and DatasetError on
/// rule violations.
std::vector<GeoRoute> parse_lines(std::string_view geojson, const ParseOptions& options = {});

/// Equirectangular projection about `origin`.
Point project(LonLat point, LonLat origin);
LonLat unproject(Point point, LonLat origin);

struct StationOptions {
  double spacing = 800.0;
  int express_every_k = 3;
};

/// route_id -> explicit station offsets (metres). Termini are added if absent.
using StationOverrides = std::map<std::string, std::vector<double>>;

RouteGraph build_graph(const std::vector<GeoRoute>& routes, const StationOptions& options = {},
                       const StationOverrides* overrides = nullptr);

/// Lines of `route_id offset offset ...`; `#` starts a comment.
StationOverrides parse_station_overrides(std::string_view text);

/// Versioned text serialization. Doubles are written in shortest round-trip form,
/// so deserialize(serialize(g)) reproduces g exactly.
std::string serialize(const RouteGraph& graph);
RouteGraph deserialize(std::string_view text);
bool looks_serialized(std::string_view text);

/// Reads either a serialized graph or a GeoJSON file (built with `options`).
RouteGraph load_graph(const std::string& path, const StationOptions& options = {},
                      const ParseOptions& parse_options = {});

}  // namespace smdtn::geo

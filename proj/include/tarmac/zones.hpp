#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tarmac/geo.hpp"
#include "tarmac/ingest.hpp"
#include "tarmac/zone_label.hpp"

namespace tarmac {

struct Zone {
    ZoneLabel label{};
    std::vector<LatLon> ring;  // open ring: closing vertex not repeated
};

// Ordered tarmac partition. Earlier zones win on overlaps and shared edges.
// Lat/lon are treated as planar coordinates (airport-scale extents).
struct ZoneMap {
    std::vector<Zone> zones;
    BoundingBox bbox{};
};

// JSON: {"zones":[{"label":"Apron","ring":[[lat,lon],...]}],
//        "bbox":[lat_min,lon_min,lat_max,lon_max]}
// Rings may repeat the first vertex at the end. Throws SchemaError for
// malformed documents or rings with fewer than 3 distinct vertices and
// GeometryError for self-intersecting rings or a degenerate bbox.
ZoneMap load_zone_map(std::string_view json_text);
std::string dump_zone_map(const ZoneMap& map);

bool ring_is_simple(const std::vector<LatLon>& ring);

// Even-odd containment with boundary points counted inside.
bool polygon_contains(const std::vector<LatLon>& ring, double lat, double lon);

std::optional<ZoneLabel> classify_point(double lat, double lon, const ZoneMap& map);
inline std::optional<ZoneLabel> classify_point(const GpsPoint& p, const ZoneMap& map) {
    return classify_point(p.lat, p.lon, map);
}

Trajectory label_trajectory(Trajectory t, const ZoneMap& map);

// Stylized single-airport layout (two runways, a terminal apron, a cargo
// parking area) used by the synthetic generator and as the CLI default.
ZoneMap default_zone_map();

}  // namespace tarmac

#include "tarmac/zones.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "tarmac/error.hpp"

namespace tarmac {

namespace {

using json = nlohmann::json;

// Planar coordinates: x = lon, y = lat.
double cross(LatLon o, LatLon a, LatLon b) {
    return (a.lon - o.lon) * (b.lat - o.lat) - (a.lat - o.lat) * (b.lon - o.lon);
}

int orientation(LatLon o, LatLon a, LatLon b) {
    const double c = cross(o, a, b);
    const double scale = std::max({std::abs(a.lon - o.lon), std::abs(a.lat - o.lat), std::abs(b.lon - o.lon),
                                   std::abs(b.lat - o.lat)});
    if (std::abs(c) <= 1e-14 * scale * scale) return 0;
    return c > 0 ? 1 : -1;
}

bool within_box(LatLon a, LatLon b, LatLon p) {
    return p.lon >= std::min(a.lon, b.lon) && p.lon <= std::max(a.lon, b.lon) && p.lat >= std::min(a.lat, b.lat) &&
           p.lat <= std::max(a.lat, b.lat);
}

bool segments_intersect(LatLon p1, LatLon p2, LatLon q1, LatLon q2) {
    const int o1 = orientation(p1, p2, q1);
    const int o2 = orientation(p1, p2, q2);
    const int o3 = orientation(q1, q2, p1);
    const int o4 = orientation(q1, q2, p2);
    if (o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0) return true;
    if (o1 == 0 && within_box(p1, p2, q1)) return true;
    if (o2 == 0 && within_box(p1, p2, q2)) return true;
    if (o3 == 0 && within_box(q1, q2, p1)) return true;
    if (o4 == 0 && within_box(q1, q2, p2)) return true;
    return false;
}

bool on_segment(LatLon a, LatLon b, double lat, double lon) {
    const LatLon p{lat, lon};
    return orientation(a, b, p) == 0 && within_box(a, b, p);
}

LatLon parse_vertex(const json& v) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw SchemaError("zone ring vertex must be [lat, lon]");
    return {v[0].get<double>(), v[1].get<double>()};
}

}  // namespace

bool ring_is_simple(const std::vector<LatLon>& ring) {
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) {
        const LatLon a1 = ring[i];
        const LatLon a2 = ring[(i + 1) % n];
        for (std::size_t j = i + 1; j < n; ++j) {
            // Adjacent edges share a vertex by construction.
            if (j == i + 1 || (i == 0 && j == n - 1)) continue;
            if (segments_intersect(a1, a2, ring[j], ring[(j + 1) % n])) return false;
        }
    }
    // A repeated vertex is a pinch point.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (ring[i].lat == ring[j].lat && ring[i].lon == ring[j].lon) return false;
    return true;
}

bool polygon_contains(const std::vector<LatLon>& ring, double lat, double lon) {
    const std::size_t n = ring.size();
    bool inside = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const LatLon a = ring[j];
        const LatLon b = ring[i];
        if (on_segment(a, b, lat, lon)) return true;
        if ((b.lat > lat) != (a.lat > lat)) {
            const double x = b.lon + (lat - b.lat) * (a.lon - b.lon) / (a.lat - b.lat);
            if (lon < x) inside = !inside;
        }
    }
    return inside;
}

ZoneMap load_zone_map(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("zone config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("zones") || !doc["zones"].is_array())
        throw SchemaError("zone config needs a \"zones\" array");
    if (!doc.contains("bbox") || !doc["bbox"].is_array() || doc["bbox"].size() != 4)
        throw SchemaError("zone config needs \"bbox\": [lat_min, lon_min, lat_max, lon_max]");

    ZoneMap map;
    const auto& b = doc["bbox"];
    for (const auto& v : b)
        if (!v.is_number()) throw SchemaError("bbox entries must be numbers");
    map.bbox = {b[0].get<double>(), b[1].get<double>(), b[2].get<double>(), b[3].get<double>()};
    if (map.bbox.degenerate()) throw GeometryError("zone config bbox has zero or negative extent");

    for (const auto& z : doc["zones"]) {
        if (!z.is_object() || !z.contains("label") || !z["label"].is_string() || !z.contains("ring") ||
            !z["ring"].is_array())
            throw SchemaError("each zone needs a string \"label\" and a \"ring\" array");
        const auto label = parse_zone_name(z["label"].get<std::string>());
        if (!label) throw SchemaError("unknown zone label '" + z["label"].get<std::string>() + "'");
        Zone zone{*label, {}};
        for (const auto& v : z["ring"]) zone.ring.push_back(parse_vertex(v));
        if (zone.ring.size() >= 2 && zone.ring.front().lat == zone.ring.back().lat &&
            zone.ring.front().lon == zone.ring.back().lon)
            zone.ring.pop_back();
        if (zone.ring.size() < 3) throw SchemaError("zone ring needs at least 3 distinct vertices");
        if (!ring_is_simple(zone.ring)) throw GeometryError("zone ring is self-intersecting");
        map.zones.push_back(std::move(zone));
    }
    return map;
}

std::string dump_zone_map(const ZoneMap& map) {
    json doc;
    doc["bbox"] = {map.bbox.lat_min, map.bbox.lon_min, map.bbox.lat_max, map.bbox.lon_max};
    doc["zones"] = json::array();
    for (const auto& z : map.zones) {
        json ring = json::array();
        for (const auto& v : z.ring) ring.push_back({v.lat, v.lon});
        ring.push_back({z.ring.front().lat, z.ring.front().lon});
        doc["zones"].push_back({{"label", std::string(zone_name(z.label))}, {"ring", ring}});
    }
    return doc.dump(2);
}

std::optional<ZoneLabel> classify_point(double lat, double lon, const ZoneMap& map) {
    for (const auto& z : map.zones)
        if (polygon_contains(z.ring, lat, lon)) return z.label;
    return std::nullopt;
}

Trajectory label_trajectory(Trajectory t, const ZoneMap& map) {
    t.zone_labels = ZoneSet{};
    for (const auto& p : t.points)
        if (auto z = classify_point(p, map)) t.zone_labels.insert(*z);
    return t;
}

ZoneMap default_zone_map() {
    auto rect = [](ZoneLabel label, double lat0, double lon0, double lat1, double lon1) {
        return Zone{label, {{lat0, lon0}, {lat0, lon1}, {lat1, lon1}, {lat1, lon0}}};
    };
    ZoneMap map;
    map.bbox = {33.9300, -118.4300, 33.9600, -118.3800};
    map.zones.push_back(rect(ZoneLabel::Apron, 33.9400, -118.4150, 33.9480, -118.3950));
    map.zones.push_back(rect(ZoneLabel::Parking, 33.9400, -118.4280, 33.9480, -118.4170));
    map.zones.push_back(rect(ZoneLabel::Runway, 33.9505, -118.4250, 33.9545, -118.3850));
    map.zones.push_back(rect(ZoneLabel::Runway, 33.9335, -118.4250, 33.9375, -118.3850));
    return map;
}

}  // namespace tarmac

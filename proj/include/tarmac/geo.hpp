#pragma once

#include <numbers>

namespace tarmac {

inline constexpr double kEarthRadiusMeters = 6'371'000.0;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct LatLon {
    double lat = 0.0;  // degrees
    double lon = 0.0;  // degrees
};

// Axis-aligned lat/lon rectangle, inclusive on all edges.
struct BoundingBox {
    double lat_min = 0.0;
    double lon_min = 0.0;
    double lat_max = 0.0;
    double lon_max = 0.0;

    bool contains(double lat, double lon) const {
        return lat >= lat_min && lat <= lat_max && lon >= lon_min && lon <= lon_max;
    }
    bool degenerate() const { return !(lat_max > lat_min) || !(lon_max > lon_min); }
};

double deg_to_rad(double deg);
double rad_to_deg(double rad);

// Wraps an angle into [0, 2π).
double wrap_bearing(double rad);

// Great-circle distance in meters (haversine, R = 6,371 km).
double haversine_m(LatLon a, LatLon b);

// Initial great-circle bearing from a to b: radians in [0, 2π), 0 = north,
// clockwise.
double initial_bearing(LatLon a, LatLon b);

// Point reached by travelling `distance_m` from `origin` along `bearing`
// (radians, compass convention).
LatLon destination_point(LatLon origin, double bearing, double distance_m);

}  // namespace tarmac

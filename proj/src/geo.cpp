#include "tarmac/geo.hpp"

#include <algorithm>
#include <cmath>

namespace tarmac {

double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

double wrap_bearing(double rad) {
    double r = std::fmod(rad, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    // fmod of a tiny negative value can round up to exactly 2π.
    if (r >= kTwoPi) r = 0.0;
    return r;
}

double haversine_m(LatLon a, LatLon b) {
    const double phi1 = deg_to_rad(a.lat);
    const double phi2 = deg_to_rad(b.lat);
    const double dphi = phi2 - phi1;
    const double dlambda = deg_to_rad(b.lon - a.lon);
    const double s1 = std::sin(dphi / 2.0);
    const double s2 = std::sin(dlambda / 2.0);
    const double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
    return 2.0 * kEarthRadiusMeters * std::asin(std::sqrt(std::clamp(h, 0.0, 1.0)));
}

double initial_bearing(LatLon a, LatLon b) {
    const double phi1 = deg_to_rad(a.lat);
    const double phi2 = deg_to_rad(b.lat);
    const double dlambda = deg_to_rad(b.lon - a.lon);
    const double y = std::sin(dlambda) * std::cos(phi2);
    const double x = std::cos(phi1) * std::sin(phi2) - std::sin(phi1) * std::cos(phi2) * std::cos(dlambda);
    return wrap_bearing(std::atan2(y, x));
}

LatLon destination_point(LatLon origin, double bearing, double distance_m) {
    const double delta = distance_m / kEarthRadiusMeters;
    const double phi1 = deg_to_rad(origin.lat);
    const double lambda1 = deg_to_rad(origin.lon);
    const double phi2 = std::asin(std::sin(phi1) * std::cos(delta) + std::cos(phi1) * std::sin(delta) * std::cos(bearing));
    const double lambda2 = lambda1 + std::atan2(std::sin(bearing) * std::sin(delta) * std::cos(phi1),
                                                std::cos(delta) - std::sin(phi1) * std::sin(phi2));
    return {rad_to_deg(phi2), rad_to_deg(lambda2)};
}

}  // namespace tarmac

#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "tarmac/geo.hpp"
#include "tarmac/time.hpp"
#include "tarmac/zone_label.hpp"

namespace tarmac {

// One surface-movement observation. Speed and heading may be NaN ("missing")
// straight off the wire; compute_speeds fills them in.
struct GpsPoint {
    std::string vehicle_id;
    Timestamp time{};
    double lat = 0.0;
    double lon = 0.0;
    double speed = 0.0;    // m/s
    double heading = 0.0;  // radians, [0, 2π), 0 = north, clockwise
};

bool is_valid(const GpsPoint& p);

struct Trajectory {
    std::string vehicle_id;
    std::int64_t date = 0;  // UTC civil day number
    std::vector<GpsPoint> points;
    ZoneSet zone_labels;
};

inline constexpr std::size_t kDelayComponents = 5;

// Delay cause order used everywhere: carrier, weather, national aviation
// system, security, late aircraft.
using DelayComponents = std::array<double, kDelayComponents>;

struct FlightRecord {
    std::string flight_id;
    std::string tail_number;
    std::string airline;
    std::string origin;
    std::string destination;

    Timestamp sched_gate_out{};
    Timestamp actual_gate_out{};
    Timestamp sched_gate_in{};
    Timestamp actual_gate_in{};
    Timestamp wheels_on{};
    double sched_elapsed_min = 0.0;
    double actual_elapsed_min = 0.0;

    DelayComponents arr_components{};
    double arr_delay = 0.0;  // actual - scheduled gate-in, minutes
    DelayComponents dep_components{};
    double dep_delay = 0.0;  // actual - scheduled gate-out, minutes
};

// Five departure delay causes followed by the total departure delay.
struct LabelVector {
    static constexpr std::size_t kSize = kDelayComponents + 1;
    static constexpr std::size_t kDepartureDelay = kDelayComponents;
    std::array<double, kSize> values{};

    double departure_delay() const { return values[kDepartureDelay]; }
    bool consistent(double tol = 1e-9) const;
};

LabelVector label_of(const FlightRecord& f);

struct WeatherRecord {
    Timestamp time{};
    double temperature_f = 0.0;
    double dew_point_f = 0.0;
    double humidity = 0.0;  // percent
    std::string wind_direction;
    double wind_speed_mph = 0.0;
    double wind_gust_mph = 0.0;
    double pressure = 0.0;
    std::string condition;
};

template <class T>
struct ParseResult {
    std::vector<T> rows;
    std::size_t skipped = 0;
};

// GPS CSV: vehicle_id,time_iso8601,lat,lon,speed_mps,heading_deg. Empty
// speed/heading cells parse as missing (NaN); anything else malformed or
// out of range skips the row.
ParseResult<GpsPoint> parse_gps(std::istream& in);
void write_gps(std::ostream& out, const std::vector<GpsPoint>& points);

ParseResult<FlightRecord> parse_schedule(std::istream& in);
void write_schedule(std::ostream& out, const std::vector<FlightRecord>& flights);

ParseResult<WeatherRecord> parse_weather(std::istream& in);
void write_weather(std::ostream& out, const std::vector<WeatherRecord>& records);

// Drops points outside `bbox`, then walks the rest keeping a point only if
// the implied speed from the last kept point is within v_max. Input must be
// time-ordered (ContractError otherwise).
std::vector<GpsPoint> clean_trajectory(const std::vector<GpsPoint>& points, double v_max, const BoundingBox& bbox);

struct SpeedResult {
    std::vector<GpsPoint> points;
    std::size_t duplicates_dropped = 0;
};

// Derives speed (haversine distance / dt) and initial bearing for every gap;
// point i takes the gap to i+1, the last point takes the gap from its
// predecessor. Fills only missing values unless `overwrite`. Repeated
// timestamps keep the first point.
SpeedResult compute_speeds(const std::vector<GpsPoint>& points, bool overwrite = false);

// Groups by (vehicle_id, UTC date) and splits on time gaps > gap_threshold.
// Output is ordered by vehicle_id, date, then start time.
std::vector<Trajectory> segment_trajectories(const std::vector<GpsPoint>& points, Seconds gap_threshold);

struct CleaningConfig {
    double v_max = 150.0;
    Seconds gap_threshold{1800};
    BoundingBox bbox{};
};

struct RestoreReport {
    std::size_t input_points = 0;
    std::size_t removed_by_cleaning = 0;
    std::size_t duplicates_dropped = 0;
    std::size_t retained_points = 0;
    std::size_t trajectories = 0;
    std::size_t vehicles = 0;
};

// Full GPS pipeline: group per vehicle, time-sort, clean, backfill speeds,
// segment.
std::vector<Trajectory> restore_trajectories(const std::vector<GpsPoint>& points, const CleaningConfig& config,
                                             RestoreReport* report = nullptr);

// For each departure, index into `arrivals` of the latest arrival of the
// same tail whose actual gate-in is strictly before the departure's
// scheduled gate-out.
std::vector<std::optional<std::size_t>> match_arrival_leg(const std::vector<FlightRecord>& departures,
                                                          const std::vector<FlightRecord>& arrivals);

}  // namespace tarmac

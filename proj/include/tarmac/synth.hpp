#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "tarmac/ingest.hpp"
#include "tarmac/time.hpp"
#include "tarmac/zones.hpp"

namespace tarmac {

struct DelayTargets {
    double mean = 16.0;
    double std = 44.7;
    double median = 1.0;
    double on_time_fraction = 0.494;
};

// Departure delay (minutes) =
//   noise_std · u + congestion_coefficient · max(0, C − congestion_capacity)
//   + propagation_factor · max(0, inbound arrival delay) + weather term,
// rounded to whole minutes and floored at min_delay. u is a shifted
// log-normal variate with unit variance; C counts aircraft trajectories with
// a GPS fix inside the flight's observation window
// [gate-out − gap − window, gate-out − gap). Trajectories are laid out on
// default_zone_map().
struct ScenarioConfig {
    std::uint64_t seed = 7;
    std::string start_date = "2023-01-02";  // a Monday
    int day_count = 7;
    int flights_per_day = 286;
    int airline_count = 8;
    int airport_count = 30;
    std::string airport = "LAX";

    double congestion_coefficient = 3.16;
    double congestion_capacity = 44.0;
    double noise_std = 28.76;
    double noise_sigma = 0.8;   // log-normal shape
    double noise_shift = 1.85;  // subtracted from the log-normal draw before scaling
    double propagation_factor = 0.5;
    double min_delay = -25.0;
    double weather_coefficient = 0.0;  // minutes added in rain or fog

    double inbound_fraction = 0.85;
    double extra_arrival_fraction = 0.15;
    double inbound_delay_median = 6.0;  // minutes
    double inbound_delay_sigma = 1.0;

    double background_rate = 12.0;  // movements per hour at profile weight 1
    double background_floor = 1.0;  // movements per hour, any time of day
    double load_sigma = 0.7;        // stationary std of the log load
    double load_tau_min = 180.0;

    int gps_interval_s = 20;
    double gps_jitter_m = 2.0;
    double outlier_fraction = 0.003;
    double duplicate_fraction = 0.001;
    bool emit_gps = true;

    int window_min = 60;
    int gap_min = 240;

    DelayTargets targets;

    // Throws ParameterError for non-positive counts, negative noise or
    // infeasible delay targets.
    void validate() const;
};

struct GroundTruth {
    std::string flight_id;
    Timestamp sched_gate_out{};
    std::int64_t congestion = 0;
    double congestion_term = 0.0;
    double propagation_term = 0.0;
    double noise_term = 0.0;
    double weather_term = 0.0;
    double dep_delay = 0.0;
};

struct Scenario {
    std::vector<FlightRecord> flights;  // departures then arrivals, each by scheduled time
    std::vector<GpsPoint> gps;
    std::vector<WeatherRecord> weather;
    std::vector<GroundTruth> truth;  // one per departure, departure order
};

Scenario generate_scenario(const ScenarioConfig& config);

struct ScenarioReport {
    std::size_t departures = 0;
    std::size_t arrivals = 0;
    std::size_t gps_points = 0;
    double mean_delay = 0.0;
    double median_delay = 0.0;
    double std_delay = 0.0;
    double on_time_fraction = 0.0;          // delay <= 0
    std::size_t component_mismatches = 0;   // flights whose components do not sum to the total
    std::size_t apron_points = 0;
    std::size_t runway_points = 0;
    std::size_t parking_points = 0;
    std::size_t unzoned_points = 0;
    double congestion_share = 0.0;  // var(congestion term) / var(delay)
};

ScenarioReport validate_scenario(const Scenario& s, const ZoneMap& map, const std::string& airport = "LAX");

void write_ground_truth(std::ostream& out, const std::vector<GroundTruth>& truth);

// gps.csv, schedule.csv, weather.csv, ground_truth.csv and zones.json.
void write_scenario(const std::filesystem::path& dir, const Scenario& s, const ZoneMap& map);

}  // namespace tarmac

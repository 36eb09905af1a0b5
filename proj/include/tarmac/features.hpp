#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tarmac/ingest.hpp"
#include "tarmac/time.hpp"
#include "tarmac/zones.hpp"

namespace tarmac {

// Observation window [prediction_time - observation_length, prediction_time)
// followed by the predicting gap [prediction_time, prediction_time + gap),
// which ends at the flight's scheduled gate-out.
struct TimeWindow {
    Timestamp prediction_time{};
    Minutes observation_length{60};
    Minutes gap{240};

    Timestamp window_start() const { return prediction_time - observation_length; }
    Timestamp window_end() const { return prediction_time; }
    Timestamp gap_end() const { return prediction_time + gap; }
    bool in_window(Timestamp t) const { return t >= window_start() && t < window_end(); }
    bool in_gap(Timestamp t) const { return t >= prediction_time && t < gap_end(); }
};

// Throws ParameterError when observation_length <= 0 or gap < 0.
TimeWindow select_window(const FlightRecord& flight, Minutes observation_length, Minutes gap);

struct AtcFeatures {
    static constexpr std::size_t kCount = 10;

    std::int64_t takeoff_plan = 0;
    std::int64_t takeoff_num = 0;
    std::int64_t landing_plan = 0;
    std::int64_t landing_num = 0;
    std::int64_t apron_point = 0;
    std::int64_t runway_point = 0;
    std::int64_t parking_point = 0;
    std::int64_t apron_traj = 0;
    std::int64_t runway_traj = 0;
    std::int64_t parking_traj = 0;

    std::array<std::int64_t, kCount> as_array() const;
    static const std::array<std::string_view, kCount>& names();
    friend bool operator==(const AtcFeatures&, const AtcFeatures&) = default;
};

struct AtcConfig {
    double takeoff_speed_threshold = 60.0;  // m/s
};

// Time-sorted view over labeled trajectories and the schedule, built once and
// queried per flight window.
class AtcIndex {
public:
    AtcIndex(const std::vector<Trajectory>& trajectories, const std::vector<FlightRecord>& departures,
             const std::vector<FlightRecord>& arrivals, const ZoneMap& map, AtcConfig config = {});

    AtcFeatures extract(const TimeWindow& window) const;

    // Points whose timestamps fall in [from, to), as indices into points().
    std::pair<std::size_t, std::size_t> point_range(Timestamp from, Timestamp to) const;

    struct IndexedPoint {
        Timestamp time;
        std::uint32_t trajectory;
        std::int8_t zone;  // -1 = outside every zone
        double lat;
        double lon;
        double speed;
        double heading;
    };
    const std::vector<IndexedPoint>& points() const { return points_; }

private:
    std::vector<IndexedPoint> points_;
    std::vector<Timestamp> takeoff_times_;  // last runway point of fast trajectories
    std::vector<Timestamp> sched_out_;
    std::vector<Timestamp> sched_in_;
    std::vector<Timestamp> wheels_on_;
    std::size_t trajectory_count_ = 0;
};

AtcFeatures extract_atc(const TimeWindow& window, const std::vector<Trajectory>& trajectories,
                        const std::vector<FlightRecord>& departures, const std::vector<FlightRecord>& arrivals,
                        const ZoneMap& map, AtcConfig config = {});

struct WindBearing {
    double radians = 0.0;
    bool calm_or_variable = false;
};

// 16-point compass abbreviations ("N", "NNE", ... "NNW"), plus "CALM" and
// "VAR"; throws EncodingError for anything else.
WindBearing wind_to_radians(std::string_view direction);

// Numeric weather fields, wind bearing, calm/variable flag and a one-hot
// condition block over a vocabulary fixed from training data.
class WeatherEncoder {
public:
    static constexpr std::size_t kNumericCount = 8;

    explicit WeatherEncoder(std::vector<std::string> condition_vocab);
    static WeatherEncoder fit(const std::vector<WeatherRecord>& records);

    std::vector<double> encode(const WeatherRecord& w) const;
    std::size_t dimension() const { return kNumericCount + vocab_.size(); }
    std::vector<std::string> column_names() const;
    const std::vector<std::string>& vocab() const { return vocab_; }

private:
    std::vector<std::string> vocab_;
};

std::vector<double> encode_weather(const WeatherRecord& w, const std::vector<std::string>& condition_vocab);

// Most recent record at or before `t`; the earliest record when `t`
// precedes all of them. `records` must be time-sorted and non-empty.
const WeatherRecord& weather_at(const std::vector<WeatherRecord>& records, Timestamp t);

struct WeatherFeatures {
    std::vector<double> encoded;         // pre-PCA
    std::vector<double> pca_components;  // empty unless a PCA model was applied
};

// Reference block: the flight's own schedule attributes plus the matched
// inbound leg's Table-1 attributes; timestamps become minutes since UTC
// midnight, with one day-of-week index for the scheduled gate-out.
inline constexpr std::size_t kReferenceDim = 15;
const std::array<std::string_view, kReferenceDim>& reference_names();

struct FeatureVector {
    std::vector<double> values;
};

// Layout: reference (15) | ATC (10) | weather (encoded or PCA) | missing_inbound.
FeatureVector build_feature_vector(const FlightRecord& flight, const FlightRecord* inbound, const AtcFeatures& atc,
                                   const WeatherFeatures& weather, bool use_pca);

std::vector<std::string> feature_names(std::span<const std::string> weather_names);

// Column positions of each block inside a FeatureVector.
struct FeatureLayout {
    std::size_t weather_dim = 0;
    std::size_t reference_begin() const { return 0; }
    std::size_t atc_begin() const { return kReferenceDim; }
    std::size_t weather_begin() const { return kReferenceDim + AtcFeatures::kCount; }
    std::size_t missing_flag() const { return weather_begin() + weather_dim; }
    std::size_t width() const { return missing_flag() + 1; }
};

}  // namespace tarmac

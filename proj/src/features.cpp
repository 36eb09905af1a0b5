#include "tarmac/features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "tarmac/error.hpp"

namespace tarmac {

TimeWindow select_window(const FlightRecord& flight, Minutes observation_length, Minutes gap) {
    if (observation_length.count() <= 0) throw ParameterError("observation window length must be positive");
    if (gap.count() < 0) throw ParameterError("predicting gap must be nonnegative");
    TimeWindow w;
    w.prediction_time = flight.sched_gate_out - gap;
    w.observation_length = observation_length;
    w.gap = gap;
    return w;
}

std::array<std::int64_t, AtcFeatures::kCount> AtcFeatures::as_array() const {
    return {takeoff_plan, takeoff_num, landing_plan, landing_num, apron_point,
            runway_point, parking_point, apron_traj, runway_traj, parking_traj};
}

const std::array<std::string_view, AtcFeatures::kCount>& AtcFeatures::names() {
    static const std::array<std::string_view, kCount> n{"takeoff_plan", "takeoff_num",   "landing_plan", "landing_num",
                                                        "apron_point",  "runway_point",  "parking_point", "apron_traj",
                                                        "runway_traj",  "parking_traj"};
    return n;
}

namespace {

std::int64_t count_in(const std::vector<Timestamp>& sorted, Timestamp from, Timestamp to) {
    const auto lo = std::lower_bound(sorted.begin(), sorted.end(), from);
    const auto hi = std::lower_bound(sorted.begin(), sorted.end(), to);
    return hi - lo;
}

}  // namespace

AtcIndex::AtcIndex(const std::vector<Trajectory>& trajectories, const std::vector<FlightRecord>& departures,
                   const std::vector<FlightRecord>& arrivals, const ZoneMap& map, AtcConfig config)
    : trajectory_count_(trajectories.size()) {
    for (std::uint32_t t = 0; t < trajectories.size(); ++t) {
        const Trajectory& traj = trajectories[t];
        const GpsPoint* last_runway = nullptr;
        for (const auto& p : traj.points) {
            const auto zone = classify_point(p, map);
            points_.push_back({p.time, t, zone ? static_cast<std::int8_t>(*zone) : std::int8_t{-1}, p.lat, p.lon,
                               p.speed, p.heading});
            if (zone == ZoneLabel::Runway) last_runway = &p;
        }
        if (last_runway != nullptr && last_runway->speed >= config.takeoff_speed_threshold)
            takeoff_times_.push_back(last_runway->time);
    }
    std::stable_sort(points_.begin(), points_.end(),
                     [](const IndexedPoint& a, const IndexedPoint& b) { return a.time < b.time; });
    std::sort(takeoff_times_.begin(), takeoff_times_.end());
    for (const auto& f : departures) sched_out_.push_back(f.sched_gate_out);
    for (const auto& f : arrivals) {
        sched_in_.push_back(f.sched_gate_in);
        wheels_on_.push_back(f.wheels_on);
    }
    std::sort(sched_out_.begin(), sched_out_.end());
    std::sort(sched_in_.begin(), sched_in_.end());
    std::sort(wheels_on_.begin(), wheels_on_.end());
}

std::pair<std::size_t, std::size_t> AtcIndex::point_range(Timestamp from, Timestamp to) const {
    auto cmp = [](const IndexedPoint& p, Timestamp t) { return p.time < t; };
    const auto lo = std::lower_bound(points_.begin(), points_.end(), from, cmp);
    const auto hi = std::lower_bound(points_.begin(), points_.end(), to, cmp);
    return {static_cast<std::size_t>(lo - points_.begin()), static_cast<std::size_t>(hi - points_.begin())};
}

AtcFeatures AtcIndex::extract(const TimeWindow& window) const {
    AtcFeatures f;
    f.takeoff_plan = count_in(sched_out_, window.prediction_time, window.gap_end());
    f.landing_plan = count_in(sched_in_, window.prediction_time, window.gap_end());
    f.landing_num = count_in(wheels_on_, window.window_start(), window.window_end());
    f.takeoff_num = count_in(takeoff_times_, window.window_start(), window.window_end());

    const auto [lo, hi] = point_range(window.window_start(), window.window_end());
    std::array<std::int64_t, 3> points{};
    std::array<std::vector<std::uint32_t>, 3> touched;
    for (std::size_t i = lo; i < hi; ++i) {
        const auto& p = points_[i];
        if (p.zone < 0) continue;
        ++points[p.zone];
        touched[p.zone].push_back(p.trajectory);
    }
    std::array<std::int64_t, 3> trajs{};
    for (int z = 0; z < 3; ++z) {
        auto& v = touched[z];
        std::sort(v.begin(), v.end());
        trajs[z] = std::unique(v.begin(), v.end()) - v.begin();
    }
    constexpr auto A = static_cast<int>(ZoneLabel::Apron);
    constexpr auto R = static_cast<int>(ZoneLabel::Runway);
    constexpr auto P = static_cast<int>(ZoneLabel::Parking);
    f.apron_point = points[A];
    f.runway_point = points[R];
    f.parking_point = points[P];
    f.apron_traj = trajs[A];
    f.runway_traj = trajs[R];
    f.parking_traj = trajs[P];
    return f;
}

AtcFeatures extract_atc(const TimeWindow& window, const std::vector<Trajectory>& trajectories,
                        const std::vector<FlightRecord>& departures, const std::vector<FlightRecord>& arrivals,
                        const ZoneMap& map, AtcConfig config) {
    return AtcIndex(trajectories, departures, arrivals, map, config).extract(window);
}

// --- weather ----------------------------------------------------------------

WindBearing wind_to_radians(std::string_view direction) {
    static constexpr std::array<std::string_view, 16> kPoints{"N", "NNE", "NE", "ENE", "E", "ESE", "SE", "SSE",
                                                              "S", "SSW", "SW", "WSW", "W", "WNW", "NW", "NNW"};
    if (direction == "CALM" || direction == "VAR") return {0.0, true};
    for (std::size_t i = 0; i < kPoints.size(); ++i)
        if (kPoints[i] == direction) return {static_cast<double>(i) * std::numbers::pi / 8.0, false};
    throw EncodingError("unknown wind direction '" + std::string(direction) + "'");
}

WeatherEncoder::WeatherEncoder(std::vector<std::string> condition_vocab) : vocab_(std::move(condition_vocab)) {}

WeatherEncoder WeatherEncoder::fit(const std::vector<WeatherRecord>& records) {
    std::set<std::string> seen;
    for (const auto& r : records) seen.insert(r.condition);
    return WeatherEncoder({seen.begin(), seen.end()});
}

std::vector<double> WeatherEncoder::encode(const WeatherRecord& w) const {
    const WindBearing wind = wind_to_radians(w.wind_direction);
    std::vector<double> v{w.temperature_f, w.dew_point_f, w.humidity,       w.wind_speed_mph,
                          w.wind_gust_mph, w.pressure,    wind.radians,     wind.calm_or_variable ? 1.0 : 0.0};
    v.resize(dimension(), 0.0);
    for (std::size_t i = 0; i < vocab_.size(); ++i)
        if (vocab_[i] == w.condition) v[kNumericCount + i] = 1.0;
    return v;
}

std::vector<std::string> WeatherEncoder::column_names() const {
    std::vector<std::string> names{"w_temperature_f", "w_dew_point_f",   "w_humidity_pct", "w_wind_speed_mph",
                                   "w_wind_gust_mph", "w_pressure_in",   "w_wind_dir_rad", "w_wind_calm_var"};
    for (const auto& c : vocab_) {
        std::string n = "w_cond_" + c;
        std::replace(n.begin(), n.end(), ' ', '_');
        names.push_back(n);
    }
    return names;
}

std::vector<double> encode_weather(const WeatherRecord& w, const std::vector<std::string>& condition_vocab) {
    return WeatherEncoder(condition_vocab).encode(w);
}

const WeatherRecord& weather_at(const std::vector<WeatherRecord>& records, Timestamp t) {
    require(!records.empty(), "weather_at: no weather records");
    const auto it = std::upper_bound(records.begin(), records.end(), t,
                                     [](Timestamp v, const WeatherRecord& r) { return v < r.time; });
    if (it == records.begin()) return records.front();
    return *std::prev(it);
}

// --- assembly ---------------------------------------------------------------

const std::array<std::string_view, kReferenceDim>& reference_names() {
    static const std::array<std::string_view, kReferenceDim> n{
        "sched_out_minute",      "sched_out_weekday",     "sched_elapsed_min",   "sched_in_minute",
        "in_sched_in_minute",    "in_actual_in_minute",   "in_sched_elapsed_min", "in_actual_elapsed_min",
        "in_wheels_on_minute",   "in_delay_carrier",      "in_delay_weather",    "in_delay_nas",
        "in_delay_security",     "in_delay_late_aircraft", "in_arr_delay"};
    return n;
}

FeatureVector build_feature_vector(const FlightRecord& flight, const FlightRecord* inbound, const AtcFeatures& atc,
                                   const WeatherFeatures& weather, bool use_pca) {
    FeatureVector fv;
    auto& v = fv.values;
    v.reserve(kReferenceDim + AtcFeatures::kCount + weather.encoded.size() + 1);
    v.push_back(minutes_since_midnight(flight.sched_gate_out));
    v.push_back(static_cast<double>(day_of_week(flight.sched_gate_out)));
    v.push_back(flight.sched_elapsed_min);
    v.push_back(minutes_since_midnight(flight.sched_gate_in));
    if (inbound != nullptr) {
        v.push_back(minutes_since_midnight(inbound->sched_gate_in));
        v.push_back(minutes_since_midnight(inbound->actual_gate_in));
        v.push_back(inbound->sched_elapsed_min);
        v.push_back(inbound->actual_elapsed_min);
        v.push_back(minutes_since_midnight(inbound->wheels_on));
        for (double c : inbound->arr_components) v.push_back(c);
        v.push_back(inbound->arr_delay);
    } else {
        v.resize(kReferenceDim, 0.0);
    }
    for (auto c : atc.as_array()) v.push_back(static_cast<double>(c));
    if (use_pca) {
        require(!weather.pca_components.empty(), "build_feature_vector: PCA requested but no components supplied");
        v.insert(v.end(), weather.pca_components.begin(), weather.pca_components.end());
    } else {
        v.insert(v.end(), weather.encoded.begin(), weather.encoded.end());
    }
    v.push_back(inbound == nullptr ? 1.0 : 0.0);
    for (double x : v)
        if (!std::isfinite(x)) throw ContractError("build_feature_vector: non-finite feature value");
    return fv;
}

std::vector<std::string> feature_names(std::span<const std::string> weather_names) {
    std::vector<std::string> names;
    for (auto n : reference_names()) names.emplace_back(n);
    for (auto n : AtcFeatures::names()) names.emplace_back(n);
    names.insert(names.end(), weather_names.begin(), weather_names.end());
    names.emplace_back("missing_inbound");
    return names;
}

}  // namespace tarmac

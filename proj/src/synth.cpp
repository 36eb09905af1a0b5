#include "tarmac/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>

#include "tarmac/csv.hpp"
#include "tarmac/error.hpp"
#include "tarmac/geo.hpp"
#include "tarmac/rng.hpp"

namespace tarmac {

namespace {

using namespace std::chrono;

// Hourly departure weights: morning bank, midday plateau, evening bank and
// nothing between 03:00 and 05:00.
constexpr std::array<double, 24> kDepartureProfile{0.35, 0.2, 0.08, 0.0, 0.0, 0.45, 1.3, 1.7, 1.6, 1.35, 1.2, 1.2,
                                                   1.3,  1.3, 1.2,  1.2, 1.3, 1.45, 1.4, 1.2, 1.0, 0.85, 0.65, 0.5};
constexpr std::array<double, 24> kArrivalProfile{0.6, 0.3, 0.1, 0.0, 0.0, 0.3, 0.9, 1.2, 1.3, 1.3, 1.2, 1.2,
                                                 1.3, 1.3, 1.3, 1.3, 1.35, 1.4, 1.4, 1.3, 1.2, 1.1, 1.0, 0.8};

constexpr std::array<const char*, 12> kAirlines{"AA", "DL", "UA", "WN", "AS", "B6", "NK", "F9", "HA", "G4", "SY", "MX"};
constexpr std::array<const char*, 40> kAirports{
    "SFO", "SEA", "JFK", "ORD", "DFW", "DEN", "ATL", "PHX", "LAS", "SLC", "BOS", "IAD", "MIA", "MSP",
    "DTW", "PDX", "SAN", "SJC", "OAK", "SMF", "AUS", "IAH", "MCO", "EWR", "CLT", "PHL", "BNA", "HNL",
    "OGG", "ABQ", "TUS", "BOI", "RNO", "MCI", "STL", "MSY", "RDU", "BWI", "DCA", "ANC"};

// Layout on the default zone map.
constexpr double kRunwayLat[2] = {33.9525, 33.9355};
constexpr double kTaxiwayLat[2] = {33.9492, 33.9388};
constexpr double kThresholdLon = -118.4235;
constexpr double kTouchdownLon = -118.3895;

const double kMetersPerDegLat = kEarthRadiusMeters * std::numbers::pi / 180.0;
const double kMetersPerDegLon = kMetersPerDegLat * std::cos(deg_to_rad(33.945));

struct Leg {
    LatLon a;
    LatLon b;
    double v0 = 0.0;
    double v1 = 0.0;
    double hold_s = 0.0;  // > 0: stationary at `a`
};

struct Sample {
    std::int64_t t;
    double lat;
    double lon;
    double speed;
    double heading;
};

struct Track {
    std::string vehicle_id;
    std::vector<Sample> samples;
};

double leg_length(const Leg& l) {
    const double dy = (l.b.lat - l.a.lat) * kMetersPerDegLat;
    const double dx = (l.b.lon - l.a.lon) * kMetersPerDegLon;
    return std::hypot(dx, dy);
}

double leg_duration(const Leg& l) { return l.hold_s > 0.0 ? l.hold_s : 2.0 * leg_length(l) / (l.v0 + l.v1); }

double path_duration(const std::vector<Leg>& legs) {
    double s = 0.0;
    for (const auto& l : legs) s += leg_duration(l);
    return s;
}

Sample evaluate(const std::vector<Leg>& legs, double tau) {
    double heading = 0.0;
    for (std::size_t i = 0; i < legs.size(); ++i) {
        const Leg& l = legs[i];
        const double dur = leg_duration(l);
        if (l.hold_s <= 0.0) heading = initial_bearing(l.a, l.b);
        if (tau > dur && i + 1 < legs.size()) {
            tau -= dur;
            continue;
        }
        tau = std::min(tau, dur);
        if (l.hold_s > 0.0) return {0, l.a.lat, l.a.lon, 0.0, heading};
        const double acc = (l.v1 - l.v0) / dur;
        const double s = l.v0 * tau + 0.5 * acc * tau * tau;
        const double f = std::clamp(s / leg_length(l), 0.0, 1.0);
        return {0, l.a.lat + f * (l.b.lat - l.a.lat), l.a.lon + f * (l.b.lon - l.a.lon), l.v0 + acc * tau, heading};
    }
    return {};
}

// Fixes every `interval` seconds from `start`, plus one at the end of the path.
std::vector<Sample> render(const std::vector<Leg>& legs, std::int64_t start, int interval) {
    const double total = path_duration(legs);
    const auto end = start + static_cast<std::int64_t>(std::ceil(total));
    std::vector<Sample> out;
    for (std::int64_t t = start; t < end; t += interval) {
        Sample s = evaluate(legs, static_cast<double>(t - start));
        s.t = t;
        out.push_back(s);
    }
    Sample last = evaluate(legs, total);
    last.t = end;
    out.push_back(last);
    return out;
}

LatLon apron_stand(Rng& rng) { return {rng.uniform(33.9412, 33.9468), rng.uniform(-118.4135, -118.3965)}; }
LatLon parking_stand(Rng& rng) { return {rng.uniform(33.9412, 33.9468), rng.uniform(-118.4268, -118.4182)}; }

std::vector<Leg> departure_path(LatLon stand, bool parking, int runway, double hold_s) {
    const double ty = kTaxiwayLat[runway];
    const double ry = kRunwayLat[runway];
    const double push = parking ? 2.0 : 3.0;
    const LatLon exit{ty, stand.lon};
    const LatLon hold{ty, kThresholdLon};
    const LatLon line_up{ry, kThresholdLon};
    const LatLon rotate{ry, kThresholdLon + 1600.0 / kMetersPerDegLon};
    const LatLon lift_off{ry, kThresholdLon + 2500.0 / kMetersPerDegLon};
    std::vector<Leg> legs{{stand, exit, push, push}, {exit, hold, 9.0, 9.0}, {hold, line_up, 5.0, 5.0}};
    if (hold_s > 0.0) legs.push_back({line_up, line_up, 0.0, 0.0, hold_s});
    legs.push_back({line_up, rotate, 0.0, 80.0});
    legs.push_back({rotate, lift_off, 80.0, 80.0});
    return legs;
}

std::vector<Leg> arrival_path(LatLon stand, bool parking, int runway) {
    const double ty = kTaxiwayLat[runway];
    const double ry = kRunwayLat[runway];
    const LatLon touchdown{ry, kTouchdownLon};
    const LatLon vacate{ry, kTouchdownLon - 1189.0 / kMetersPerDegLon};
    const LatLon taxiway{ty, vacate.lon};
    const LatLon entry{ty, stand.lon};
    const double slow = parking ? 2.0 : 3.0;
    return {{touchdown, vacate, 70.0, 12.0}, {vacate, taxiway, 12.0, 9.0}, {taxiway, entry, 9.0, 9.0},
            {entry, stand, slow, slow}};
}

std::vector<Leg> tow_path(LatLon from, LatLon to, int side) {
    const double ty = kTaxiwayLat[side];
    const LatLon a{ty, from.lon};
    const LatLon b{ty, to.lon};
    return {{from, a, 2.0, 2.0}, {a, b, 5.0, 5.0}, {b, to, 2.0, 2.0}};
}

Timestamp parse_date(const std::string& date) { return parse_iso8601(date + "T00:00:00Z"); }

std::string date_tag(Timestamp t) {
    std::string s = format_iso8601(t).substr(0, 10);
    s.erase(std::remove(s.begin(), s.end(), '-'), s.end());
    return s;
}

std::int64_t epoch(Timestamp t) { return epoch_seconds(t); }

// Minute offset within a day drawn from an hourly profile, on 5-minute marks.
int sample_minute(const std::array<double, 24>& profile, Rng& rng) {
    const double total = std::accumulate(profile.begin(), profile.end(), 0.0);
    double u = rng.uniform() * total;
    int hour = 23;
    for (int h = 0; h < 24; ++h) {
        if (u < profile[h]) {
            hour = h;
            break;
        }
        u -= profile[h];
    }
    return hour * 60 + static_cast<int>(rng.below(12)) * 5;
}

double profile_at(const std::array<double, 24>& profile, std::int64_t epoch_s) {
    const auto hour = ((epoch_s % 86400) + 86400) % 86400 / 3600;
    return profile[static_cast<std::size_t>(hour)];
}

// Splits a whole-minute total into the five cause buckets; carrier absorbs
// whatever the named causes do not explain, so the sum is exact.
DelayComponents split_delay(double total, double late_aircraft, double nas, double weather) {
    DelayComponents c{};
    if (total <= 0.0) {
        c[0] = total;
        return c;
    }
    double left = total;
    auto take = [&](double want) {
        const double v = std::clamp(std::round(want), 0.0, left);
        left -= v;
        return v;
    };
    c[4] = take(late_aircraft);
    c[2] = take(nas);
    c[1] = take(weather);
    c[3] = 0.0;
    c[0] = left;
    return c;
}

double minutes_between(Timestamp a, Timestamp b) {
    return static_cast<double>(duration_cast<minutes>(b - a).count());
}

class Weather {
public:
    Weather(Timestamp first, int hours, Rng rng) : first_(first) {
        double temp_dev = 0.0, dew_gap = 10.0, wind = 8.0, bearing = 250.0, press = 0.0, cloud = 0.0;
        for (int h = 0; h < hours; ++h) {
            const Timestamp t = first + std::chrono::hours(h);
            const double hod = minutes_since_midnight(t) / 60.0;
            temp_dev = 0.9 * temp_dev + rng.normal(0.0, 1.2);
            dew_gap = std::clamp(0.92 * dew_gap + 0.08 * 12.0 + rng.normal(0.0, 1.0), 0.5, 30.0);
            wind = std::max(0.0, 0.85 * wind + 0.15 * 8.0 + rng.normal(0.0, 1.6));
            bearing += rng.normal(0.0, 12.0);
            press = 0.97 * press + rng.normal(0.0, 0.015);
            cloud = 0.9 * cloud + rng.normal(0.0, 0.45);

            WeatherRecord w;
            w.time = t;
            w.temperature_f = std::round(61.0 + 9.0 * std::sin((hod - 9.0) / 24.0 * kTwoPi) + temp_dev);
            w.dew_point_f = std::round(w.temperature_f - dew_gap);
            const double tc = (w.temperature_f - 32.0) / 1.8;
            const double dc = (w.dew_point_f - 32.0) / 1.8;
            w.humidity = std::round(std::clamp(
                100.0 * std::exp(17.625 * dc / (243.04 + dc)) / std::exp(17.625 * tc / (243.04 + tc)), 5.0, 100.0));
            w.wind_speed_mph = std::round(wind);
            w.wind_gust_mph = w.wind_speed_mph >= 12.0 ? std::round(w.wind_speed_mph + 4.0 + std::abs(rng.normal(0.0, 3.0))) : 0.0;
            w.pressure = std::round((29.92 + press) * 100.0) / 100.0;
            static const std::array<const char*, 16> kPoints{"N",  "NNE", "NE", "ENE", "E",  "ESE", "SE", "SSE",
                                                             "S",  "SSW", "SW", "WSW", "W",  "WNW", "NW", "NNW"};
            const double b = std::fmod(std::fmod(bearing, 360.0) + 360.0, 360.0);
            if (w.wind_speed_mph < 2.0)
                w.wind_direction = "CALM";
            else if (w.wind_speed_mph < 5.0 && rng.uniform() < 0.1)
                w.wind_direction = "VAR";
            else
                w.wind_direction = kPoints[static_cast<std::size_t>(std::lround(b / 22.5)) % 16];
            if (w.humidity >= 96.0)
                w.condition = "Fog";
            else if (cloud > 1.3)
                w.condition = "Light Rain";
            else if (cloud > 0.7)
                w.condition = "Cloudy";
            else if (cloud > 0.2)
                w.condition = "Mostly Cloudy";
            else if (cloud > -0.3)
                w.condition = "Partly Cloudy";
            else if (w.humidity < 25.0)
                w.condition = "Haze";
            else
                w.condition = "Fair";
            records_.push_back(std::move(w));
        }
    }

    const std::vector<WeatherRecord>& records() const { return records_; }
    const WeatherRecord& at(Timestamp t) const {
        const auto h = std::clamp<std::int64_t>(duration_cast<hours>(t - first_).count(), 0,
                                                static_cast<std::int64_t>(records_.size()) - 1);
        return records_[static_cast<std::size_t>(h)];
    }

private:
    Timestamp first_;
    std::vector<WeatherRecord> records_;
};

struct Aircraft {
    std::string tail;
    std::string airline;
    std::string number;
};

}  // namespace

void ScenarioConfig::validate() const {
    auto fail = [](const std::string& m) { throw ParameterError("scenario config: " + m); };
    if (day_count < 1) fail("day_count must be positive");
    if (flights_per_day < 0) fail("flights_per_day must be nonnegative");
    if (airline_count < 1 || airline_count > static_cast<int>(kAirlines.size()))
        fail("airline_count must be in [1, " + std::to_string(kAirlines.size()) + "]");
    if (airport_count < 1 || airport_count > static_cast<int>(kAirports.size()) - 1)
        fail("airport_count must be in [1, " + std::to_string(kAirports.size() - 1) + "]");
    if (noise_std < 0.0) fail("noise_std must be nonnegative");
    if (!(noise_sigma > 0.0)) fail("noise_sigma must be positive");
    if (inbound_fraction < 0.0 || inbound_fraction > 1.0) fail("inbound_fraction must be in [0, 1]");
    if (extra_arrival_fraction < 0.0) fail("extra_arrival_fraction must be nonnegative");
    if (background_rate < 0.0 || background_floor < 0.0) fail("background rates must be nonnegative");
    if (load_sigma < 0.0 || !(load_tau_min > 0.0)) fail("load process needs sigma >= 0 and tau > 0");
    if (gps_interval_s < 1) fail("gps_interval_s must be positive");
    if (window_min < 1 || gap_min < 0) fail("window_min must be positive and gap_min nonnegative");
    if (outlier_fraction < 0.0 || outlier_fraction > 0.5 || duplicate_fraction < 0.0 || duplicate_fraction > 0.5)
        fail("outlier and duplicate fractions must be in [0, 0.5]");
    if (targets.on_time_fraction < 0.0 || targets.on_time_fraction > 1.0) fail("on-time target must be in [0, 1]");
    if (targets.std < 0.0) fail("delay std target must be nonnegative");
    if (targets.std == 0.0 && targets.on_time_fraction > 0.0 && targets.on_time_fraction < 1.0)
        fail("a zero delay std cannot produce a fractional on-time rate");
    if (targets.std == 0.0 && (targets.mean != targets.median))
        fail("a zero delay std requires mean == median");
}

Scenario generate_scenario(const ScenarioConfig& cfg) {
    cfg.validate();
    Scenario out;
    Rng sched_rng(derive_seed(cfg.seed, 1));
    Rng bg_rng(derive_seed(cfg.seed, 2));
    Rng path_rng(derive_seed(cfg.seed, 3));
    Rng delay_rng(derive_seed(cfg.seed, 4));
    Rng noise_rng(derive_seed(cfg.seed, 5));

    const Timestamp day0 = parse_date(cfg.start_date);
    const Timestamp lead_in = day0 - hours(12);
    const Timestamp end = day0 + days(cfg.day_count);
    const Weather weather(lead_in, static_cast<int>(duration_cast<hours>(end - lead_in).count()) + 24,
                          Rng(derive_seed(cfg.seed, 6)));
    out.weather = weather.records();

    std::vector<std::string> airports;
    for (const char* a : kAirports)
        if (a != cfg.airport && static_cast<int>(airports.size()) < cfg.airport_count) airports.emplace_back(a);

    std::vector<Track> tracks;
    auto add_track = [&](std::string id, const std::vector<Leg>& legs, std::int64_t start) {
        tracks.push_back({std::move(id), render(legs, start, cfg.gps_interval_s)});
    };

    // Unscheduled movements driven by a latent log-load AR(1) process on a
    // five-minute grid.
    {
        const double rho = std::exp(-5.0 / cfg.load_tau_min);
        double load = bg_rng.normal(0.0, cfg.load_sigma);
        std::map<std::int64_t, int> per_day;
        for (Timestamp t = lead_in; t < end; t += minutes(5)) {
            const double rate = std::max(cfg.background_floor,
                                         cfg.background_rate * profile_at(kArrivalProfile, epoch(t)) *
                                             std::exp(load - 0.5 * cfg.load_sigma * cfg.load_sigma));
            const auto n = bg_rng.poisson(rate / 12.0);
            for (std::int64_t k = 0; k < n; ++k) {
                const std::int64_t start = epoch(t) + static_cast<std::int64_t>(bg_rng.below(300));
                const int serial = ++per_day[utc_day(from_epoch_seconds(start))];
                const LatLon park = parking_stand(bg_rng);
                const LatLon apron = apron_stand(bg_rng);
                const int side = static_cast<int>(bg_rng.below(2));
                if (bg_rng.uniform() < 0.3) {
                    const double hold = bg_rng.uniform(0.0, 120.0);
                    add_track("GA" + std::to_string(100 + serial), departure_path(park, true, side, hold), start);
                } else if (bg_rng.uniform() < 0.5) {
                    add_track("TW" + std::to_string(100 + serial), tow_path(park, apron, side), start);
                } else {
                    add_track("TW" + std::to_string(100 + serial), tow_path(apron, park, side), start);
                }
            }
            load = rho * load + std::sqrt(1.0 - rho * rho) * cfg.load_sigma * bg_rng.normal();
        }
    }

    // Scheduled departures, their inbound legs and stand-alone arrivals.
    struct Pending {
        FlightRecord dep;
        std::optional<FlightRecord> inbound;
    };
    std::vector<Pending> pending;
    std::vector<FlightRecord> arrivals;
    int tail_serial = 0;
    auto make_arrival = [&](const Aircraft& ac, Timestamp sched_in, Timestamp latest_in) {
        FlightRecord a;
        a.tail_number = ac.tail;
        a.airline = ac.airline;
        a.origin = airports[sched_rng.below(airports.size())];
        a.destination = cfg.airport;
        a.sched_gate_in = sched_in;
        a.sched_elapsed_min = 60.0 + 5.0 * static_cast<double>(sched_rng.below(55));
        a.sched_gate_out = sched_in - minutes(static_cast<int>(a.sched_elapsed_min));
        double arr = std::round(cfg.inbound_delay_median * std::exp(cfg.inbound_delay_sigma * delay_rng.normal())) - 5.0;
        arr = std::min(arr, minutes_between(sched_in, latest_in));
        a.arr_delay = arr;
        a.actual_gate_in = sched_in + minutes(static_cast<int>(arr));
        a.dep_delay = arr + std::round(delay_rng.normal(0.0, 5.0));
        a.actual_gate_out = a.sched_gate_out + minutes(static_cast<int>(a.dep_delay));
        a.actual_elapsed_min = minutes_between(a.actual_gate_out, a.actual_gate_in);
        a.arr_components = split_delay(arr, 0.5 * arr, 0.2 * arr, 0.0);
        a.dep_components = split_delay(a.dep_delay, 0.5 * a.dep_delay, 0.2 * a.dep_delay, 0.0);

        const bool parking = path_rng.uniform() < 0.2;
        const LatLon stand = parking ? parking_stand(path_rng) : apron_stand(path_rng);
        const auto legs = arrival_path(stand, parking, static_cast<int>(path_rng.below(2)));
        const auto taxi = static_cast<std::int64_t>(std::ceil(path_duration(legs)));
        const std::int64_t touchdown = epoch(a.actual_gate_in) - taxi;
        a.wheels_on = from_epoch_seconds(touchdown);
        a.flight_id = ac.airline + ac.number + "-" + date_tag(sched_in);
        add_track(ac.airline + ac.number, legs, touchdown);
        return a;
    };

    for (int d = 0; d < cfg.day_count; ++d) {
        const Timestamp day = day0 + days(d);
        std::vector<int> dep_minutes(static_cast<std::size_t>(cfg.flights_per_day));
        for (auto& m : dep_minutes) m = sample_minute(kDepartureProfile, sched_rng);
        std::sort(dep_minutes.begin(), dep_minutes.end());
        int number = 1000;
        for (int m : dep_minutes) {
            const Timestamp t = day + minutes(m);
            Aircraft ac;
            ac.airline = kAirlines[sched_rng.below(static_cast<std::uint64_t>(cfg.airline_count))];
            ac.tail = "N" + std::to_string(10000 + ++tail_serial);
            Pending p;
            p.dep.tail_number = ac.tail;
            p.dep.airline = ac.airline;
            p.dep.origin = cfg.airport;
            p.dep.destination = airports[sched_rng.below(airports.size())];
            p.dep.sched_gate_out = t;
            p.dep.flight_id = ac.airline + std::to_string(number) + "-" + date_tag(t);
            p.dep.sched_elapsed_min = 60.0 + 5.0 * static_cast<double>(sched_rng.below(55));
            p.dep.sched_gate_in = t + minutes(static_cast<int>(p.dep.sched_elapsed_min));
            if (sched_rng.uniform() < cfg.inbound_fraction) {
                const int turnaround = 45 + 5 * static_cast<int>(sched_rng.below(22));
                Aircraft in = ac;
                in.number = std::to_string(number + 4000);
                p.inbound = make_arrival(in, t - minutes(turnaround), t - minutes(10));
            }
            ++number;
            pending.push_back(std::move(p));
        }
        const int extra = static_cast<int>(std::lround(cfg.extra_arrival_fraction * cfg.flights_per_day));
        for (int i = 0; i < extra; ++i) {
            Aircraft ac;
            ac.airline = kAirlines[sched_rng.below(static_cast<std::uint64_t>(cfg.airline_count))];
            ac.tail = "N" + std::to_string(10000 + ++tail_serial);
            ac.number = std::to_string(8000 + i);
            const Timestamp t = day + minutes(sample_minute(kArrivalProfile, sched_rng));
            arrivals.push_back(make_arrival(ac, t, t + hours(6)));
        }
    }

    // Resolve departures in scheduled order: a flight's observation window
    // ends `gap` before its gate-out, so every movement inside it has already
    // been generated.
    std::sort(pending.begin(), pending.end(),
              [](const Pending& a, const Pending& b) { return a.dep.sched_gate_out < b.dep.sched_gate_out; });
    const double sd_l = std::sqrt((std::exp(cfg.noise_sigma * cfg.noise_sigma) - 1.0) *
                                  std::exp(cfg.noise_sigma * cfg.noise_sigma));
    for (auto& p : pending) {
        FlightRecord& f = p.dep;
        const std::int64_t w1 = epoch(f.sched_gate_out) - 60LL * cfg.gap_min;
        const std::int64_t w0 = w1 - 60LL * cfg.window_min;
        std::int64_t congestion = 0;
        for (const auto& tr : tracks) {
            if (tr.samples.front().t >= w1 || tr.samples.back().t < w0) continue;
            const auto it = std::lower_bound(tr.samples.begin(), tr.samples.end(), w0,
                                             [](const Sample& s, std::int64_t v) { return s.t < v; });
            if (it != tr.samples.end() && it->t < w1) ++congestion;
        }

        GroundTruth g;
        g.flight_id = f.flight_id;
        g.sched_gate_out = f.sched_gate_out;
        g.congestion = congestion;
        g.congestion_term =
            cfg.congestion_coefficient * std::max(0.0, static_cast<double>(congestion) - cfg.congestion_capacity);
        g.propagation_term = p.inbound ? cfg.propagation_factor * std::max(0.0, p.inbound->arr_delay) : 0.0;
        const double u = (std::exp(cfg.noise_sigma * noise_rng.normal()) - cfg.noise_shift) / sd_l;
        g.noise_term = cfg.noise_std * u;
        const std::string& cond = weather.at(f.sched_gate_out).condition;
        g.weather_term = (cond == "Light Rain" || cond == "Fog") ? cfg.weather_coefficient : 0.0;
        g.dep_delay = std::max(cfg.min_delay,
                               std::round(g.noise_term + g.congestion_term + g.propagation_term + g.weather_term));

        f.dep_delay = g.dep_delay;
        f.dep_components = split_delay(g.dep_delay, g.propagation_term, g.congestion_term, g.weather_term);
        f.actual_gate_out = f.sched_gate_out + minutes(static_cast<int>(g.dep_delay));
        f.actual_elapsed_min = f.sched_elapsed_min + std::round(delay_rng.normal(0.0, 8.0));
        f.actual_gate_in = f.actual_gate_out + minutes(static_cast<int>(f.actual_elapsed_min));
        f.wheels_on = f.actual_gate_in - minutes(5 + static_cast<int>(delay_rng.below(11)));
        f.arr_delay = minutes_between(f.sched_gate_in, f.actual_gate_in);
        f.arr_components = split_delay(f.arr_delay, std::max(0.0, g.dep_delay), 0.0, 0.0);

        const bool parking = path_rng.uniform() < 0.2;
        const LatLon stand = parking ? parking_stand(path_rng) : apron_stand(path_rng);
        const double hold = path_rng.uniform(0.0, 180.0);
        const std::string call_sign = f.flight_id.substr(0, f.flight_id.find('-'));
        add_track(call_sign, departure_path(stand, parking, static_cast<int>(path_rng.below(2)), hold),
                  epoch(f.actual_gate_out));
        out.truth.push_back(std::move(g));
    }

    for (auto& p : pending) {
        out.flights.push_back(p.dep);
        if (p.inbound) arrivals.push_back(*p.inbound);
    }
    std::stable_sort(arrivals.begin(), arrivals.end(),
                     [](const FlightRecord& a, const FlightRecord& b) { return a.sched_gate_in < b.sched_gate_in; });
    out.flights.insert(out.flights.end(), arrivals.begin(), arrivals.end());

    if (cfg.emit_gps) {
        Rng gps_rng(derive_seed(cfg.seed, 7));
        const BoundingBox bbox = default_zone_map().bbox;
        for (const auto& tr : tracks) {
            for (std::size_t i = 0; i < tr.samples.size(); ++i) {
                const Sample& s = tr.samples[i];
                GpsPoint p;
                p.vehicle_id = tr.vehicle_id;
                p.time = from_epoch_seconds(s.t);
                p.lat = std::clamp(s.lat + gps_rng.normal(0.0, cfg.gps_jitter_m) / kMetersPerDegLat, bbox.lat_min,
                                   bbox.lat_max);
                p.lon = std::clamp(s.lon + gps_rng.normal(0.0, cfg.gps_jitter_m) / kMetersPerDegLon, bbox.lon_min,
                                   bbox.lon_max);
                p.speed = std::round(s.speed * 100.0) / 100.0;
                p.heading = deg_to_rad(std::round(rad_to_deg(wrap_bearing(s.heading)) * 10.0) / 10.0);
                if (p.heading >= kTwoPi) p.heading = 0.0;
                out.gps.push_back(p);
                if (gps_rng.uniform() < cfg.duplicate_fraction) out.gps.push_back(p);
                if (i + 1 < tr.samples.size() && tr.samples[i + 1].t - s.t > 2 &&
                    gps_rng.uniform() < cfg.outlier_fraction) {
                    GpsPoint o = p;
                    o.time = p.time + seconds(1);
                    o.lat = bbox.lat_max + gps_rng.uniform(0.01, 0.05);
                    out.gps.push_back(o);
                }
            }
        }
        std::stable_sort(out.gps.begin(), out.gps.end(), [](const GpsPoint& a, const GpsPoint& b) {
            if (a.time != b.time) return a.time < b.time;
            return a.vehicle_id < b.vehicle_id;
        });
    }
    return out;
}

ScenarioReport validate_scenario(const Scenario& s, const ZoneMap& map, const std::string& airport) {
    ScenarioReport r;
    std::vector<double> delays;
    for (const auto& f : s.flights) {
        if (f.origin == airport) {
            ++r.departures;
            delays.push_back(f.dep_delay);
            double sum = 0.0;
            for (double c : f.dep_components) sum += c;
            if (sum != f.dep_delay) ++r.component_mismatches;
        } else if (f.destination == airport) {
            ++r.arrivals;
        }
    }
    r.gps_points = s.gps.size();
    for (const auto& p : s.gps) {
        const auto z = classify_point(p, map);
        if (!z)
            ++r.unzoned_points;
        else if (*z == ZoneLabel::Apron)
            ++r.apron_points;
        else if (*z == ZoneLabel::Runway)
            ++r.runway_points;
        else
            ++r.parking_points;
    }
    if (delays.empty()) return r;

    const double n = static_cast<double>(delays.size());
    r.mean_delay = std::accumulate(delays.begin(), delays.end(), 0.0) / n;
    double ss = 0.0;
    for (double d : delays) ss += (d - r.mean_delay) * (d - r.mean_delay);
    r.std_delay = std::sqrt(ss / n);
    r.on_time_fraction = static_cast<double>(std::count_if(delays.begin(), delays.end(), [](double d) { return d <= 0.0; })) / n;
    std::vector<double> sorted = delays;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t m = sorted.size() / 2;
    r.median_delay = sorted.size() % 2 ? sorted[m] : 0.5 * (sorted[m - 1] + sorted[m]);

    if (!s.truth.empty() && ss > 0.0) {
        double cm = 0.0;
        for (const auto& g : s.truth) cm += g.congestion_term;
        cm /= static_cast<double>(s.truth.size());
        double cs = 0.0;
        for (const auto& g : s.truth) cs += (g.congestion_term - cm) * (g.congestion_term - cm);
        r.congestion_share = cs / ss;
    }
    return r;
}

void write_ground_truth(std::ostream& out, const std::vector<GroundTruth>& truth) {
    csv::Writer w(out);
    w.row({"flight_id", "sched_gate_out", "congestion", "congestion_term", "propagation_term", "noise_term",
           "weather_term", "dep_delay"});
    for (const auto& g : truth) {
        w.field(g.flight_id).field(format_iso8601(g.sched_gate_out)).field(g.congestion);
        w.field(g.congestion_term).field(g.propagation_term).field(g.noise_term).field(g.weather_term).field(g.dep_delay);
        w.end_row();
    }
}

void write_scenario(const std::filesystem::path& dir, const Scenario& s, const ZoneMap& map) {
    std::filesystem::create_directories(dir);
    auto open = [&](const char* name) {
        std::ofstream f(dir / name, std::ios::binary);
        if (!f) throw IoError("cannot write " + (dir / name).string());
        return f;
    };
    {
        auto f = open("gps.csv");
        write_gps(f, s.gps);
    }
    {
        auto f = open("schedule.csv");
        write_schedule(f, s.flights);
    }
    {
        auto f = open("weather.csv");
        write_weather(f, s.weather);
    }
    {
        auto f = open("ground_truth.csv");
        write_ground_truth(f, s.truth);
    }
    {
        auto f = open("zones.json");
        f << dump_zone_map(map) << '\n';
    }
}

}  // namespace tarmac

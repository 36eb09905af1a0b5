#include "tarmac/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <tuple>

#include "tarmac/csv.hpp"
#include "tarmac/error.hpp"

namespace tarmac {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

constexpr std::array<const char*, kDelayComponents> kComponentNames{"carrier", "weather", "nas", "security",
                                                                    "late_aircraft"};

std::optional<Timestamp> try_time(std::string_view s) {
    try {
        return parse_iso8601(s);
    } catch (const SchemaError&) {
        return std::nullopt;
    }
}

std::string time_text(Timestamp t) { return format_iso8601(t); }

}  // namespace

std::string_view zone_name(ZoneLabel z) {
    switch (z) {
        case ZoneLabel::Apron: return "Apron";
        case ZoneLabel::Runway: return "Runway";
        case ZoneLabel::Parking: return "Parking";
    }
    return "?";
}

std::optional<ZoneLabel> parse_zone_name(std::string_view name) {
    if (name == "Apron") return ZoneLabel::Apron;
    if (name == "Runway") return ZoneLabel::Runway;
    if (name == "Parking" || name == "Patrol" || name == "Patrolling") return ZoneLabel::Parking;
    return std::nullopt;
}

bool is_valid(const GpsPoint& p) {
    if (p.vehicle_id.empty()) return false;
    if (!(p.lat >= -90.0 && p.lat <= 90.0)) return false;
    if (!(p.lon >= -180.0 && p.lon <= 180.0)) return false;
    if (!std::isnan(p.speed) && !(p.speed >= 0.0 && std::isfinite(p.speed))) return false;
    if (!std::isnan(p.heading) && !(p.heading >= 0.0 && p.heading < kTwoPi)) return false;
    return true;
}

bool LabelVector::consistent(double tol) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < kDelayComponents; ++i) sum += values[i];
    return std::abs(sum - values[kDepartureDelay]) <= tol;
}

LabelVector label_of(const FlightRecord& f) {
    LabelVector l;
    for (std::size_t i = 0; i < kDelayComponents; ++i) l.values[i] = f.dep_components[i];
    l.values[LabelVector::kDepartureDelay] = f.dep_delay;
    return l;
}

// --- GPS --------------------------------------------------------------------

ParseResult<GpsPoint> parse_gps(std::istream& in) {
    csv::Reader reader(in);
    const std::size_t c_id = reader.column("vehicle_id");
    const std::size_t c_time = reader.column("time_iso8601");
    const std::size_t c_lat = reader.column("lat");
    const std::size_t c_lon = reader.column("lon");
    const std::size_t c_speed = reader.column("speed_mps");
    const std::size_t c_heading = reader.column("heading_deg");
    const std::size_t width = reader.header().size();

    ParseResult<GpsPoint> result;
    std::vector<std::string_view> f;
    while (reader.next(f)) {
        if (f.size() != width) {
            ++result.skipped;
            continue;
        }
        GpsPoint p;
        p.vehicle_id = std::string(f[c_id]);
        const auto t = try_time(f[c_time]);
        const auto lat = csv::to_double(f[c_lat]);
        const auto lon = csv::to_double(f[c_lon]);
        if (!t || !lat || !lon) {
            ++result.skipped;
            continue;
        }
        p.time = *t;
        p.lat = *lat;
        p.lon = *lon;
        p.speed = kNaN;
        p.heading = kNaN;
        if (!f[c_speed].empty()) {
            const auto s = csv::to_double(f[c_speed]);
            if (!s) {
                ++result.skipped;
                continue;
            }
            p.speed = *s;
        }
        if (!f[c_heading].empty()) {
            const auto h = csv::to_double(f[c_heading]);
            if (!h || !(*h >= 0.0 && *h < 360.0)) {
                ++result.skipped;
                continue;
            }
            p.heading = std::min(deg_to_rad(*h), std::nextafter(kTwoPi, 0.0));
        }
        if (!is_valid(p)) {
            ++result.skipped;
            continue;
        }
        result.rows.push_back(std::move(p));
    }
    return result;
}

void write_gps(std::ostream& out, const std::vector<GpsPoint>& points) {
    csv::Writer w(out);
    w.row({"vehicle_id", "time_iso8601", "lat", "lon", "speed_mps", "heading_deg"});
    for (const auto& p : points) {
        w.field(p.vehicle_id).field(time_text(p.time)).field(p.lat).field(p.lon);
        if (std::isnan(p.speed)) w.field(std::string_view{});
        else w.field(p.speed);
        if (std::isnan(p.heading)) w.field(std::string_view{});
        else w.field(rad_to_deg(p.heading));
        w.end_row();
    }
}

// --- schedule ---------------------------------------------------------------

namespace {

std::vector<std::string> schedule_header() {
    std::vector<std::string> h{"flight_id",      "tail_number",   "airline",       "origin",
                               "destination",    "sched_gate_out", "actual_gate_out", "sched_gate_in",
                               "actual_gate_in", "wheels_on",      "sched_elapsed_min", "actual_elapsed_min"};
    for (auto* n : kComponentNames) h.push_back(std::string("arr_delay_") + n);
    h.emplace_back("arr_delay");
    for (auto* n : kComponentNames) h.push_back(std::string("dep_delay_") + n);
    h.emplace_back("dep_delay");
    return h;
}

}  // namespace

ParseResult<FlightRecord> parse_schedule(std::istream& in) {
    csv::Reader reader(in);
    const auto header = schedule_header();
    std::vector<std::size_t> col;
    for (const auto& name : header) col.push_back(reader.column(name));
    const std::size_t width = reader.header().size();

    ParseResult<FlightRecord> result;
    std::vector<std::string_view> f;
    while (reader.next(f)) {
        if (f.size() != width) {
            ++result.skipped;
            continue;
        }
        FlightRecord r;
        r.flight_id = std::string(f[col[0]]);
        r.tail_number = std::string(f[col[1]]);
        r.airline = std::string(f[col[2]]);
        r.origin = std::string(f[col[3]]);
        r.destination = std::string(f[col[4]]);
        bool ok = !r.flight_id.empty() && !r.tail_number.empty();
        Timestamp* times[] = {&r.sched_gate_out, &r.actual_gate_out, &r.sched_gate_in, &r.actual_gate_in, &r.wheels_on};
        for (int i = 0; i < 5 && ok; ++i) {
            const auto t = try_time(f[col[5 + i]]);
            if (t) *times[i] = *t;
            else ok = false;
        }
        auto num = [&](std::size_t idx, bool empty_is_zero) -> std::optional<double> {
            const auto s = f[col[idx]];
            if (s.empty() && empty_is_zero) return 0.0;
            return csv::to_double(s);
        };
        std::optional<double> v;
        if (ok && (v = num(10, false))) r.sched_elapsed_min = *v;
        else ok = false;
        if (ok && (v = num(11, false))) r.actual_elapsed_min = *v;
        else ok = false;
        for (std::size_t i = 0; i < kDelayComponents && ok; ++i) {
            if ((v = num(12 + i, true))) r.arr_components[i] = *v;
            else ok = false;
        }
        if (ok && (v = num(17, false))) r.arr_delay = *v;
        else ok = false;
        for (std::size_t i = 0; i < kDelayComponents && ok; ++i) {
            if ((v = num(18 + i, true))) r.dep_components[i] = *v;
            else ok = false;
        }
        if (ok && (v = num(23, false))) r.dep_delay = *v;
        else ok = false;
        if (!ok) {
            ++result.skipped;
            continue;
        }
        result.rows.push_back(std::move(r));
    }
    return result;
}

void write_schedule(std::ostream& out, const std::vector<FlightRecord>& flights) {
    csv::Writer w(out);
    w.row(schedule_header());
    for (const auto& r : flights) {
        w.field(r.flight_id).field(r.tail_number).field(r.airline).field(r.origin).field(r.destination);
        for (Timestamp t : {r.sched_gate_out, r.actual_gate_out, r.sched_gate_in, r.actual_gate_in, r.wheels_on})
            w.field(time_text(t));
        w.field(r.sched_elapsed_min).field(r.actual_elapsed_min);
        for (double c : r.arr_components) w.field(c);
        w.field(r.arr_delay);
        for (double c : r.dep_components) w.field(c);
        w.field(r.dep_delay);
        w.end_row();
    }
}

// --- weather ----------------------------------------------------------------

ParseResult<WeatherRecord> parse_weather(std::istream& in) {
    csv::Reader reader(in);
    const std::size_t c_time = reader.column("time_iso8601");
    const std::size_t c_temp = reader.column("temperature_f");
    const std::size_t c_dew = reader.column("dew_point_f");
    const std::size_t c_hum = reader.column("humidity_pct");
    const std::size_t c_dir = reader.column("wind_direction");
    const std::size_t c_ws = reader.column("wind_speed_mph");
    const std::size_t c_gust = reader.column("wind_gust_mph");
    const std::size_t c_pres = reader.column("pressure_in");
    const std::size_t c_cond = reader.column("condition");
    const std::size_t width = reader.header().size();

    ParseResult<WeatherRecord> result;
    std::vector<std::string_view> f;
    while (reader.next(f)) {
        if (f.size() != width) {
            ++result.skipped;
            continue;
        }
        WeatherRecord w;
        const auto t = try_time(f[c_time]);
        const auto temp = csv::to_double(f[c_temp]);
        const auto dew = csv::to_double(f[c_dew]);
        const auto hum = csv::to_double(f[c_hum]);
        const auto ws = csv::to_double(f[c_ws]);
        const auto gust = f[c_gust].empty() ? std::optional<double>(0.0) : csv::to_double(f[c_gust]);
        const auto pres = csv::to_double(f[c_pres]);
        if (!t || !temp || !dew || !hum || !ws || !gust || !pres || *hum < 0.0 || *hum > 100.0 || *ws < 0.0) {
            ++result.skipped;
            continue;
        }
        w.time = *t;
        w.temperature_f = *temp;
        w.dew_point_f = *dew;
        w.humidity = *hum;
        w.wind_direction = std::string(f[c_dir]);
        w.wind_speed_mph = *ws;
        w.wind_gust_mph = *gust;
        w.pressure = *pres;
        w.condition = std::string(f[c_cond]);
        result.rows.push_back(std::move(w));
    }
    return result;
}

void write_weather(std::ostream& out, const std::vector<WeatherRecord>& records) {
    csv::Writer w(out);
    w.row({"time_iso8601", "temperature_f", "dew_point_f", "humidity_pct", "wind_direction", "wind_speed_mph",
           "wind_gust_mph", "pressure_in", "condition"});
    for (const auto& r : records) {
        w.field(time_text(r.time)).field(r.temperature_f).field(r.dew_point_f).field(r.humidity);
        w.field(r.wind_direction).field(r.wind_speed_mph).field(r.wind_gust_mph).field(r.pressure);
        w.field(r.condition);
        w.end_row();
    }
}

// --- trajectories -----------------------------------------------------------

std::vector<GpsPoint> clean_trajectory(const std::vector<GpsPoint>& points, double v_max, const BoundingBox& bbox) {
    for (std::size_t i = 1; i < points.size(); ++i)
        require(points[i - 1].time <= points[i].time, "clean_trajectory: points not sorted by time");

    std::vector<GpsPoint> out;
    out.reserve(points.size());
    for (const auto& p : points) {
        if (!bbox.contains(p.lat, p.lon)) continue;
        if (out.empty()) {
            out.push_back(p);
            continue;
        }
        const GpsPoint& last = out.back();
        const double dist = haversine_m({last.lat, last.lon}, {p.lat, p.lon});
        const double dt = static_cast<double>((p.time - last.time).count());
        // dt == 0 with movement is an infinite implied speed.
        const bool too_fast = dt > 0.0 ? dist / dt > v_max : dist > 0.0;
        if (!too_fast) out.push_back(p);
    }
    return out;
}

SpeedResult compute_speeds(const std::vector<GpsPoint>& points, bool overwrite) {
    for (std::size_t i = 1; i < points.size(); ++i)
        require(points[i - 1].time <= points[i].time, "compute_speeds: points not sorted by time");

    SpeedResult result;
    auto& out = result.points;
    out.reserve(points.size());
    for (const auto& p : points) {
        if (!out.empty() && out.back().time == p.time) {
            ++result.duplicates_dropped;
            continue;
        }
        out.push_back(p);
    }
    const std::size_t n = out.size();
    for (std::size_t i = 0; i < n; ++i) {
        auto& p = out[i];
        const bool fill_speed = overwrite || std::isnan(p.speed);
        const bool fill_heading = overwrite || std::isnan(p.heading);
        if (!fill_speed && !fill_heading) continue;
        if (n == 1) {
            if (fill_speed) p.speed = 0.0;
            if (fill_heading) p.heading = 0.0;
            continue;
        }
        const GpsPoint& a = i + 1 < n ? out[i] : out[i - 1];
        const GpsPoint& b = i + 1 < n ? out[i + 1] : out[i];
        const double dt = static_cast<double>((b.time - a.time).count());
        if (fill_speed) p.speed = haversine_m({a.lat, a.lon}, {b.lat, b.lon}) / dt;
        if (fill_heading) p.heading = initial_bearing({a.lat, a.lon}, {b.lat, b.lon});
    }
    return result;
}

std::vector<Trajectory> segment_trajectories(const std::vector<GpsPoint>& points, Seconds gap_threshold) {
    std::map<std::pair<std::string, std::int64_t>, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < points.size(); ++i)
        groups[{points[i].vehicle_id, utc_day(points[i].time)}].push_back(i);

    std::vector<Trajectory> out;
    for (auto& [key, idx] : groups) {
        std::stable_sort(idx.begin(), idx.end(),
                         [&](std::size_t a, std::size_t b) { return points[a].time < points[b].time; });
        Trajectory current;
        for (std::size_t k = 0; k < idx.size(); ++k) {
            const GpsPoint& p = points[idx[k]];
            if (!current.points.empty() && p.time - current.points.back().time > gap_threshold) {
                out.push_back(std::move(current));
                current = Trajectory{};
            }
            if (current.points.empty()) {
                current.vehicle_id = key.first;
                current.date = key.second;
            }
            current.points.push_back(p);
        }
        if (!current.points.empty()) out.push_back(std::move(current));
    }
    return out;
}

std::vector<Trajectory> restore_trajectories(const std::vector<GpsPoint>& points, const CleaningConfig& config,
                                             RestoreReport* report) {
    std::map<std::string, std::vector<GpsPoint>> by_vehicle;
    for (const auto& p : points) by_vehicle[p.vehicle_id].push_back(p);

    RestoreReport rep;
    rep.input_points = points.size();
    rep.vehicles = by_vehicle.size();
    std::vector<GpsPoint> retained;
    retained.reserve(points.size());
    for (auto& [id, pts] : by_vehicle) {
        std::stable_sort(pts.begin(), pts.end(), [](const GpsPoint& a, const GpsPoint& b) { return a.time < b.time; });
        auto cleaned = clean_trajectory(pts, config.v_max, config.bbox);
        rep.removed_by_cleaning += pts.size() - cleaned.size();
        auto speeds = compute_speeds(cleaned);
        rep.duplicates_dropped += speeds.duplicates_dropped;
        for (auto& p : speeds.points) retained.push_back(std::move(p));
    }
    rep.retained_points = retained.size();
    auto trajectories = segment_trajectories(retained, config.gap_threshold);
    rep.trajectories = trajectories.size();
    if (report) *report = rep;
    return trajectories;
}

std::vector<std::optional<std::size_t>> match_arrival_leg(const std::vector<FlightRecord>& departures,
                                                          const std::vector<FlightRecord>& arrivals) {
    std::map<std::string, std::vector<std::size_t>> by_tail;
    for (std::size_t i = 0; i < arrivals.size(); ++i) by_tail[arrivals[i].tail_number].push_back(i);
    for (auto& [tail, idx] : by_tail)
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            return arrivals[a].actual_gate_in < arrivals[b].actual_gate_in;
        });

    std::vector<std::optional<std::size_t>> out(departures.size());
    for (std::size_t d = 0; d < departures.size(); ++d) {
        const auto it = by_tail.find(departures[d].tail_number);
        if (it == by_tail.end()) continue;
        const auto& idx = it->second;
        const Timestamp cutoff = departures[d].sched_gate_out;
        // First arrival at or after the cutoff; the one before it is the latest preceding.
        auto pos = std::lower_bound(idx.begin(), idx.end(), cutoff, [&](std::size_t a, Timestamp t) {
            return arrivals[a].actual_gate_in < t;
        });
        if (pos == idx.begin()) continue;
        // Equal gate-in times: take the last of the run.
        out[d] = *std::prev(pos);
    }
    return out;
}

}  // namespace tarmac

#include "tarmac/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "tarmac/base64.hpp"
#include "tarmac/csv.hpp"
#include "tarmac/error.hpp"
#include "tarmac/parallel.hpp"

namespace tarmac {

namespace fs = std::filesystem;
using nlohmann::json;

void require_file(const fs::path& p, std::string_view produced_by) {
    if (fs::exists(p)) return;
    std::string msg = "missing required artifact: " + p.string();
    if (!produced_by.empty()) msg += " (run '" + std::string(produced_by) + "' first)";
    throw IoError(msg);
}

namespace {

std::ifstream open_in(const fs::path& p, std::string_view produced_by = {}) {
    require_file(p, produced_by);
    std::ifstream in(p, std::ios::binary);
    if (!in) throw IoError("cannot read " + p.string());
    return in;
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw IoError("cannot write " + p.string());
    return out;
}

std::string slurp(const fs::path& p, std::string_view produced_by = {}) {
    auto in = open_in(p, produced_by);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

std::vector<FlightRecord> load_schedule(const fs::path& data_dir) {
    auto in = open_in(data_dir / files::kSchedule);
    return parse_schedule(in).rows;
}

std::vector<WeatherRecord> load_weather(const fs::path& data_dir) {
    auto in = open_in(data_dir / files::kWeather);
    auto rows = parse_weather(in).rows;
    std::stable_sort(rows.begin(), rows.end(), [](const WeatherRecord& a, const WeatherRecord& b) { return a.time < b.time; });
    return rows;
}

ZoneMap load_zones(const fs::path& data_dir) { return load_zone_map(slurp(data_dir / files::kZones)); }

RawInputs load_raw_inputs(const fs::path& data_dir) {
    RawInputs raw;
    {
        auto in = open_in(data_dir / files::kGps);
        auto r = parse_gps(in);
        raw.gps = std::move(r.rows);
        raw.skipped_gps = r.skipped;
    }
    {
        auto in = open_in(data_dir / files::kSchedule);
        auto r = parse_schedule(in);
        raw.flights = std::move(r.rows);
        raw.skipped_flights = r.skipped;
    }
    {
        auto in = open_in(data_dir / files::kWeather);
        auto r = parse_weather(in);
        raw.weather = std::move(r.rows);
        raw.skipped_weather = r.skipped;
    }
    raw.zones = load_zones(data_dir);
    return raw;
}

void write_trajectories(std::ostream& out, const std::vector<Trajectory>& trajectories, const ZoneMap& map) {
    csv::Writer w(out);
    w.row({"trajectory", "vehicle_id", "time_iso8601", "lat", "lon", "speed_mps", "heading_rad", "zone"});
    for (std::size_t t = 0; t < trajectories.size(); ++t)
        for (const auto& p : trajectories[t].points) {
            const auto z = classify_point(p, map);
            w.field(t).field(p.vehicle_id).field(format_iso8601(p.time)).field(p.lat).field(p.lon).field(p.speed);
            w.field(p.heading).field(z ? zone_name(*z) : std::string_view{});
            w.end_row();
        }
}

std::vector<Trajectory> read_trajectories(std::istream& in) {
    csv::Reader reader(in);
    const std::size_t c_traj = reader.column("trajectory"), c_id = reader.column("vehicle_id"),
                      c_time = reader.column("time_iso8601"), c_lat = reader.column("lat"), c_lon = reader.column("lon"),
                      c_speed = reader.column("speed_mps"), c_head = reader.column("heading_rad"),
                      c_zone = reader.column("zone");
    std::vector<Trajectory> out;
    std::vector<std::string_view> f;
    auto number = [&](std::string_view s) {
        const auto v = csv::to_double(s);
        if (!v) throw SchemaError("trajectories: bad number on line " + std::to_string(reader.line_number()));
        return *v;
    };
    while (reader.next(f)) {
        const auto idx = csv::to_int(f[c_traj]);
        if (!idx || *idx < 0 || static_cast<std::size_t>(*idx) > out.size())
            throw SchemaError("trajectories: trajectory ids must be dense and ascending (line " +
                              std::to_string(reader.line_number()) + ")");
        if (static_cast<std::size_t>(*idx) == out.size()) out.emplace_back();
        Trajectory& t = out[static_cast<std::size_t>(*idx)];
        GpsPoint p;
        p.vehicle_id = std::string(f[c_id]);
        p.time = parse_iso8601(f[c_time]);
        p.lat = number(f[c_lat]);
        p.lon = number(f[c_lon]);
        p.speed = number(f[c_speed]);
        p.heading = number(f[c_head]);
        if (t.points.empty()) {
            t.vehicle_id = p.vehicle_id;
            t.date = utc_day(p.time);
        }
        if (!f[c_zone].empty())
            if (const auto z = parse_zone_name(f[c_zone])) t.zone_labels.insert(*z);
        t.points.push_back(std::move(p));
    }
    return out;
}

IngestResult ingest(const RawInputs& raw, const CleaningConfig& cleaning) {
    IngestResult r;
    r.trajectories = restore_trajectories(raw.gps, cleaning, &r.report);
    for (auto& t : r.trajectories) t = label_trajectory(std::move(t), raw.zones);
    return r;
}

json to_json(const RestoreReport& r, const RawInputs& raw) {
    return {{"input_points", r.input_points},
            {"removed_by_cleaning", r.removed_by_cleaning},
            {"duplicates_dropped", r.duplicates_dropped},
            {"retained_points", r.retained_points},
            {"trajectories", r.trajectories},
            {"vehicles", r.vehicles},
            {"skipped_rows", {{"gps", raw.skipped_gps}, {"schedule", raw.skipped_flights}, {"weather", raw.skipped_weather}}}};
}

FeatureSet featurize(const std::vector<Trajectory>& trajectories, const std::vector<FlightRecord>& flights,
                     const std::vector<WeatherRecord>& weather_in, const ZoneMap& map, const FeaturizeOptions& options) {
    require(!weather_in.empty(), "featurize: no weather records");
    std::vector<WeatherRecord> weather = weather_in;
    std::stable_sort(weather.begin(), weather.end(), [](const WeatherRecord& a, const WeatherRecord& b) { return a.time < b.time; });

    std::vector<FlightRecord> departures, arrivals;
    for (const auto& f : flights) {
        if (f.origin == options.airport) departures.push_back(f);
        else if (f.destination == options.airport) arrivals.push_back(f);
    }
    std::stable_sort(departures.begin(), departures.end(), [](const FlightRecord& a, const FlightRecord& b) {
        if (a.sched_gate_out != b.sched_gate_out) return a.sched_gate_out < b.sched_gate_out;
        return a.flight_id < b.flight_id;
    });
    const auto inbound = match_arrival_leg(departures, arrivals);

    FeatureSet fs;
    fs.window = options.window;
    fs.gap = options.gap;
    const WeatherEncoder encoder = WeatherEncoder::fit(weather);
    fs.weather_vocab = encoder.vocab();
    Matrix encoded(0, encoder.dimension());
    for (const auto& w : weather) encoded.append_row(encoder.encode(w));
    fs.weather_pca = fit_pca(encoded, options.pca_components);
    const std::size_t k = fs.weather_pca.output_dim();

    std::vector<std::string> pca_names;
    for (std::size_t i = 0; i < k; ++i) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "weather_pc%02zu", i + 1);
        pca_names.emplace_back(buf);
    }
    auto& d = fs.dataset;
    d.feature_names = feature_names(pca_names);
    const std::size_t base_width = d.feature_names.size();
    for (const auto& n : encoder.column_names()) d.feature_names.push_back(n);

    const FeatureLayout layout{k};
    for (std::size_t i = 0; i < kReferenceDim; ++i) fs.groups.reference.push_back(i);
    fs.groups.reference.push_back(layout.missing_flag());
    for (std::size_t i = 0; i < AtcFeatures::kCount; ++i) fs.groups.atc.push_back(layout.atc_begin() + i);
    for (std::size_t i = 0; i < k; ++i) fs.groups.weather_pca.push_back(layout.weather_begin() + i);
    for (std::size_t i = 0; i < encoder.dimension(); ++i) fs.groups.weather_raw.push_back(base_width + i);

    const AtcIndex index(trajectories, departures, arrivals, map, options.atc);
    const std::size_t n = departures.size();
    d.features = Matrix(n, d.feature_names.size());
    d.targets = Matrix(n, LabelVector::kSize);
    if (options.build_images) d.images.resize(n);
    const Rasterizer raster(map.bbox);
    parallel_for(n, options.jobs, [&](std::size_t i) {
        const FlightRecord& f = departures[i];
        const TimeWindow window = select_window(f, options.window, options.gap);
        const AtcFeatures atc = index.extract(window);
        WeatherFeatures wf;
        wf.encoded = encoder.encode(weather_at(weather, window.prediction_time));
        wf.pca_components = apply_pca(fs.weather_pca, wf.encoded);
        const FlightRecord* in = inbound[i] ? &arrivals[*inbound[i]] : nullptr;
        const FeatureVector fv = build_feature_vector(f, in, atc, wf, true);
        auto row = d.features.row(i);
        std::copy(fv.values.begin(), fv.values.end(), row.begin());
        std::copy(wf.encoded.begin(), wf.encoded.end(), row.begin() + static_cast<std::ptrdiff_t>(base_width));
        const LabelVector label = label_of(f);
        std::copy(label.values.begin(), label.values.end(), d.targets.row(i).begin());
        if (options.build_images) {
            TrajImage& img = d.images[i];
            img.flight_id = f.flight_id;
            const auto [lo, hi] = index.point_range(window.window_start(), window.window_end());
            for (std::size_t p = lo; p < hi; ++p) {
                const auto& pt = index.points()[p];
                raster.add(img, pt.lat, pt.lon, pt.speed, pt.heading);
            }
        }
    });
    for (const auto& f : departures) {
        d.ids.push_back(f.flight_id);
        d.timestamps.push_back(f.sched_gate_out);
    }
    d.validate();
    return fs;
}

namespace {

json groups_json(const FeatureGroups& g) {
    return {{"reference", g.reference}, {"atc", g.atc}, {"weather_pca", g.weather_pca}, {"weather_raw", g.weather_raw}};
}

}  // namespace

void write_feature_set(const fs::path& dir, const FeatureSet& fset) {
    fs::create_directories(dir);
    const auto& d = fset.dataset;
    {
        auto out = open_out(dir / files::kDataset);
        learn::write_dataset_csv(out, d);
    }
    json schema;
    schema["format"] = "tarmac-dataset";
    schema["version"] = 1;
    schema["rows"] = d.size();
    schema["columns"] = d.feature_names;
    schema["labels"] = learn::label_names();
    schema["groups"] = groups_json(fset.groups);
    schema["window_min"] = fset.window.count();
    schema["gap_min"] = fset.gap.count();
    schema["weather_vocab"] = fset.weather_vocab;
    schema["weather_pca"] = {{"mean", base64::encode_doubles(fset.weather_pca.mean)},
                             {"components", base64::encode_doubles(fset.weather_pca.components.data())},
                             {"explained_variance", base64::encode_doubles(fset.weather_pca.explained_variance)},
                             {"k", fset.weather_pca.output_dim()}};
    schema["images"] = d.has_images();
    {
        auto out = open_out(dir / files::kSchema);
        out << schema.dump(1) << '\n';
    }
    if (d.has_images()) {
        auto out = open_out(dir / files::kImages);
        write_image_tensor(out, d.images);
        auto idx = open_out(dir / files::kImageIndex);
        idx << image_index_json(d.images) << '\n';
    }
}

FeatureSet read_feature_set(const fs::path& dir, bool with_images) {
    FeatureSet fset;
    {
        auto in = open_in(dir / files::kDataset, "featurize");
        fset.dataset = learn::read_dataset_csv(in);
    }
    json schema;
    try {
        schema = json::parse(slurp(dir / files::kSchema, "featurize"));
    } catch (const json::exception& e) {
        throw SchemaError("dataset schema is not valid JSON: " + std::string(e.what()));
    }
    if (schema.value("format", "") != "tarmac-dataset") throw SchemaError("dataset schema: unknown format");
    if (schema.at("columns").get<std::vector<std::string>>() != fset.dataset.feature_names)
        throw SchemaError("dataset schema columns disagree with dataset.csv");
    const auto& g = schema.at("groups");
    fset.groups.reference = g.at("reference").get<std::vector<std::size_t>>();
    fset.groups.atc = g.at("atc").get<std::vector<std::size_t>>();
    fset.groups.weather_pca = g.at("weather_pca").get<std::vector<std::size_t>>();
    fset.groups.weather_raw = g.at("weather_raw").get<std::vector<std::size_t>>();
    fset.window = Minutes(schema.at("window_min").get<long>());
    fset.gap = Minutes(schema.at("gap_min").get<long>());
    fset.weather_vocab = schema.at("weather_vocab").get<std::vector<std::string>>();
    const auto& p = schema.at("weather_pca");
    fset.weather_pca.mean = base64::decode_doubles(p.at("mean").get<std::string>());
    fset.weather_pca.explained_variance = base64::decode_doubles(p.at("explained_variance").get<std::string>());
    const auto comps = base64::decode_doubles(p.at("components").get<std::string>());
    const std::size_t k = p.at("k").get<std::size_t>();
    const std::size_t dim = fset.weather_pca.mean.size();
    if (comps.size() != k * dim) throw SchemaError("dataset schema: PCA component size mismatch");
    fset.weather_pca.components = Matrix(k, dim);
    std::copy(comps.begin(), comps.end(), fset.weather_pca.components.data().begin());

    if (with_images && schema.value("images", false)) {
        std::vector<TrajImage> images;
        {
            auto in = open_in(dir / files::kImages, "featurize");
            images = read_image_tensor(in);
        }
        apply_image_index(slurp(dir / files::kImageIndex, "featurize"), images);
        std::map<std::string, std::size_t> row_of;
        for (std::size_t i = 0; i < images.size(); ++i) row_of[images[i].flight_id] = i;
        auto& d = fset.dataset;
        d.images.resize(d.size());
        for (std::size_t r = 0; r < d.size(); ++r) {
            const auto it = row_of.find(d.ids[r]);
            if (it == row_of.end()) throw SchemaError("image tensor has no row for flight '" + d.ids[r] + "'");
            d.images[r] = images[it->second];
        }
    }
    fset.dataset.validate();
    return fset;
}

std::string_view combo_name(FeatureCombo c) {
    switch (c) {
    case FeatureCombo::Ref: return "ref";
    case FeatureCombo::RefW: return "ref+w";
    case FeatureCombo::RefAtc: return "ref+atc";
    case FeatureCombo::RefWAtc: return "ref+w+atc";
    case FeatureCombo::RefImg: return "ref+img";
    case FeatureCombo::RefWImg: return "ref+w+img";
    }
    return "?";
}

std::optional<FeatureCombo> parse_combo(std::string_view name) {
    for (auto c : kAllCombos)
        if (combo_name(c) == name) return c;
    return std::nullopt;
}

bool combo_uses_images(FeatureCombo c) { return c == FeatureCombo::RefImg || c == FeatureCombo::RefWImg; }

bool applicable(learn::ModelKind model, FeatureCombo combo) {
    return (model == learn::ModelKind::TrajCnn) == combo_uses_images(combo);
}

std::vector<std::size_t> combo_columns(const FeatureGroups& g, FeatureCombo combo) {
    std::vector<std::size_t> cols = g.reference;
    auto add = [&](const std::vector<std::size_t>& v) { cols.insert(cols.end(), v.begin(), v.end()); };
    switch (combo) {
    case FeatureCombo::Ref:
    case FeatureCombo::RefImg: break;
    case FeatureCombo::RefW: add(g.weather_pca); break;
    case FeatureCombo::RefAtc: add(g.atc); break;
    case FeatureCombo::RefWAtc:
        add(g.atc);
        add(g.weather_pca);
        break;
    case FeatureCombo::RefWImg: add(g.weather_raw); break;
    }
    return cols;
}

}  // namespace tarmac

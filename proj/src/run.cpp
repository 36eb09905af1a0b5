#include "tarmac/run.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>

#include "tarmac/csv.hpp"
#include "tarmac/error.hpp"
#include "tarmac/learn/metrics.hpp"
#include "tarmac/learn/search.hpp"

namespace tarmac {

namespace fs = std::filesystem;
using learn::ModelKind;
using nlohmann::json;

namespace {

std::atomic<bool> g_log_enabled{true};
std::mutex g_log_mutex;

}  // namespace

void set_log_enabled(bool on) { g_log_enabled = on; }

void log_event(std::string_view stage, std::string_view event, const json& fields) {
    if (!g_log_enabled) return;
    json line{{"stage", stage}, {"event", event}};
    for (auto it = fields.begin(); it != fields.end(); ++it) line[it.key()] = it.value();
    const std::lock_guard lock(g_log_mutex);
    std::cerr << line.dump() << '\n';
}

namespace {

void check_keys(const json& j, std::initializer_list<std::string_view> allowed, std::string_view where) {
    if (!j.is_object()) throw ParameterError(std::string(where) + ": expected a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
            throw ParameterError(std::string(where) + ": unknown key '" + it.key() + "'");
}

template <class T>
void read(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

ModelKind model_or_throw(const std::string& name) {
    const auto k = learn::parse_model_kind(name);
    if (!k) throw ParameterError("unknown model '" + name + "' (expected lr, mlp, gbdt or trajcnn)");
    return *k;
}

FeatureCombo combo_or_throw(const std::string& name) {
    const auto c = parse_combo(name);
    if (!c) throw ParameterError("unknown feature set '" + name + "'");
    return *c;
}

std::vector<std::string> split_list(std::string_view csv) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : csv) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != ' ') {
            cur += c;
        }
    }
    out.push_back(cur);
    std::erase_if(out, [](const std::string& s) { return s.empty(); });
    return out;
}

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw IoError("cannot write " + p.string());
    out << text;
}

template <class Fn>
void write_with(const fs::path& p, Fn&& fn) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw IoError("cannot write " + p.string());
    fn(out);
    if (!out) throw IoError("failed writing " + p.string());
}

}  // namespace

std::vector<ModelKind> parse_model_list(std::string_view csv) {
    std::vector<ModelKind> out;
    for (const auto& s : split_list(csv)) out.push_back(model_or_throw(s));
    if (out.empty()) throw ParameterError("empty model list");
    return out;
}

std::vector<FeatureCombo> parse_combo_list(std::string_view csv) {
    std::vector<FeatureCombo> out;
    for (const auto& s : split_list(csv)) out.push_back(combo_or_throw(s));
    if (out.empty()) throw ParameterError("empty feature-set list");
    return out;
}

std::vector<int> parse_int_list(std::string_view csv) {
    std::vector<int> out;
    for (const auto& s : split_list(csv)) {
        const auto v = csv::to_int(s);
        if (!v) throw ParameterError("not an integer: '" + s + "'");
        out.push_back(static_cast<int>(*v));
    }
    return out;
}

ScenarioConfig scenario_config_from_json(const json& j, ScenarioConfig c) {
    check_keys(j,
               {"seed", "start_date", "day_count", "flights_per_day", "airline_count", "airport_count", "airport",
                "congestion_coefficient", "congestion_capacity", "noise_std", "noise_sigma", "noise_shift",
                "propagation_factor", "min_delay", "weather_coefficient", "inbound_fraction",
                "extra_arrival_fraction", "inbound_delay_median", "inbound_delay_sigma", "background_rate",
                "background_floor", "load_sigma", "load_tau_min", "gps_interval_s", "gps_jitter_m",
                "outlier_fraction", "duplicate_fraction", "emit_gps", "window_min", "gap_min", "targets"},
               "scenario");
    read(j, "seed", c.seed);
    read(j, "start_date", c.start_date);
    read(j, "day_count", c.day_count);
    read(j, "flights_per_day", c.flights_per_day);
    read(j, "airline_count", c.airline_count);
    read(j, "airport_count", c.airport_count);
    read(j, "airport", c.airport);
    read(j, "congestion_coefficient", c.congestion_coefficient);
    read(j, "congestion_capacity", c.congestion_capacity);
    read(j, "noise_std", c.noise_std);
    read(j, "noise_sigma", c.noise_sigma);
    read(j, "noise_shift", c.noise_shift);
    read(j, "propagation_factor", c.propagation_factor);
    read(j, "min_delay", c.min_delay);
    read(j, "weather_coefficient", c.weather_coefficient);
    read(j, "inbound_fraction", c.inbound_fraction);
    read(j, "extra_arrival_fraction", c.extra_arrival_fraction);
    read(j, "inbound_delay_median", c.inbound_delay_median);
    read(j, "inbound_delay_sigma", c.inbound_delay_sigma);
    read(j, "background_rate", c.background_rate);
    read(j, "background_floor", c.background_floor);
    read(j, "load_sigma", c.load_sigma);
    read(j, "load_tau_min", c.load_tau_min);
    read(j, "gps_interval_s", c.gps_interval_s);
    read(j, "gps_jitter_m", c.gps_jitter_m);
    read(j, "outlier_fraction", c.outlier_fraction);
    read(j, "duplicate_fraction", c.duplicate_fraction);
    read(j, "emit_gps", c.emit_gps);
    read(j, "window_min", c.window_min);
    read(j, "gap_min", c.gap_min);
    if (j.contains("targets")) {
        const json& t = j.at("targets");
        check_keys(t, {"mean", "std", "median", "on_time_fraction"}, "scenario.targets");
        read(t, "mean", c.targets.mean);
        read(t, "std", c.targets.std);
        read(t, "median", c.targets.median);
        read(t, "on_time_fraction", c.targets.on_time_fraction);
    }
    c.validate();
    return c;
}

json to_json(const ScenarioConfig& c) {
    return {{"seed", c.seed},
            {"start_date", c.start_date},
            {"day_count", c.day_count},
            {"flights_per_day", c.flights_per_day},
            {"airline_count", c.airline_count},
            {"airport_count", c.airport_count},
            {"airport", c.airport},
            {"congestion_coefficient", c.congestion_coefficient},
            {"congestion_capacity", c.congestion_capacity},
            {"noise_std", c.noise_std},
            {"noise_sigma", c.noise_sigma},
            {"noise_shift", c.noise_shift},
            {"propagation_factor", c.propagation_factor},
            {"min_delay", c.min_delay},
            {"weather_coefficient", c.weather_coefficient},
            {"inbound_fraction", c.inbound_fraction},
            {"extra_arrival_fraction", c.extra_arrival_fraction},
            {"inbound_delay_median", c.inbound_delay_median},
            {"inbound_delay_sigma", c.inbound_delay_sigma},
            {"background_rate", c.background_rate},
            {"background_floor", c.background_floor},
            {"load_sigma", c.load_sigma},
            {"load_tau_min", c.load_tau_min},
            {"gps_interval_s", c.gps_interval_s},
            {"gps_jitter_m", c.gps_jitter_m},
            {"outlier_fraction", c.outlier_fraction},
            {"duplicate_fraction", c.duplicate_fraction},
            {"emit_gps", c.emit_gps},
            {"window_min", c.window_min},
            {"gap_min", c.gap_min},
            {"targets",
             {{"mean", c.targets.mean},
              {"std", c.targets.std},
              {"median", c.targets.median},
              {"on_time_fraction", c.targets.on_time_fraction}}}};
}

PipelineConfig pipeline_config_from_json(const json& j, const fs::path& base_dir) {
    check_keys(j,
               {"seed", "jobs", "data_dir", "scenario", "featurize", "cleaning", "train", "eval", "sweep",
                "importance", "plot_data"},
               "pipeline config");
    PipelineConfig c;
    read(j, "seed", c.seed);
    read(j, "jobs", c.jobs);
    if (c.jobs < 1) throw ParameterError("pipeline config: jobs must be at least 1");
    if (j.contains("data_dir")) {
        const fs::path d = j.at("data_dir").get<std::string>();
        c.data_dir = d.is_relative() && !base_dir.empty() ? base_dir / d : d;
    }
    c.scenario.seed = c.seed;
    if (j.contains("scenario")) c.scenario = scenario_config_from_json(j.at("scenario"), c.scenario);

    if (j.contains("featurize")) {
        const json& f = j.at("featurize");
        check_keys(f, {"window_min", "gap_min", "pca_components", "images", "airport", "takeoff_speed_mps"},
                   "featurize");
        if (f.contains("window_min")) c.featurize.window = Minutes(f.at("window_min").get<int>());
        if (f.contains("gap_min")) c.featurize.gap = Minutes(f.at("gap_min").get<int>());
        read(f, "pca_components", c.featurize.pca_components);
        read(f, "images", c.featurize.build_images);
        read(f, "airport", c.featurize.airport);
        read(f, "takeoff_speed_mps", c.featurize.atc.takeoff_speed_threshold);
    }
    if (c.featurize.window.count() <= 0 || c.featurize.gap.count() < 0)
        throw ParameterError("featurize: window must be positive and gap non-negative");
    if (j.contains("cleaning")) {
        const json& f = j.at("cleaning");
        check_keys(f, {"v_max_mps", "gap_threshold_s"}, "cleaning");
        read(f, "v_max_mps", c.cleaning.v_max);
        if (f.contains("gap_threshold_s")) c.cleaning.gap_threshold = Seconds(f.at("gap_threshold_s").get<long>());
    }
    if (j.contains("train")) c.eval.base = learn::train_config_from_json(j.at("train"));
    c.eval.seed = c.seed;
    c.eval.jobs = c.jobs;
    c.featurize.jobs = c.jobs;
    if (j.contains("eval")) {
        const json& e = j.at("eval");
        check_keys(e, {"models", "features", "test_fraction", "validation_fraction", "image_scaler", "split"}, "eval");
        if (e.contains("models")) {
            c.models.clear();
            for (const auto& m : e.at("models")) c.models.push_back(model_or_throw(m.get<std::string>()));
        }
        if (e.contains("features")) {
            c.combos.clear();
            for (const auto& f : e.at("features")) c.combos.push_back(combo_or_throw(f.get<std::string>()));
        }
        read(e, "test_fraction", c.eval.test_fraction);
        read(e, "validation_fraction", c.eval.validation_fraction);
        if (e.contains("image_scaler")) {
            const auto mode = e.at("image_scaler").get<std::string>();
            if (mode == "per_channel") c.eval.scaler_mode = ImageScaler::Mode::PerChannel;
            else if (mode == "global") c.eval.scaler_mode = ImageScaler::Mode::Global;
            else throw ParameterError("eval.image_scaler must be 'per_channel' or 'global'");
        }
        if (e.contains("split")) {
            const auto split = e.at("split").get<std::string>();
            if (split != "temporal" && split != "random")
                throw ParameterError("eval.split must be 'temporal' or 'random'");
            c.eval.random_split = split == "random";
        }
    }
    if (j.contains("sweep")) {
        const json& s = j.at("sweep");
        check_keys(s, {"enabled", "lengths", "gaps", "model", "features"}, "sweep");
        read(s, "enabled", c.run_sweep);
        read(s, "lengths", c.sweep_lengths);
        read(s, "gaps", c.sweep_gaps);
        if (s.contains("model")) c.sweep_model = model_or_throw(s.at("model").get<std::string>());
        if (s.contains("features")) c.sweep_combo = combo_or_throw(s.at("features").get<std::string>());
    }
    if (j.contains("importance")) {
        const json& s = j.at("importance");
        check_keys(s, {"features"}, "importance");
        if (s.contains("features")) c.importance_combo = combo_or_throw(s.at("features").get<std::string>());
    }
    read(j, "plot_data", c.plot_data);
    return c;
}

PipelineConfig load_pipeline_config(const fs::path& path) {
    require_file(path);
    std::ifstream in(path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ParameterError("config " + path.string() + " is not valid JSON: " + e.what());
    }
    return pipeline_config_from_json(j, path.parent_path());
}

namespace stage {

ScenarioReport synth(const ScenarioConfig& config, const fs::path& out) {
    const Scenario s = generate_scenario(config);
    const ZoneMap map = default_zone_map();
    write_scenario(out, s, map);
    write_text(out / "scenario.json", to_json(config).dump(1) + "\n");
    const ScenarioReport r = validate_scenario(s, map, config.airport);
    log_event("synth", "done",
              {{"out", out.string()},
               {"departures", r.departures},
               {"arrivals", r.arrivals},
               {"gps_points", r.gps_points},
               {"mean_delay", r.mean_delay},
               {"median_delay", r.median_delay},
               {"std_delay", r.std_delay},
               {"on_time_fraction", r.on_time_fraction},
               {"congestion_share", r.congestion_share},
               {"component_mismatches", r.component_mismatches}});
    return r;
}

RestoreReport ingest(const fs::path& data_dir, const fs::path& out, const CleaningConfig& cleaning) {
    const RawInputs raw = load_raw_inputs(data_dir);
    CleaningConfig cc = cleaning;
    cc.bbox = raw.zones.bbox;
    const IngestResult r = tarmac::ingest(raw, cc);
    fs::create_directories(out);
    write_with(out / files::kTrajectories, [&](std::ostream& o) { write_trajectories(o, r.trajectories, raw.zones); });
    const json report = to_json(r.report, raw);
    write_text(out / files::kIngestReport, report.dump(1) + "\n");
    log_event("ingest", "done", report);
    return r.report;
}

namespace {

std::vector<Trajectory> load_trajectories(const fs::path& work_dir) {
    const fs::path p = work_dir / files::kTrajectories;
    require_file(p, "ingest");
    std::ifstream in(p, std::ios::binary);
    return read_trajectories(in);
}

}  // namespace

FeatureSet featurize(const fs::path& data_dir, const fs::path& work_dir, const fs::path& out,
                     const FeaturizeOptions& options) {
    const auto trajectories = load_trajectories(work_dir);
    const FeatureSet fset = tarmac::featurize(trajectories, load_schedule(data_dir), load_weather(data_dir),
                                              load_zones(data_dir), options);
    write_feature_set(out, fset);
    log_event("featurize", "done",
              {{"out", out.string()},
               {"rows", fset.dataset.size()},
               {"columns", fset.dataset.features.cols()},
               {"weather_components", fset.weather_pca.output_dim()},
               {"images", fset.dataset.has_images()},
               {"window_min", options.window.count()},
               {"gap_min", options.gap.count()}});
    return fset;
}

TrainOutcome train(const fs::path& work_dir, const fs::path& out, ModelKind model, FeatureCombo combo,
                   const eval::EvalOptions& options, int search_trials) {
    if (!applicable(model, combo))
        throw ParameterError(std::string(learn::model_kind_name(model)) + " cannot use feature set '" +
                             std::string(combo_name(combo)) + "'");
    const FeatureSet fset = read_feature_set(work_dir, combo_uses_images(combo));
    const eval::SplitPlan plan = eval::holdout(fset.dataset.timestamps, options);
    const auto [fit_rows, val_rows] = eval::validation_tail(plan.folds.front().train, options.validation_fraction);
    const learn::Dataset train = eval::combo_dataset(fset, fit_rows, combo);
    const learn::Dataset validation = eval::combo_dataset(fset, val_rows, combo);
    const learn::Dataset test = eval::combo_dataset(fset, plan.folds.front().test, combo);

    learn::TrainConfig config = options.base;
    config.kind = model;
    config.seed = eval::cell_seed(options.seed, model, combo);
    fs::create_directories(out);
    const std::string stem = std::string(learn::model_kind_name(model)) + "_" + std::string(combo_name(combo));
    if (search_trials > 0) {
        require(validation.size() > 0, "search needs a validation partition");
        const auto result = learn::hyper_search(model, config, search_trials, config.seed,
                                                [&](const learn::TrainConfig& c) {
                                                    const auto m = learn::train_model(train, validation, c,
                                                                                      options.scaler_mode);
                                                    return learn::rmse(m.predict_departure(validation),
                                                                       validation.departure_delay());
                                                });
        write_with(out / ("trials_" + stem + ".csv"), [&](std::ostream& o) { learn::write_trial_log(o, model, result); });
        config = result.best_config();
        log_event("train", "search_done",
                  {{"trials", search_trials},
                   {"best_trial", result.best},
                   {"best_validation_rmse", result.trials[result.best].validation_rmse}});
    }
    const auto trained = learn::train_model(train, validation, config, options.scaler_mode);
    TrainOutcome outcome;
    const auto pred = trained.predict_departure(test);
    outcome.test_rmse = learn::rmse(pred, test.departure_delay());
    outcome.test_mae = learn::mae(pred, test.departure_delay());
    outcome.model_path = out / ("model_" + stem + ".json");
    learn::save_model(outcome.model_path, trained);
    log_event("train", "done",
              {{"model", outcome.model_path.string()},
               {"train_rows", train.size()},
               {"validation_rows", validation.size()},
               {"test_rows", test.size()},
               {"test_rmse", outcome.test_rmse},
               {"test_mae", outcome.test_mae}});
    return outcome;
}

eval::ComparisonGrid evaluate(const fs::path& work_dir, const fs::path& out, const std::vector<ModelKind>& models,
                              const std::vector<FeatureCombo>& combos, const eval::EvalOptions& options,
                              bool plot_data) {
    bool need_images = false;
    for (auto m : models)
        for (auto c : combos) need_images |= applicable(m, c) && combo_uses_images(c);
    const FeatureSet fset = read_feature_set(work_dir, need_images);
    eval::EvalOptions opts = options;
    opts.keep_models = true;
    const eval::ComparisonGrid grid = eval::run_comparison(fset, models, combos, opts);

    fs::create_directories(out / "models");
    write_with(out / "comparison.csv", [&](std::ostream& o) { eval::write_comparison_csv(o, grid); });
    write_text(out / "comparison_manifest.json", eval::comparison_manifest(grid).dump(1) + "\n");
    for (const auto& c : grid.cells)
        if (c.applicable && c.model_state)
            learn::save_model(out / "models" /
                                  (std::string(learn::model_kind_name(c.model)) + "_" + std::string(combo_name(c.combo)) +
                                   ".json"),
                              *c.model_state);
    if (plot_data)
        write_with(out / "comparison_plot.csv", [&](std::ostream& o) {
            eval::write_plot_header(o);
            eval::write_comparison_plot_rows(o, grid, fset);
        });
    for (const auto& c : grid.cells)
        if (c.applicable)
            log_event("eval", "cell",
                      {{"model", learn::model_kind_name(c.model)},
                       {"features", combo_name(c.combo)},
                       {"rmse", c.rmse},
                       {"mae", c.mae},
                       {"seconds", c.seconds}});
    return grid;
}

eval::SweepGrid sweep(const fs::path& data_dir, const fs::path& work_dir, const fs::path& out,
                      const std::vector<int>& lengths, const std::vector<int>& gaps, ModelKind model,
                      FeatureCombo combo, const FeaturizeOptions& featurize_options, const eval::EvalOptions& options,
                      bool plot_data) {
    if (!applicable(model, combo))
        throw ParameterError(std::string(learn::model_kind_name(model)) + " cannot use feature set '" +
                             std::string(combo_name(combo)) + "'");
    const auto trajectories = load_trajectories(work_dir);
    const auto flights = load_schedule(data_dir);
    const auto weather = load_weather(data_dir);
    const auto zones = load_zones(data_dir);
    const auto build = [&](Minutes window, Minutes gap) {
        FeaturizeOptions o = featurize_options;
        o.window = window;
        o.gap = gap;
        o.build_images = combo_uses_images(combo);
        return tarmac::featurize(trajectories, flights, weather, zones, o);
    };
    const eval::SweepGrid grid = eval::sweep_window_gap(build, lengths, gaps, model, combo, options);
    fs::create_directories(out);
    write_with(out / "sweep.csv", [&](std::ostream& o) { eval::write_sweep_csv(o, grid); });
    write_text(out / "sweep_manifest.json", eval::sweep_manifest(grid).dump(1) + "\n");
    if (plot_data)
        write_with(out / "sweep_plot.csv", [&](std::ostream& o) {
            eval::write_plot_header(o);
            eval::write_sweep_plot_rows(o, grid);
        });
    for (const auto& c : grid.cells)
        log_event("sweep", "cell",
                  {{"window_min", c.window.count()}, {"gap_min", c.gap.count()}, {"rmse", c.result.rmse},
                   {"mae", c.result.mae}});
    return grid;
}

std::vector<eval::Importance> importance(const fs::path& work_dir, const fs::path& out,
                                         const std::optional<fs::path>& model_file, FeatureCombo combo,
                                         const eval::EvalOptions& options) {
    learn::TrainedModel model;
    if (model_file) {
        require_file(*model_file, "train");
        model = learn::load_model(*model_file);
        if (model.kind() != ModelKind::Gbdt)
            throw ContractError("split-count importance needs a gbdt model; " + model_file->string() + " holds " +
                                std::string(learn::model_kind_name(model.kind())));
    } else {
        if (combo_uses_images(combo)) throw ParameterError("importance: gbdt cannot use image feature sets");
        const FeatureSet fset = read_feature_set(work_dir, false);
        const auto plan = eval::holdout(fset.dataset.timestamps, options);
        eval::EvalOptions opts = options;
        opts.keep_models = true;
        model = *eval::evaluate_cell(fset, plan.folds.front(), ModelKind::Gbdt, combo, opts).model_state;
    }
    const auto ranking = eval::feature_importance(model.gbdt, model.feature_names);
    fs::create_directories(out);
    write_with(out / "importance.csv", [&](std::ostream& o) { eval::write_importance_csv(o, ranking); });
    json top = json::array();
    for (std::size_t i = 0; i < std::min<std::size_t>(5, ranking.size()); ++i)
        top.push_back({{"feature", ranking[i].name}, {"splits", ranking[i].splits}});
    log_event("importance", "done", {{"trees", model.gbdt.trees.size()}, {"top", top}});
    return ranking;
}

std::vector<eval::ExplainabilityRow> analyze(const fs::path& work_dir, const fs::path& out) {
    const FeatureSet fset = read_feature_set(work_dir, false);
    const auto rows = eval::analyze_dataset(fset.dataset);
    const auto y = fset.dataset.departure_delay();
    std::vector<double> sorted = y;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    const double median = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    const auto on_time = static_cast<double>(std::count_if(y.begin(), y.end(), [](double v) { return v <= 0.0; }));
    const json stats{{"flights", n},
                     {"mean", learn::mean(y)},
                     {"median", median},
                     {"std", learn::population_std(y)},
                     {"on_time_fraction", on_time / static_cast<double>(n)}};
    fs::create_directories(out);
    write_with(out / "explainability.csv", [&](std::ostream& o) { eval::write_explainability_csv(o, rows); });
    write_text(out / "delay_stats.json", stats.dump(1) + "\n");
    log_event("analyze", "done", stats);
    return rows;
}

}  // namespace stage

void run_pipeline(const PipelineConfig& config, const fs::path& out) {
    fs::create_directories(out);
    const fs::path data = config.data_dir.empty() ? out / "data" : config.data_dir;
    const fs::path features = out / "features";
    const fs::path results = out / "results";
    if (config.data_dir.empty()) stage::synth(config.scenario, data);
    stage::ingest(data, features, config.cleaning);
    stage::featurize(data, features, features, config.featurize);
    stage::evaluate(features, results, config.models, config.combos, config.eval, config.plot_data);
    if (config.run_sweep)
        stage::sweep(data, features, results, config.sweep_lengths, config.sweep_gaps, config.sweep_model,
                     config.sweep_combo, config.featurize, config.eval, config.plot_data);
    // Reuse the comparison's model when it was trained on the same columns.
    const fs::path saved = results / "models" / ("gbdt_" + std::string(combo_name(config.importance_combo)) + ".json");
    stage::importance(features, results, fs::exists(saved) ? std::optional<fs::path>(saved) : std::nullopt,
                      config.importance_combo, config.eval);
    stage::analyze(features, results);
    log_event("pipeline", "done", {{"out", out.string()}});
}

}  // namespace tarmac

// Command-line driver: one subcommand per pipeline stage plus `pipeline`,
// which runs them all from a single config file.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "tarmac/error.hpp"
#include "tarmac/learn/search.hpp"
#include "tarmac/run.hpp"

namespace fs = std::filesystem;
using namespace tarmac;

namespace {

// Flags shared by every subcommand. Values left unset fall back to the
// config file, then to built-in defaults.
struct Common {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<int> jobs;
    std::string out;
    std::optional<int> window_min;
    std::optional<int> gap_min;
    std::string model;
    std::string features;
    bool plot_data = false;
    bool quiet = false;
};

void add_common(CLI::App* app, Common& c) {
    app->add_option("--config", c.config, "pipeline.json supplying defaults")->check(CLI::ExistingFile);
    app->add_option("--seed", c.seed, "master seed");
    app->add_option("--jobs", c.jobs, "worker threads")->check(CLI::PositiveNumber);
    app->add_option("--out", c.out, "output directory");
    app->add_option("--window-min", c.window_min, "observation window length (minutes)")->check(CLI::PositiveNumber);
    app->add_option("--gap-min", c.gap_min, "predicting gap (minutes)")->check(CLI::NonNegativeNumber);
    app->add_option("--model", c.model, "lr, mlp, gbdt or trajcnn (comma list for eval)");
    app->add_option("--features", c.features, "feature set, e.g. ref+w+atc (comma list for eval)");
    app->add_flag("--plot-data", c.plot_data, "also write long-format CSV for plotting");
    app->add_flag("-q,--quiet", c.quiet, "suppress the stderr event log");
}

// Resolves the shared flags against the config file.
PipelineConfig resolve(const Common& c) {
    PipelineConfig p = c.config.empty() ? PipelineConfig{} : load_pipeline_config(c.config);
    if (c.seed) {
        p.seed = *c.seed;
        p.scenario.seed = *c.seed;
        p.eval.seed = *c.seed;
    }
    if (c.jobs) p.jobs = p.eval.jobs = p.featurize.jobs = *c.jobs;
    if (c.window_min) p.featurize.window = Minutes(*c.window_min);
    if (c.gap_min) p.featurize.gap = Minutes(*c.gap_min);
    if (c.plot_data) p.plot_data = true;
    else if (c.config.empty()) p.plot_data = false;
    return p;
}

learn::ModelKind one_model(const Common& c, learn::ModelKind fallback) {
    if (c.model.empty()) return fallback;
    const auto list = parse_model_list(c.model);
    if (list.size() != 1) throw ParameterError("--model takes a single model here");
    return list.front();
}

FeatureCombo one_combo(const Common& c, FeatureCombo fallback) {
    if (c.features.empty()) return fallback;
    const auto list = parse_combo_list(c.features);
    if (list.size() != 1) throw ParameterError("--features takes a single feature set here");
    return list.front();
}

fs::path out_dir(const Common& c, const fs::path& fallback) { return c.out.empty() ? fallback : fs::path(c.out); }

// Values CLI11 cannot check at parse time are validated here; a failure is
// still a usage error.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <class Fn>
auto usage_checked(Fn&& fn) {
    try {
        return fn();
    } catch (const ParameterError& e) {
        throw UsageError(e.what());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Flight departure-delay prediction from tarmac trajectories"};
    app.require_subcommand(1);

    Common c_synth, c_ingest, c_feat, c_train, c_eval, c_sweep, c_imp, c_an, c_pipe;
    std::string data_dir, in_dir, model_file, lengths, gaps;
    int days = 0, flights_per_day = 0, search_trials = 0;
    std::optional<double> congestion, weather_coef;
    bool no_images = false, no_gps = false;

    auto* synth = app.add_subcommand("synth", "generate a synthetic airport scenario");
    add_common(synth, c_synth);
    synth->add_option("--days", days, "simulated days")->check(CLI::PositiveNumber);
    synth->add_option("--flights-per-day", flights_per_day, "departures per day")->check(CLI::PositiveNumber);
    synth->add_option("--congestion-coef", congestion, "minutes per aircraft above capacity");
    synth->add_option("--weather-coef", weather_coef, "minutes added in rain or fog");
    synth->add_flag("--no-gps", no_gps, "skip GPS traces (schedules and weather only)");

    auto* ingest = app.add_subcommand("ingest", "clean GPS, restore and label trajectories");
    add_common(ingest, c_ingest);
    ingest->add_option("--data", data_dir, "directory with gps.csv, schedule.csv, weather.csv, zones.json")
        ->required();

    auto* featurize = app.add_subcommand("featurize", "build the per-flight dataset and images");
    add_common(featurize, c_feat);
    featurize->add_option("--data", data_dir, "raw input directory")->required();
    featurize->add_option("--in", in_dir, "directory holding trajectories.csv (default: --out)");
    featurize->add_flag("--no-images", no_images, "skip the image tensor");

    auto* train = app.add_subcommand("train", "fit one model on the training partition");
    add_common(train, c_train);
    train->add_option("--in", in_dir, "featurize output directory")->required();
    train->add_option("--search-trials", search_trials, "random-search trials before the final fit (mlp, trajcnn)")
        ->check(CLI::NonNegativeNumber);

    auto* evaluate = app.add_subcommand("eval", "model x feature-set RMSE grid on the temporal holdout");
    add_common(evaluate, c_eval);
    evaluate->add_option("--in", in_dir, "featurize output directory")->required();

    auto* sweep = app.add_subcommand("sweep", "observation-window x gap sweep");
    add_common(sweep, c_sweep);
    sweep->add_option("--data", data_dir, "raw input directory")->required();
    sweep->add_option("--in", in_dir, "directory holding trajectories.csv")->required();
    sweep->add_option("--lengths", lengths, "window lengths in minutes, comma separated");
    sweep->add_option("--gaps", gaps, "gaps in minutes, comma separated");

    auto* importance = app.add_subcommand("importance", "gbdt split-count feature ranking");
    add_common(importance, c_imp);
    importance->add_option("--in", in_dir, "featurize output directory")->required();
    importance->add_option("--model-file", model_file, "saved gbdt model (trains one when omitted)");

    auto* analyze = app.add_subcommand("analyze", "delay statistics and per-feature explainability");
    add_common(analyze, c_an);
    analyze->add_option("--in", in_dir, "featurize output directory")->required();

    auto* pipeline = app.add_subcommand("pipeline", "run every stage from one config");
    add_common(pipeline, c_pipe);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    for (const Common* c : {&c_synth, &c_ingest, &c_feat, &c_train, &c_eval, &c_sweep, &c_imp, &c_an, &c_pipe})
        if (c->quiet) set_log_enabled(false);

    try {
        if (*synth) {
            const auto p = usage_checked([&] {
                PipelineConfig r = resolve(c_synth);
                if (days > 0) r.scenario.day_count = days;
                if (flights_per_day > 0) r.scenario.flights_per_day = flights_per_day;
                if (congestion) r.scenario.congestion_coefficient = *congestion;
                if (weather_coef) r.scenario.weather_coefficient = *weather_coef;
                if (no_gps) r.scenario.emit_gps = false;
                r.scenario.validate();
                return r;
            });
            stage::synth(p.scenario, out_dir(c_synth, "data"));
        } else if (*ingest) {
            const auto p = usage_checked([&] { return resolve(c_ingest); });
            stage::ingest(data_dir, out_dir(c_ingest, "features"), p.cleaning);
        } else if (*featurize) {
            auto p = usage_checked([&] { return resolve(c_feat); });
            if (no_images) p.featurize.build_images = false;
            const fs::path out = out_dir(c_feat, "features");
            stage::featurize(data_dir, in_dir.empty() ? out : fs::path(in_dir), out, p.featurize);
        } else if (*train) {
            const auto [p, model, combo] = usage_checked([&] {
                const PipelineConfig r = resolve(c_train);
                const auto m = one_model(c_train, learn::ModelKind::Gbdt);
                const auto f = one_combo(c_train, m == learn::ModelKind::TrajCnn ? FeatureCombo::RefImg
                                                                                   : FeatureCombo::RefWAtc);
                if (!applicable(m, f))
                    throw ParameterError(std::string(learn::model_kind_name(m)) + " cannot use '" +
                                         std::string(combo_name(f)) + "'");
                if (search_trials > 0) learn::search_ranges(m);  // throws for kinds without a space
                return std::tuple{r, m, f};
            });
            stage::train(in_dir, out_dir(c_train, in_dir), model, combo, p.eval, search_trials);
        } else if (*evaluate) {
            const auto [p, models, combos] = usage_checked([&] {
                const PipelineConfig r = resolve(c_eval);
                return std::tuple{r, c_eval.model.empty() ? r.models : parse_model_list(c_eval.model),
                                  c_eval.features.empty() ? r.combos : parse_combo_list(c_eval.features)};
            });
            stage::evaluate(in_dir, out_dir(c_eval, "results"), models, combos, p.eval, p.plot_data);
        } else if (*sweep) {
            const auto [p, ls, gs, model, combo] = usage_checked([&] {
                const PipelineConfig r = resolve(c_sweep);
                const auto m = one_model(c_sweep, r.sweep_model);
                const auto f = one_combo(c_sweep, r.sweep_combo);
                if (!applicable(m, f))
                    throw ParameterError(std::string(learn::model_kind_name(m)) + " cannot use '" +
                                         std::string(combo_name(f)) + "'");
                return std::tuple{r, lengths.empty() ? r.sweep_lengths : parse_int_list(lengths),
                                  gaps.empty() ? r.sweep_gaps : parse_int_list(gaps), m, f};
            });
            stage::sweep(data_dir, in_dir, out_dir(c_sweep, "results"), ls, gs, model, combo, p.featurize, p.eval,
                         p.plot_data);
        } else if (*importance) {
            const auto [p, combo] = usage_checked([&] {
                const PipelineConfig r = resolve(c_imp);
                return std::tuple{r, one_combo(c_imp, r.importance_combo)};
            });
            stage::importance(in_dir, out_dir(c_imp, "results"),
                              model_file.empty() ? std::nullopt : std::optional<fs::path>(model_file), combo, p.eval);
        } else if (*analyze) {
            stage::analyze(in_dir, out_dir(c_an, "results"));
        } else if (*pipeline) {
            const auto p = usage_checked([&] {
                if (c_pipe.config.empty()) throw ParameterError("pipeline needs --config");
                return resolve(c_pipe);
            });
            run_pipeline(p, out_dir(c_pipe, "run"));
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    } catch (const tarmac::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

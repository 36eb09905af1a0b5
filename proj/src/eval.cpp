#include "tarmac/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <ostream>

#include "tarmac/csv.hpp"
#include "tarmac/error.hpp"
#include "tarmac/learn/metrics.hpp"
#include "tarmac/parallel.hpp"
#include "tarmac/rng.hpp"

namespace tarmac::eval {

using learn::Dataset;
using learn::ModelKind;
using nlohmann::json;

std::vector<std::size_t> time_order(std::span<const Timestamp> times) {
    std::vector<std::size_t> order(times.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return times[a] < times[b]; });
    return order;
}

namespace {

Fold make_fold(std::span<const Timestamp> times, std::vector<std::size_t> train, std::vector<std::size_t> test) {
    Fold f;
    f.train = std::move(train);
    f.test = std::move(test);
    if (!f.test.empty()) {
        f.test_begin = times[f.test.front()];
        f.test_end = times[f.test.back()];
    }
    return f;
}

}  // namespace

SplitPlan temporal_holdout(std::span<const Timestamp> times, double test_fraction) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw ParameterError("temporal_holdout: test fraction must lie in (0, 1)");
    SplitPlan plan;
    plan.order = time_order(times);
    const std::size_t n = times.size();
    // The epsilon keeps exact fractions such as 2/7 of 7k rows from rounding up.
    const auto n_test = std::min<std::size_t>(
        n, static_cast<std::size_t>(std::ceil(test_fraction * static_cast<double>(n) - 1e-9)));
    const auto cut = plan.order.begin() + static_cast<std::ptrdiff_t>(n - n_test);
    plan.folds.push_back(make_fold(times, {plan.order.begin(), cut}, {cut, plan.order.end()}));
    return plan;
}

SplitPlan random_holdout(std::span<const Timestamp> times, double test_fraction, std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw ParameterError("random_holdout: test fraction must lie in (0, 1)");
    SplitPlan plan;
    plan.order = time_order(times);
    const std::size_t n = times.size();
    const auto n_test = std::min<std::size_t>(
        n, static_cast<std::size_t>(std::ceil(test_fraction * static_cast<double>(n) - 1e-9)));
    std::vector<std::size_t> picked = plan.order;
    Rng rng(seed);
    rng.shuffle(std::span<std::size_t>(picked));
    std::vector<char> is_test(n, 0);
    for (std::size_t i = 0; i < n_test; ++i) is_test[picked[i]] = 1;
    std::vector<std::size_t> train, test;
    for (std::size_t r : plan.order) (is_test[r] ? test : train).push_back(r);
    plan.folds.push_back(make_fold(times, std::move(train), std::move(test)));
    return plan;
}

SplitPlan holdout(std::span<const Timestamp> times, const EvalOptions& options) {
    return options.random_split ? random_holdout(times, options.test_fraction, derive_seed(options.seed, 0x5917))
                                : temporal_holdout(times, options.test_fraction);
}

SplitPlan temporal_kfold(std::span<const Timestamp> times, int k, bool forward_chaining) {
    if (k < 2) throw ParameterError("temporal_kfold: k must be at least 2");
    const std::size_t n = times.size();
    if (static_cast<std::size_t>(k) > n)
        throw ParameterError("temporal_kfold: k = " + std::to_string(k) + " exceeds the " + std::to_string(n) + " rows");
    SplitPlan plan;
    plan.order = time_order(times);
    const std::size_t base = n / static_cast<std::size_t>(k), extra = n % static_cast<std::size_t>(k);
    std::vector<std::size_t> bounds{0};
    for (std::size_t b = 0; b < static_cast<std::size_t>(k); ++b) bounds.push_back(bounds.back() + base + (b < extra));
    for (std::size_t b = 0; b < static_cast<std::size_t>(k); ++b) {
        std::vector<std::size_t> train, test;
        for (std::size_t i = 0; i < n; ++i) {
            const bool inside = i >= bounds[b] && i < bounds[b + 1];
            if (inside) test.push_back(plan.order[i]);
            else if (!forward_chaining || i < bounds[b]) train.push_back(plan.order[i]);
        }
        plan.folds.push_back(make_fold(times, std::move(train), std::move(test)));
    }
    return plan;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> validation_tail(const std::vector<std::size_t>& rows,
                                                                               double fraction) {
    if (rows.size() < 10 || fraction <= 0.0) return {rows, {}};
    const auto n_val = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(rows.size()) - 1e-9)));
    const auto cut = rows.begin() + static_cast<std::ptrdiff_t>(rows.size() - n_val);
    return {{rows.begin(), cut}, {cut, rows.end()}};
}

std::string fnv1a_hex(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::uint64_t cell_seed(std::uint64_t master, ModelKind model, FeatureCombo combo) {
    const std::string key = std::string(learn::model_kind_name(model)) + "/" + std::string(combo_name(combo));
    return derive_seed(master, std::stoull(fnv1a_hex(key), nullptr, 16));
}

namespace {

// Rows and columns of `d`, with images only when asked for.
Dataset slice(const Dataset& d, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols,
              bool images) {
    Dataset out;
    for (std::size_t c : cols) out.feature_names.push_back(d.feature_names[c]);
    out.features = Matrix(rows.size(), cols.size());
    out.targets = Matrix(0, d.targets.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::size_t r = rows[i];
        out.ids.push_back(d.ids[r]);
        out.timestamps.push_back(d.timestamps[r]);
        for (std::size_t k = 0; k < cols.size(); ++k) out.features(i, k) = d.features(r, cols[k]);
        out.targets.append_row(d.targets.row(r));
        if (images) out.images.push_back(d.images[r]);
    }
    return out;
}

}  // namespace

Dataset combo_dataset(const FeatureSet& fs, const std::vector<std::size_t>& rows, FeatureCombo combo) {
    const bool images = combo_uses_images(combo);
    if (images && !fs.dataset.has_images())
        throw ContractError(std::string("feature set '") + std::string(combo_name(combo)) +
                            "' needs images; featurize with images enabled");
    return slice(fs.dataset, rows, combo_columns(fs.groups, combo), images);
}

CellResult evaluate_cell(const FeatureSet& fs, const Fold& fold, ModelKind model, FeatureCombo combo,
                         const EvalOptions& options) {
    CellResult cell;
    cell.model = model;
    cell.combo = combo;
    cell.seed = cell_seed(options.seed, model, combo);
    learn::TrainConfig config = options.base;
    config.kind = model;
    config.seed = cell.seed;
    cell.config_hash = fnv1a_hex(learn::to_json(config).dump());
    if (!applicable(model, combo)) {
        cell.applicable = false;
        return cell;
    }
    const auto [fit_rows, val_rows] = validation_tail(fold.train, options.validation_fraction);
    const Dataset train = combo_dataset(fs, fit_rows, combo);
    const Dataset validation = combo_dataset(fs, val_rows, combo);
    const Dataset test = combo_dataset(fs, fold.test, combo);
    require(train.size() > 0 && test.size() > 0, "evaluate_cell: empty training or test partition");

    const auto start = std::chrono::steady_clock::now();
    auto trained = std::make_shared<learn::TrainedModel>(learn::train_model(train, validation, config, options.scaler_mode));
    const std::vector<double> pred = trained->predict_departure(test);
    cell.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const std::vector<double> truth = test.departure_delay();
    cell.rmse = learn::rmse(pred, truth);
    cell.mae = learn::mae(pred, truth);
    cell.train_rows = train.size();
    cell.validation_rows = validation.size();
    cell.test_rows = test.size();
    if (options.keep_models) cell.model_state = std::move(trained);
    return cell;
}

CellResult cross_validate(const FeatureSet& fs, const SplitPlan& plan, ModelKind model, FeatureCombo combo,
                          const EvalOptions& options) {
    CellResult total;
    std::size_t used = 0;
    for (const Fold& fold : plan.folds) {
        if (fold.train.size() < 10) continue;
        CellResult c = evaluate_cell(fs, fold, model, combo, options);
        if (!c.applicable) return c;
        if (used == 0) total = c;
        else {
            total.rmse += c.rmse;
            total.mae += c.mae;
            total.seconds += c.seconds;
            total.train_rows += c.train_rows;
            total.validation_rows += c.validation_rows;
            total.test_rows += c.test_rows;
        }
        ++used;
    }
    require(used > 0, "cross_validate: no usable folds");
    total.rmse /= static_cast<double>(used);
    total.mae /= static_cast<double>(used);
    total.model_state.reset();
    return total;
}

ComparisonGrid run_comparison(const FeatureSet& fs, const std::vector<ModelKind>& models,
                              const std::vector<FeatureCombo>& combos, const EvalOptions& options) {
    require(!models.empty() && !combos.empty(), "run_comparison: no models or feature sets requested");
    ComparisonGrid grid;
    grid.models = models;
    grid.combos = combos;
    grid.cells.resize(models.size() * combos.size());
    const SplitPlan plan = holdout(fs.dataset.timestamps, options);
    // Slowest kinds first so uneven cells spread over the workers.
    std::vector<std::size_t> queue(grid.cells.size());
    std::iota(queue.begin(), queue.end(), std::size_t{0});
    auto cost = [&](std::size_t i) {
        switch (models[i / combos.size()]) {
        case ModelKind::TrajCnn: return 0;
        case ModelKind::Mlp: return 1;
        case ModelKind::Gbdt: return 2;
        case ModelKind::LinearRegression: return 3;
        }
        return 4;
    };
    std::stable_sort(queue.begin(), queue.end(), [&](std::size_t a, std::size_t b) { return cost(a) < cost(b); });
    parallel_for(queue.size(), options.jobs, [&](std::size_t q) {
        const std::size_t i = queue[q];
        grid.cells[i] = evaluate_cell(fs, plan.folds.front(), models[i / combos.size()], combos[i % combos.size()], options);
    });
    return grid;
}

SweepGrid sweep_window_gap(const FeatureBuilder& build, const std::vector<int>& lengths_min,
                           const std::vector<int>& gaps_min, ModelKind model, FeatureCombo combo,
                           const EvalOptions& options) {
    if (lengths_min.empty() || gaps_min.empty()) throw ParameterError("sweep: window and gap lists must be non-empty");
    for (int l : lengths_min)
        if (l <= 0) throw ParameterError("sweep: window lengths must be positive");
    for (int g : gaps_min)
        if (g < 0) throw ParameterError("sweep: gaps must be non-negative");
    SweepGrid grid;
    grid.model = model;
    grid.combo = combo;
    for (int l : lengths_min)
        for (int g : gaps_min) {
            const FeatureSet fs = build(Minutes(l), Minutes(g));
            const SplitPlan plan = holdout(fs.dataset.timestamps, options);
            grid.cells.push_back({Minutes(l), Minutes(g), evaluate_cell(fs, plan.folds.front(), model, combo, options)});
        }
    return grid;
}

std::vector<Importance> feature_importance(const learn::GbdtModel& model, const std::vector<std::string>& names) {
    std::vector<Importance> out;
    for (std::size_t f = 0; f < model.split_counts.size(); ++f)
        out.push_back({f, f < names.size() ? names[f] : "f" + std::to_string(f), model.split_counts[f]});
    std::stable_sort(out.begin(), out.end(), [](const Importance& a, const Importance& b) { return a.splits > b.splits; });
    return out;
}

double explainability_rmse_categorical(std::span<const std::string> classes, std::span<const double> y) {
    require(classes.size() == y.size() && !y.empty(), "explainability: classes and labels must align and be non-empty");
    std::map<std::string_view, std::pair<double, std::size_t>> acc;
    for (std::size_t i = 0; i < y.size(); ++i) {
        auto& [sum, count] = acc[classes[i]];
        sum += y[i];
        ++count;
    }
    double sse = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const auto& [sum, count] = acc[classes[i]];
        const double e = y[i] - sum / static_cast<double>(count);
        sse += e * e;
    }
    return std::sqrt(sse / static_cast<double>(y.size()));
}

double explainability_rmse_numeric(std::span<const double> x, std::span<const double> y) {
    require(x.size() == y.size() && !y.empty(), "explainability: feature and labels must align and be non-empty");
    const double n = static_cast<double>(y.size());
    const double mx = learn::mean(x), my = learn::mean(y);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
    double sse = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double e = y[i] - (my + slope * (x[i] - mx));
        sse += e * e;
    }
    return std::sqrt(sse / n);
}

std::vector<ExplainabilityRow> analyze_dataset(const Dataset& d) {
    require(d.size() > 0, "analyze: empty dataset");
    const std::vector<double> y = d.departure_delay();
    std::vector<ExplainabilityRow> rows;
    auto categorical = [&](std::string name, const std::vector<std::string>& classes) {
        std::vector<std::string> sorted = classes;
        std::sort(sorted.begin(), sorted.end());
        const auto distinct = static_cast<std::size_t>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
        rows.push_back({std::move(name), true, distinct, explainability_rmse_categorical(classes, y)});
    };
    std::vector<std::string> all(d.size(), "all"), airline, weekday, hour;
    for (std::size_t r = 0; r < d.size(); ++r) {
        const std::string& id = d.ids[r];
        const auto digit = id.find_first_of("0123456789");
        airline.push_back(id.substr(0, digit == std::string::npos ? id.size() : digit));
        weekday.push_back(std::to_string(day_of_week(d.timestamps[r])));
        hour.push_back(std::to_string(static_cast<int>(minutes_since_midnight(d.timestamps[r]) / 60.0)));
    }
    categorical("all_flights", all);
    categorical("airline", airline);
    categorical("weekday", weekday);
    categorical("sched_out_hour", hour);
    for (std::size_t c = 0; c < d.features.cols(); ++c) {
        std::vector<double> x(d.size());
        for (std::size_t r = 0; r < d.size(); ++r) x[r] = d.features(r, c);
        rows.push_back({d.feature_names[c], false, 0, explainability_rmse_numeric(x, y)});
    }
    return rows;
}

void write_comparison_csv(std::ostream& out, const ComparisonGrid& grid) {
    csv::Writer w(out);
    w.field("model");
    for (auto c : grid.combos) w.field(combo_name(c));
    w.end_row();
    for (std::size_t m = 0; m < grid.models.size(); ++m) {
        w.field(learn::model_kind_name(grid.models[m]));
        for (std::size_t c = 0; c < grid.combos.size(); ++c) {
            const CellResult& cell = grid.at(m, c);
            if (cell.applicable) w.field(cell.rmse);
            else w.field(kNotApplicable);
        }
        w.end_row();
    }
}

void write_sweep_csv(std::ostream& out, const SweepGrid& grid) {
    csv::Writer w(out);
    w.row({"window_min", "gap_min", "rmse", "mae"});
    for (const auto& c : grid.cells) {
        w.field(static_cast<std::int64_t>(c.window.count())).field(static_cast<std::int64_t>(c.gap.count()));
        w.field(c.result.rmse).field(c.result.mae);
        w.end_row();
    }
}

void write_importance_csv(std::ostream& out, const std::vector<Importance>& ranking) {
    csv::Writer w(out);
    w.row({"rank", "feature_index", "feature", "split_count"});
    for (std::size_t i = 0; i < ranking.size(); ++i) {
        w.field(i + 1).field(ranking[i].feature).field(ranking[i].name).field(ranking[i].splits);
        w.end_row();
    }
}

void write_explainability_csv(std::ostream& out, const std::vector<ExplainabilityRow>& rows) {
    csv::Writer w(out);
    w.row({"feature", "kind", "classes", "rmse"});
    for (const auto& r : rows) {
        w.field(r.feature).field(r.categorical ? "categorical" : "numeric");
        if (r.categorical) w.field(r.classes);
        else w.field(std::string_view{});
        w.field(r.rmse);
        w.end_row();
    }
}

void write_plot_header(std::ostream& out) {
    csv::Writer(out).row({"experiment", "model", "features", "window_min", "gap_min", "metric", "value"});
}

namespace {

void plot_row(csv::Writer& w, std::string_view experiment, const CellResult& c, Minutes window, Minutes gap,
              std::string_view metric, double value) {
    w.field(experiment).field(learn::model_kind_name(c.model)).field(combo_name(c.combo));
    w.field(static_cast<std::int64_t>(window.count())).field(static_cast<std::int64_t>(gap.count()));
    w.field(metric).field(value);
    w.end_row();
}

json cell_json(const CellResult& c) {
    json j{{"model", learn::model_kind_name(c.model)}, {"features", combo_name(c.combo)}, {"applicable", c.applicable},
           {"seed", c.seed}, {"config_hash", c.config_hash}};
    if (c.applicable) {
        j["rmse"] = c.rmse;
        j["mae"] = c.mae;
        j["train_rows"] = c.train_rows;
        j["validation_rows"] = c.validation_rows;
        j["test_rows"] = c.test_rows;
        j["seconds"] = c.seconds;
    }
    return j;
}

}  // namespace

void write_comparison_plot_rows(std::ostream& out, const ComparisonGrid& grid, const FeatureSet& fs) {
    csv::Writer w(out);
    for (const auto& c : grid.cells) {
        if (!c.applicable) continue;
        plot_row(w, "comparison", c, fs.window, fs.gap, "rmse", c.rmse);
        plot_row(w, "comparison", c, fs.window, fs.gap, "mae", c.mae);
    }
}

void write_sweep_plot_rows(std::ostream& out, const SweepGrid& grid) {
    csv::Writer w(out);
    for (const auto& c : grid.cells) {
        plot_row(w, "sweep", c.result, c.window, c.gap, "rmse", c.result.rmse);
        plot_row(w, "sweep", c.result, c.window, c.gap, "mae", c.result.mae);
    }
}

json comparison_manifest(const ComparisonGrid& grid) {
    json cells = json::array();
    for (const auto& c : grid.cells) cells.push_back(cell_json(c));
    return {{"experiment", "comparison"}, {"not_applicable_marker", kNotApplicable}, {"cells", cells}};
}

json sweep_manifest(const SweepGrid& grid) {
    json cells = json::array();
    for (const auto& c : grid.cells) {
        json j = cell_json(c.result);
        j["window_min"] = c.window.count();
        j["gap_min"] = c.gap.count();
        cells.push_back(std::move(j));
    }
    return {{"experiment", "sweep"},
            {"model", learn::model_kind_name(grid.model)},
            {"features", combo_name(grid.combo)},
            {"cells", cells}};
}

}  // namespace tarmac::eval

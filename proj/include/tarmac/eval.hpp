#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "tarmac/learn/config.hpp"
#include "tarmac/learn/dataset.hpp"
#include "tarmac/learn/gbdt.hpp"
#include "tarmac/learn/model_io.hpp"
#include "tarmac/pipeline.hpp"
#include "tarmac/raster.hpp"
#include "tarmac/time.hpp"

namespace tarmac::eval {

// One train/test partition. Row indices are ascending in time.
struct Fold {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
    Timestamp test_begin{};  // earliest test timestamp
    Timestamp test_end{};    // latest test timestamp
};

struct SplitPlan {
    std::vector<std::size_t> order;  // all rows, time-sorted (ties by index)
    std::vector<Fold> folds;
};

std::vector<std::size_t> time_order(std::span<const Timestamp> times);

// The last ceil(test_fraction·n) rows in time order form the test set.
// Throws ParameterError unless 0 < test_fraction < 1.
SplitPlan temporal_holdout(std::span<const Timestamp> times, double test_fraction);

// ceil(test_fraction·n) rows drawn uniformly at random form the test set;
// both parts are listed in time order. Same preconditions as above.
SplitPlan random_holdout(std::span<const Timestamp> times, double test_fraction, std::uint64_t seed);

// k contiguous blocks in time order (sizes differ by at most one, larger
// blocks first); fold i tests on block i and trains on every other block,
// or only on earlier blocks with `forward_chaining` (fold 0 then has no
// training rows). Throws ParameterError for k < 2 or k > n.
SplitPlan temporal_kfold(std::span<const Timestamp> times, int k = 5, bool forward_chaining = false);

// Splits `rows` (time-sorted) into a leading fit part and the trailing
// `fraction` used for early stopping. Fewer than 10 rows keep everything for
// fitting.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> validation_tail(const std::vector<std::size_t>& rows,
                                                                               double fraction);

// 64-bit FNV-1a, printed as 16 hex digits.
std::string fnv1a_hex(std::string_view text);

struct EvalOptions {
    learn::TrainConfig base;  // per-kind parameters; kind and seed are set per cell
    std::uint64_t seed = 7;
    double test_fraction = 2.0 / 7.0;
    double validation_fraction = 0.2;
    ImageScaler::Mode scaler_mode = ImageScaler::Mode::PerChannel;
    bool random_split = false;  // temporal by default
    int jobs = 1;
    bool keep_models = false;
};

struct CellResult {
    learn::ModelKind model = learn::ModelKind::Gbdt;
    FeatureCombo combo = FeatureCombo::Ref;
    bool applicable = true;
    double rmse = 0.0;
    double mae = 0.0;
    std::uint64_t seed = 0;
    double seconds = 0.0;
    std::string config_hash;
    std::size_t train_rows = 0;
    std::size_t validation_rows = 0;
    std::size_t test_rows = 0;
    std::shared_ptr<learn::TrainedModel> model_state;  // set with keep_models
};

// The holdout the options ask for: temporal, or random with a seed derived
// from options.seed.
SplitPlan holdout(std::span<const Timestamp> times, const EvalOptions& options);

// Seed for a (model, combo) cell; independent of grid order and size.
std::uint64_t cell_seed(std::uint64_t master, learn::ModelKind model, FeatureCombo combo);

// The given rows restricted to the combination's columns, with images only
// for image combinations.
learn::Dataset combo_dataset(const FeatureSet& fs, const std::vector<std::size_t>& rows, FeatureCombo combo);

// Trains on the holdout's training rows (minus the validation tail) and
// reports departure-delay RMSE and MAE on its test rows. Images are
// min-max scaled with statistics from the fitting rows.
CellResult evaluate_cell(const FeatureSet& fs, const Fold& fold, learn::ModelKind model, FeatureCombo combo,
                         const EvalOptions& options);

// Mean test RMSE and MAE over the folds of a temporal k-fold plan; folds
// with fewer than 10 training rows are skipped.
CellResult cross_validate(const FeatureSet& fs, const SplitPlan& plan, learn::ModelKind model, FeatureCombo combo,
                          const EvalOptions& options);

struct ComparisonGrid {
    std::vector<learn::ModelKind> models;
    std::vector<FeatureCombo> combos;
    std::vector<CellResult> cells;  // model-major
    const CellResult& at(std::size_t model, std::size_t combo) const { return cells[model * combos.size() + combo]; }
};

// Every (model, combo) pair; inapplicable pairs are marked, not trained.
// Cells run on up to options.jobs threads.
ComparisonGrid run_comparison(const FeatureSet& fs, const std::vector<learn::ModelKind>& models,
                              const std::vector<FeatureCombo>& combos, const EvalOptions& options);

struct SweepCell {
    Minutes window{0};
    Minutes gap{0};
    CellResult result;
};

struct SweepGrid {
    learn::ModelKind model = learn::ModelKind::Gbdt;
    FeatureCombo combo = FeatureCombo::RefWAtc;
    std::vector<SweepCell> cells;  // window-major
};

using FeatureBuilder = std::function<FeatureSet(Minutes window, Minutes gap)>;

inline const std::vector<int> kDefaultSweepLengths{30, 60, 120};
inline const std::vector<int> kDefaultSweepGaps{60, 120, 240};

// Rebuilds features for each (window, gap) and evaluates one cell per pair.
// Throws ParameterError on an empty list.
SweepGrid sweep_window_gap(const FeatureBuilder& build, const std::vector<int>& lengths_min,
                           const std::vector<int>& gaps_min, learn::ModelKind model, FeatureCombo combo,
                           const EvalOptions& options);

struct Importance {
    std::size_t feature = 0;
    std::string name;
    std::size_t splits = 0;
};

// Descending by split count, ties by feature index. `names` may be empty.
std::vector<Importance> feature_importance(const learn::GbdtModel& model, const std::vector<std::string>& names = {});

// Predict each row by its class mean.
double explainability_rmse_categorical(std::span<const std::string> classes, std::span<const double> y);
// Predict each row from the least-squares line y = a + b·x; a constant x
// falls back to the mean.
double explainability_rmse_numeric(std::span<const double> x, std::span<const double> y);

struct ExplainabilityRow {
    std::string feature;
    bool categorical = false;
    std::size_t classes = 0;
    double rmse = 0.0;
};

// Departure-delay explainability of the airline (from the flight id),
// weekday, scheduled hour, missing-inbound flag and every numeric column.
std::vector<ExplainabilityRow> analyze_dataset(const learn::Dataset& d);

// model,<combo...> with "N/A" for inapplicable cells.
void write_comparison_csv(std::ostream& out, const ComparisonGrid& grid);
// window_min,gap_min,rmse,mae
void write_sweep_csv(std::ostream& out, const SweepGrid& grid);
void write_importance_csv(std::ostream& out, const std::vector<Importance>& ranking);
void write_explainability_csv(std::ostream& out, const std::vector<ExplainabilityRow>& rows);

// experiment,model,features,window_min,gap_min,metric,value
void write_plot_header(std::ostream& out);
void write_comparison_plot_rows(std::ostream& out, const ComparisonGrid& grid, const FeatureSet& fs);
void write_sweep_plot_rows(std::ostream& out, const SweepGrid& grid);

// Per-cell seeds, config hashes, row counts and runtimes.
nlohmann::json comparison_manifest(const ComparisonGrid& grid);
nlohmann::json sweep_manifest(const SweepGrid& grid);

inline constexpr const char* kNotApplicable = "N/A";

}  // namespace tarmac::eval

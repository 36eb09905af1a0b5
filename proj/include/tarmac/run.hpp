#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tarmac/eval.hpp"
#include "tarmac/learn/config.hpp"
#include "tarmac/pipeline.hpp"
#include "tarmac/synth.hpp"

namespace tarmac {

// One JSON object per line on stderr: {"stage":..,"event":..,<fields>}.
void log_event(std::string_view stage, std::string_view event, const nlohmann::json& fields = nlohmann::json::object());
void set_log_enabled(bool on);

// Missing keys keep their defaults; unknown keys are rejected so typos fail
// loudly.
ScenarioConfig scenario_config_from_json(const nlohmann::json& j, ScenarioConfig base = {});
nlohmann::json to_json(const ScenarioConfig& c);

// Everything one end-to-end reproduction needs. Stage directories under
// the output root: data/ (inputs, synthesized unless data_dir is set),
// features/ (ingest and featurize artifacts) and results/.
struct PipelineConfig {
    std::uint64_t seed = 7;
    int jobs = 1;
    std::filesystem::path data_dir;  // empty: synthesize from `scenario`
    ScenarioConfig scenario;

    FeaturizeOptions featurize;
    CleaningConfig cleaning;  // bbox comes from the zone map

    eval::EvalOptions eval;  // eval.base carries the per-model parameters
    std::vector<learn::ModelKind> models{learn::ModelKind::LinearRegression, learn::ModelKind::Mlp,
                                         learn::ModelKind::Gbdt, learn::ModelKind::TrajCnn};
    std::vector<FeatureCombo> combos{std::begin(kAllCombos), std::end(kAllCombos)};

    bool run_sweep = true;
    std::vector<int> sweep_lengths = eval::kDefaultSweepLengths;
    std::vector<int> sweep_gaps = eval::kDefaultSweepGaps;
    learn::ModelKind sweep_model = learn::ModelKind::Gbdt;
    FeatureCombo sweep_combo = FeatureCombo::RefWAtc;

    FeatureCombo importance_combo = FeatureCombo::RefWAtc;
    bool plot_data = true;
};

// Relative data_dir entries resolve against `base_dir`.
PipelineConfig pipeline_config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
PipelineConfig load_pipeline_config(const std::filesystem::path& path);

std::vector<learn::ModelKind> parse_model_list(std::string_view csv);
std::vector<FeatureCombo> parse_combo_list(std::string_view csv);
std::vector<int> parse_int_list(std::string_view csv);

namespace stage {

// Each stage reads and writes files only; the return values are for callers
// that want to inspect results in-process.
ScenarioReport synth(const ScenarioConfig& config, const std::filesystem::path& out);
RestoreReport ingest(const std::filesystem::path& data_dir, const std::filesystem::path& out,
                     const CleaningConfig& cleaning);
FeatureSet featurize(const std::filesystem::path& data_dir, const std::filesystem::path& work_dir,
                     const std::filesystem::path& out, const FeaturizeOptions& options);

struct TrainOutcome {
    std::filesystem::path model_path;
    double test_rmse = 0.0;
    double test_mae = 0.0;
};

// Fits one model on the holdout training rows, optionally after a random
// search of `search_trials` configurations scored on the validation tail.
TrainOutcome train(const std::filesystem::path& work_dir, const std::filesystem::path& out, learn::ModelKind model,
                   FeatureCombo combo, const eval::EvalOptions& options, int search_trials);

eval::ComparisonGrid evaluate(const std::filesystem::path& work_dir, const std::filesystem::path& out,
                              const std::vector<learn::ModelKind>& models, const std::vector<FeatureCombo>& combos,
                              const eval::EvalOptions& options, bool plot_data);

eval::SweepGrid sweep(const std::filesystem::path& data_dir, const std::filesystem::path& work_dir,
                      const std::filesystem::path& out, const std::vector<int>& lengths, const std::vector<int>& gaps,
                      learn::ModelKind model, FeatureCombo combo, const FeaturizeOptions& featurize,
                      const eval::EvalOptions& options, bool plot_data);

// Ranks split counts of a saved GBDT model, or of one trained on `combo`
// when no model file is given.
std::vector<eval::Importance> importance(const std::filesystem::path& work_dir, const std::filesystem::path& out,
                                         const std::optional<std::filesystem::path>& model_file, FeatureCombo combo,
                                         const eval::EvalOptions& options);

std::vector<eval::ExplainabilityRow> analyze(const std::filesystem::path& work_dir, const std::filesystem::path& out);

}  // namespace stage

// synth (unless data_dir is set), ingest, featurize, eval, sweep,
// importance and analyze.
void run_pipeline(const PipelineConfig& config, const std::filesystem::path& out);

}  // namespace tarmac

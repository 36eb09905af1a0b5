#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "tarmac/learn/config.hpp"
#include "tarmac/learn/dataset.hpp"
#include "tarmac/learn/gbdt.hpp"
#include "tarmac/learn/linreg.hpp"
#include "tarmac/learn/mlp.hpp"
#include "tarmac/learn/trajcnn.hpp"
#include "tarmac/raster.hpp"

namespace tarmac::learn {

inline constexpr int kModelFormatVersion = 1;

// One trained regressor of any kind together with the config and feature
// schema it was trained on. Only the member matching `config.kind` is used.
struct TrainedModel {
    TrainConfig config;
    std::vector<std::string> feature_names;
    LinearModel linreg;
    GbdtModel gbdt;
    MlpModel mlp;
    TrajCnnModel trajcnn;
    ImageScaler image_scaler;  // image network only; fitted on training images
    FitReport report;  // networks only; not serialized

    ModelKind kind() const { return config.kind; }
    // Departure delay in minutes for every row. Throws ContractError when the
    // dataset's feature columns differ from the training schema.
    std::vector<double> predict_departure(const Dataset& d) const;
};

// Linear regression and GBDT fit the departure-delay column; the networks fit
// all six labels. `validation` drives early stopping and may be empty.
// Images are passed unscaled; the image network fits its min-max scaler on
// the training images and applies it again at prediction time.
TrainedModel train_model(const Dataset& train, const Dataset& validation, const TrainConfig& config,
                         ImageScaler::Mode scaler_mode = ImageScaler::Mode::PerChannel);

// {"format": "tarmac-model", "version": 1, "kind", "config", "features", ...}
// with every real-valued array stored as base64 little-endian binary64.
nlohmann::json model_to_json(const TrainedModel& m);
// Throws EncodingError on unknown format or version, SchemaError on missing
// fields.
TrainedModel model_from_json(const nlohmann::json& j);

void save_model(const std::filesystem::path& path, const TrainedModel& m);
TrainedModel load_model(const std::filesystem::path& path);

}  // namespace tarmac::learn

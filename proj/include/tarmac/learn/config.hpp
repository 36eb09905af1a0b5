#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

namespace tarmac::learn {

enum class ModelKind { LinearRegression, Mlp, Gbdt, TrajCnn };

std::string_view model_kind_name(ModelKind kind);  // "lr", "mlp", "gbdt", "trajcnn"
std::optional<ModelKind> parse_model_kind(std::string_view name);

// Defaults are the best configuration reported for each model family.
struct GbdtParams {
    double learning_rate = 0.01;
    int n_estimators = 16000;
    int num_leaves = 39;
    int max_bins = 255;
    int min_data_in_leaf = 20;
    int patience = 200;
};

struct MlpParams {
    int n_epoch = 3000;
    int patience = 50;
    int n_layer = 2;
    int n_node = 1553;
    double learning_rate = 0.00976563;
    int batch_size = 64;
};

struct TrajCnnParams {
    int n_fc_layer = 1;
    int n_fc = 429;
    int n_conv_layer = 2;
    int n_conv = 1;
    int batch_size = 15;
    int n_epoch = 200;
    int patience = 20;
    double learning_rate = 3.48981e-05;
};

struct TrainConfig {
    ModelKind kind = ModelKind::Gbdt;
    GbdtParams gbdt;
    MlpParams mlp;
    TrajCnnParams trajcnn;
    std::uint64_t seed = 0;
    // Networks are trained on z-scored targets and de-scaled on output.
    bool standardize_targets = true;

    // Throws ParameterError naming the first non-positive setting.
    void validate() const;
};

nlohmann::json to_json(const TrainConfig& c);
// Missing keys keep their defaults.
TrainConfig train_config_from_json(const nlohmann::json& j);

}  // namespace tarmac::learn

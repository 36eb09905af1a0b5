#include "tarmac/learn/config.hpp"

#include "tarmac/error.hpp"

namespace tarmac::learn {

std::string_view model_kind_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::LinearRegression: return "lr";
        case ModelKind::Mlp: return "mlp";
        case ModelKind::Gbdt: return "gbdt";
        case ModelKind::TrajCnn: return "trajcnn";
    }
    return "?";
}

std::optional<ModelKind> parse_model_kind(std::string_view name) {
    if (name == "lr") return ModelKind::LinearRegression;
    if (name == "mlp") return ModelKind::Mlp;
    if (name == "gbdt") return ModelKind::Gbdt;
    if (name == "trajcnn") return ModelKind::TrajCnn;
    return std::nullopt;
}

void TrainConfig::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0)) throw ParameterError(std::string("train config: ") + name + " must be positive");
    };
    positive(gbdt.learning_rate, "gbdt.learning_rate");
    if (gbdt.n_estimators < 0) throw ParameterError("train config: gbdt.n_estimators must be nonnegative");
    if (gbdt.num_leaves < 2) throw ParameterError("train config: gbdt.num_leaves must be at least 2");
    if (gbdt.max_bins < 2 || gbdt.max_bins > 255) throw ParameterError("train config: gbdt.max_bins must be in [2, 255]");
    positive(gbdt.min_data_in_leaf, "gbdt.min_data_in_leaf");
    positive(gbdt.patience, "gbdt.patience");
    positive(mlp.n_epoch, "mlp.n_epoch");
    positive(mlp.patience, "mlp.patience");
    positive(mlp.n_layer, "mlp.n_layer");
    positive(mlp.n_node, "mlp.n_node");
    positive(mlp.learning_rate, "mlp.learning_rate");
    positive(mlp.batch_size, "mlp.batch_size");
    positive(trajcnn.n_fc_layer, "trajcnn.n_fc_layer");
    positive(trajcnn.n_fc, "trajcnn.n_fc");
    positive(trajcnn.n_conv_layer, "trajcnn.n_conv_layer");
    if (trajcnn.n_conv_layer > 4) throw ParameterError("train config: trajcnn.n_conv_layer must be at most 4");
    positive(trajcnn.n_conv, "trajcnn.n_conv");
    positive(trajcnn.batch_size, "trajcnn.batch_size");
    positive(trajcnn.n_epoch, "trajcnn.n_epoch");
    positive(trajcnn.patience, "trajcnn.patience");
    positive(trajcnn.learning_rate, "trajcnn.learning_rate");
}

nlohmann::json to_json(const TrainConfig& c) {
    nlohmann::json j;
    j["model"] = std::string(model_kind_name(c.kind));
    j["seed"] = c.seed;
    j["standardize_targets"] = c.standardize_targets;
    j["gbdt"] = {{"learning_rate", c.gbdt.learning_rate}, {"n_estimators", c.gbdt.n_estimators},
                 {"num_leaves", c.gbdt.num_leaves},       {"max_bins", c.gbdt.max_bins},
                 {"min_data_in_leaf", c.gbdt.min_data_in_leaf}, {"patience", c.gbdt.patience}};
    j["mlp"] = {{"n_epoch", c.mlp.n_epoch}, {"patience", c.mlp.patience},           {"n_layer", c.mlp.n_layer},
                {"n_node", c.mlp.n_node},   {"learning_rate", c.mlp.learning_rate}, {"batch_size", c.mlp.batch_size}};
    j["trajcnn"] = {{"n_fc_layer", c.trajcnn.n_fc_layer}, {"n_fc", c.trajcnn.n_fc},
                    {"n_conv_layer", c.trajcnn.n_conv_layer}, {"n_conv", c.trajcnn.n_conv},
                    {"batch_size", c.trajcnn.batch_size}, {"n_epoch", c.trajcnn.n_epoch},
                    {"patience", c.trajcnn.patience},     {"learning_rate", c.trajcnn.learning_rate}};
    return j;
}

namespace {

template <class T>
void read(const nlohmann::json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

TrainConfig train_config_from_json(const nlohmann::json& j) {
    TrainConfig c;
    if (j.contains("model")) {
        const auto kind = parse_model_kind(j.at("model").get<std::string>());
        if (!kind) throw ParameterError("train config: unknown model '" + j.at("model").get<std::string>() + "'");
        c.kind = *kind;
    }
    read(j, "seed", c.seed);
    read(j, "standardize_targets", c.standardize_targets);
    if (j.contains("gbdt")) {
        const auto& g = j.at("gbdt");
        read(g, "learning_rate", c.gbdt.learning_rate);
        read(g, "n_estimators", c.gbdt.n_estimators);
        read(g, "num_leaves", c.gbdt.num_leaves);
        read(g, "max_bins", c.gbdt.max_bins);
        read(g, "min_data_in_leaf", c.gbdt.min_data_in_leaf);
        read(g, "patience", c.gbdt.patience);
    }
    if (j.contains("mlp")) {
        const auto& m = j.at("mlp");
        read(m, "n_epoch", c.mlp.n_epoch);
        read(m, "patience", c.mlp.patience);
        read(m, "n_layer", c.mlp.n_layer);
        read(m, "n_node", c.mlp.n_node);
        read(m, "learning_rate", c.mlp.learning_rate);
        read(m, "batch_size", c.mlp.batch_size);
    }
    if (j.contains("trajcnn")) {
        const auto& t = j.at("trajcnn");
        read(t, "n_fc_layer", c.trajcnn.n_fc_layer);
        read(t, "n_fc", c.trajcnn.n_fc);
        read(t, "n_conv_layer", c.trajcnn.n_conv_layer);
        read(t, "n_conv", c.trajcnn.n_conv);
        read(t, "batch_size", c.trajcnn.batch_size);
        read(t, "n_epoch", c.trajcnn.n_epoch);
        read(t, "patience", c.trajcnn.patience);
        read(t, "learning_rate", c.trajcnn.learning_rate);
    }
    c.validate();
    return c;
}

}  // namespace tarmac::learn

#include "tarmac/learn/model_io.hpp"

#include <fstream>

#include "tarmac/base64.hpp"
#include "tarmac/error.hpp"

namespace tarmac::learn {

using nlohmann::json;

namespace {

std::vector<TrajImage> scale_images(const ImageScaler& s, const std::vector<TrajImage>& images) {
    std::vector<TrajImage> out;
    out.reserve(images.size());
    for (const auto& im : images) out.push_back(apply_scaler(s, im));
    return out;
}

}  // namespace

std::vector<double> TrainedModel::predict_departure(const Dataset& d) const {
    if (d.feature_names != feature_names)
        throw ContractError("model expects " + std::to_string(feature_names.size()) +
                            " feature columns in its training order; dataset has " +
                            std::to_string(d.feature_names.size()));
    switch (config.kind) {
    case ModelKind::LinearRegression:
        return linreg.predict(d.features);
    case ModelKind::Gbdt:
        return gbdt.predict(d.features);
    case ModelKind::Mlp: {
        const Matrix p = predict_mlp(mlp, d.features);
        std::vector<double> out(p.rows());
        for (std::size_t r = 0; r < p.rows(); ++r) out[r] = p(r, LabelVector::kDepartureDelay);
        return out;
    }
    case ModelKind::TrajCnn: {
        require(d.has_images(), "TrajCNN prediction needs images");
        const Matrix p = predict_trajcnn(trajcnn, scale_images(image_scaler, d.images), d.features);
        std::vector<double> out(p.rows());
        for (std::size_t r = 0; r < p.rows(); ++r) out[r] = p(r, LabelVector::kDepartureDelay);
        return out;
    }
    }
    return {};
}

TrainedModel train_model(const Dataset& train, const Dataset& validation, const TrainConfig& config,
                         ImageScaler::Mode scaler_mode) {
    config.validate();
    TrainedModel m;
    m.config = config;
    m.feature_names = train.feature_names;
    switch (config.kind) {
    case ModelKind::LinearRegression:
        m.linreg = fit_linreg(train.features, train.departure_delay());
        break;
    case ModelKind::Gbdt:
        m.gbdt = fit_gbdt(train, validation, config);
        break;
    case ModelKind::Mlp:
        m.mlp = fit_mlp(train, validation, config, &m.report);
        break;
    case ModelKind::TrajCnn: {
        require(train.has_images(), "TrajCNN training needs images");
        m.image_scaler = fit_scaler(train.images, scaler_mode);
        Dataset tr = train;
        tr.images = scale_images(m.image_scaler, train.images);
        Dataset va = validation;
        if (va.has_images()) va.images = scale_images(m.image_scaler, validation.images);
        m.trajcnn = fit_trajcnn(tr, va, config, &m.report);
        break;
    }
    }
    return m;
}

namespace {

std::string pack(std::span<const double> v) { return base64::encode_doubles(v); }

std::vector<double> unpack(const json& j, const char* key) {
    if (!j.contains(key)) throw SchemaError(std::string("model file: missing field '") + key + "'");
    return base64::decode_doubles(j.at(key).get<std::string>());
}

const json& need(const json& j, const char* key) {
    if (!j.contains(key)) throw SchemaError(std::string("model file: missing field '") + key + "'");
    return j.at(key);
}

json standardizer_json(const Standardizer& s) { return {{"mean", pack(s.mean)}, {"scale", pack(s.scale)}}; }

Standardizer standardizer_from(const json& j) {
    Standardizer s;
    s.mean = unpack(j, "mean");
    s.scale = unpack(j, "scale");
    if (s.mean.size() != s.scale.size()) throw SchemaError("model file: standardizer size mismatch");
    return s;
}

json gbdt_json(const GbdtModel& g) {
    json trees = json::array();
    for (const auto& t : g.trees) {
        std::vector<int> feature, left, right;
        std::vector<double> threshold, gain, value;
        for (const auto& n : t.nodes) {
            feature.push_back(n.feature);
            left.push_back(n.left);
            right.push_back(n.right);
            threshold.push_back(n.threshold);
            gain.push_back(n.gain);
            value.push_back(n.value);
        }
        trees.push_back({{"feature", feature},
                         {"left", left},
                         {"right", right},
                         {"threshold", pack(threshold)},
                         {"gain", pack(gain)},
                         {"value", pack(value)}});
    }
    const double head[2] = {g.initial_prediction, g.learning_rate};
    return {{"initial_and_rate", pack(head)},
            {"split_counts", g.split_counts},
            {"best_rounds", g.best_rounds},
            {"train_rmse", pack(g.train_rmse)},
            {"validation_rmse", pack(g.validation_rmse)},
            {"trees", trees}};
}

GbdtModel gbdt_from(const json& j, std::size_t n_features) {
    GbdtModel g;
    const auto head = unpack(j, "initial_and_rate");
    if (head.size() != 2) throw SchemaError("model file: bad gbdt header");
    g.initial_prediction = head[0];
    g.learning_rate = head[1];
    g.split_counts = need(j, "split_counts").get<std::vector<std::size_t>>();
    g.best_rounds = need(j, "best_rounds").get<int>();
    g.train_rmse = unpack(j, "train_rmse");
    g.validation_rmse = unpack(j, "validation_rmse");
    for (const auto& jt : need(j, "trees")) {
        const auto feature = need(jt, "feature").get<std::vector<int>>();
        const auto left = need(jt, "left").get<std::vector<int>>();
        const auto right = need(jt, "right").get<std::vector<int>>();
        const auto threshold = unpack(jt, "threshold");
        const auto gain = unpack(jt, "gain");
        const auto value = unpack(jt, "value");
        const std::size_t n = feature.size();
        if (n == 0 || left.size() != n || right.size() != n || threshold.size() != n || gain.size() != n ||
            value.size() != n)
            throw SchemaError("model file: inconsistent tree arrays");
        RegressionTree t;
        for (std::size_t i = 0; i < n; ++i) {
            TreeNode node{feature[i], threshold[i], gain[i], left[i], right[i], value[i]};
            if (!node.is_leaf()) {
                const auto in_range = [&](int c) { return c > static_cast<int>(i) && c < static_cast<int>(n); };
                if (static_cast<std::size_t>(node.feature) >= n_features || !in_range(node.left) ||
                    !in_range(node.right))
                    throw SchemaError("model file: tree node out of range");
            }
            t.nodes.push_back(node);
        }
        g.trees.push_back(std::move(t));
    }
    if (g.split_counts.size() != n_features) throw SchemaError("model file: split_counts size mismatch");
    return g;
}

}  // namespace

json model_to_json(const TrainedModel& m) {
    json j;
    j["format"] = "tarmac-model";
    j["version"] = kModelFormatVersion;
    j["kind"] = std::string(model_kind_name(m.config.kind));
    j["config"] = to_json(m.config);
    j["features"] = m.feature_names;
    switch (m.config.kind) {
    case ModelKind::LinearRegression: {
        const double b[1] = {m.linreg.intercept};
        j["linreg"] = {{"weights", pack(m.linreg.weights)}, {"intercept", pack(b)}};
        break;
    }
    case ModelKind::Gbdt:
        j["gbdt"] = gbdt_json(m.gbdt);
        break;
    case ModelKind::Mlp:
        j["mlp"] = {{"sizes", m.mlp.stack.sizes()},
                    {"params", pack(m.mlp.params)},
                    {"input", standardizer_json(m.mlp.input)},
                    {"output", standardizer_json(m.mlp.output)}};
        break;
    case ModelKind::TrajCnn:
        j["trajcnn"] = {{"params", pack(m.trajcnn.params)},
                        {"input", standardizer_json(m.trajcnn.input)},
                        {"output", standardizer_json(m.trajcnn.output)},
                        {"image_scaler",
                         {{"mode", m.image_scaler.mode == ImageScaler::Mode::Global ? "global" : "per_channel"},
                          {"min", pack(m.image_scaler.min)},
                          {"max", pack(m.image_scaler.max)}}}};
        break;
    }
    return j;
}

TrainedModel model_from_json(const json& j) {
    if (!j.is_object() || j.value("format", "") != "tarmac-model")
        throw EncodingError("not a tarmac model file");
    const int version = j.value("version", -1);
    if (version != kModelFormatVersion)
        throw EncodingError("unsupported model file version " + std::to_string(version));
    TrainedModel m;
    m.config = train_config_from_json(need(j, "config"));
    const auto kind = parse_model_kind(need(j, "kind").get<std::string>());
    if (!kind || *kind != m.config.kind) throw SchemaError("model file: kind disagrees with config");
    m.feature_names = need(j, "features").get<std::vector<std::string>>();
    const std::size_t d = m.feature_names.size();
    switch (m.config.kind) {
    case ModelKind::LinearRegression: {
        const json& jl = need(j, "linreg");
        m.linreg.weights = unpack(jl, "weights");
        const auto b = unpack(jl, "intercept");
        if (m.linreg.weights.size() != d || b.size() != 1) throw SchemaError("model file: bad linreg arrays");
        m.linreg.intercept = b[0];
        break;
    }
    case ModelKind::Gbdt:
        m.gbdt = gbdt_from(need(j, "gbdt"), d);
        break;
    case ModelKind::Mlp: {
        const json& jm = need(j, "mlp");
        const auto sizes = need(jm, "sizes").get<std::vector<std::size_t>>();
        if (sizes.size() < 2 || sizes.front() != d) throw SchemaError("model file: bad mlp layer sizes");
        m.mlp.stack = DenseStack(sizes);
        m.mlp.params = unpack(jm, "params");
        m.mlp.input = standardizer_from(need(jm, "input"));
        m.mlp.output = standardizer_from(need(jm, "output"));
        if (m.mlp.params.size() != m.mlp.stack.parameter_count()) throw SchemaError("model file: mlp parameter count");
        break;
    }
    case ModelKind::TrajCnn: {
        const json& jc = need(j, "trajcnn");
        const auto& p = m.config.trajcnn;
        m.trajcnn.net = TrajCnnNet(p.n_conv_layer, p.n_conv, d, p.n_fc_layer, p.n_fc, LabelVector::kSize);
        m.trajcnn.params = unpack(jc, "params");
        m.trajcnn.input = standardizer_from(need(jc, "input"));
        m.trajcnn.output = standardizer_from(need(jc, "output"));
        const json& js = need(jc, "image_scaler");
        const auto lo = unpack(js, "min"), hi = unpack(js, "max");
        if (lo.size() != kImageChannels || hi.size() != kImageChannels)
            throw SchemaError("model file: image scaler needs one range per channel");
        m.image_scaler.mode = need(js, "mode").get<std::string>() == "global" ? ImageScaler::Mode::Global
                                                                               : ImageScaler::Mode::PerChannel;
        std::copy(lo.begin(), lo.end(), m.image_scaler.min.begin());
        std::copy(hi.begin(), hi.end(), m.image_scaler.max.begin());
        if (m.trajcnn.params.size() != m.trajcnn.net.parameter_count())
            throw SchemaError("model file: trajcnn parameter count");
        break;
    }
    }
    return m;
}

void save_model(const std::filesystem::path& path, const TrainedModel& m) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write model file " + path.string());
    out << model_to_json(m).dump(1) << '\n';
    if (!out) throw IoError("failed writing model file " + path.string());
}

TrainedModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read model file " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw EncodingError("model file " + path.string() + " is not valid JSON: " + e.what());
    }
    return model_from_json(j);
}

}  // namespace tarmac::learn

#include "tarmac/learn/search.hpp"

#include <chrono>
#include <cmath>
#include <ostream>

#include "tarmac/csv.hpp"
#include "tarmac/error.hpp"

namespace tarmac::learn {

namespace {

int nint(double x) { return static_cast<int>(std::lround(x)); }

}  // namespace

std::vector<ParamRange> search_ranges(ModelKind kind) {
    switch (kind) {
    case ModelKind::Mlp:
        return {{"n_node", 4, 4096}, {"n_layer", 1, 11}, {"learning_rate", std::exp2(-17.0), std::exp2(-2.0)}};
    case ModelKind::TrajCnn:
        return {{"n_fc_layer", 1, 2},   {"n_fc", 2, 2048},      {"n_conv_layer", 1, 4},
                {"n_conv", 2, 64},      {"batch_size", 2, 256}, {"learning_rate", 1e-6, 1e-3}};
    default:
        throw ParameterError("no hyper-parameter search space for model '" + std::string(model_kind_name(kind)) + "'");
    }
}

TrainConfig sample_config(ModelKind kind, const TrainConfig& base, Rng& rng) {
    TrainConfig c = base;
    c.kind = kind;
    switch (kind) {
    case ModelKind::Mlp:
        c.mlp.n_node = nint(std::exp2(rng.uniform(2.0, 12.0)));
        c.mlp.n_layer = nint(rng.uniform(1.0, 11.0));
        c.mlp.learning_rate = std::exp2(-rng.uniform(2.0, 17.0));
        break;
    case ModelKind::TrajCnn:
        c.trajcnn.n_fc_layer = nint(rng.uniform(1.0, 2.0));
        c.trajcnn.n_fc = nint(std::exp2(rng.uniform(1.0, 11.0)));
        c.trajcnn.n_conv_layer = nint(rng.uniform(1.0, 4.0));
        c.trajcnn.n_conv = nint(std::exp2(rng.uniform(1.0, 6.0)));
        c.trajcnn.batch_size = nint(std::exp2(rng.uniform(1.0, 8.0)));
        c.trajcnn.learning_rate = std::pow(10.0, -rng.uniform(3.0, 6.0));
        break;
    default:
        search_ranges(kind);  // throws
    }
    return c;
}

std::vector<double> sampled_values(ModelKind kind, const TrainConfig& c) {
    switch (kind) {
    case ModelKind::Mlp:
        return {double(c.mlp.n_node), double(c.mlp.n_layer), c.mlp.learning_rate};
    case ModelKind::TrajCnn:
        return {double(c.trajcnn.n_fc_layer), double(c.trajcnn.n_fc),        double(c.trajcnn.n_conv_layer),
                double(c.trajcnn.n_conv),     double(c.trajcnn.batch_size), c.trajcnn.learning_rate};
    default:
        search_ranges(kind);
        return {};
    }
}

SearchResult hyper_search(ModelKind kind, const TrainConfig& base, int budget, std::uint64_t seed,
                          const TrialEvaluator& evaluate) {
    if (budget <= 0) throw ParameterError("hyper_search: budget must be positive");
    search_ranges(kind);
    Rng rng(seed);
    SearchResult result;
    for (int i = 0; i < budget; ++i) {
        Trial t;
        t.index = i;
        t.config = sample_config(kind, base, rng);
        t.config.seed = derive_seed(seed, static_cast<std::uint64_t>(i) + 100);
        const auto start = std::chrono::steady_clock::now();
        t.validation_rmse = evaluate(t.config);
        t.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        result.trials.push_back(std::move(t));
        if (result.trials.back().validation_rmse < result.trials[result.best].validation_rmse)
            result.best = result.trials.size() - 1;
    }
    return result;
}

void write_trial_log(std::ostream& out, ModelKind kind, const SearchResult& result) {
    csv::Writer w(out);
    std::vector<std::string> header{"trial"};
    for (const auto& r : search_ranges(kind)) header.push_back(r.name);
    header.push_back("validation_rmse");
    header.push_back("seconds");
    w.row(header);
    for (const auto& t : result.trials) {
        w.field(t.index);
        for (double v : sampled_values(kind, t.config)) w.field(v);
        w.field(t.validation_rmse);
        w.field(t.seconds);
        w.end_row();
    }
}

}  // namespace tarmac::learn

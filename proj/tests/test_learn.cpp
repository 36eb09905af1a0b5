#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "support/fixtures.hpp"
#include "support/gradcheck.hpp"
#include "support/oracles.hpp"
#include "tarmac/error.hpp"
#include "tarmac/learn/adam.hpp"
#include "tarmac/learn/gbdt.hpp"
#include "tarmac/learn/linreg.hpp"
#include "tarmac/learn/metrics.hpp"
#include "tarmac/learn/mlp.hpp"
#include "tarmac/learn/model_io.hpp"
#include "tarmac/learn/search.hpp"
#include "tarmac/learn/standardize.hpp"
#include "tarmac/learn/trajcnn.hpp"
#include "tarmac/rng.hpp"
#include "tarmac/simd/kernels.hpp"

using namespace tarmac;
using namespace tarmac::learn;

namespace {

// Rows with a planted signal: y = 3·x0 − 2·x1 + noise, all six targets
// derived from it.
Dataset toy_dataset(std::size_t n, std::uint64_t seed, bool images = false) {
    Rng rng(seed);
    Dataset d;
    d.feature_names = {"x0", "x1", "x2"};
    d.features = Matrix(n, 3);
    d.targets = Matrix(n, LabelVector::kSize);
    for (std::size_t r = 0; r < n; ++r) {
        d.ids.push_back("F" + std::to_string(r));
        d.timestamps.push_back(from_epoch_seconds(1'672'660'800 + 600 * static_cast<std::int64_t>(r)));
        for (std::size_t c = 0; c < 3; ++c) d.features(r, c) = rng.normal();
        const double y = 3 * d.features(r, 0) - 2 * d.features(r, 1) + 0.1 * rng.normal();
        for (std::size_t c = 0; c < kDelayComponents; ++c) d.targets(r, c) = y / kDelayComponents;
        d.targets(r, LabelVector::kDepartureDelay) = y;
        if (images) {
            TrajImage img;
            img.flight_id = d.ids.back();
            for (std::size_t i = 0; i < 40; ++i) img.values[rng.below(kImageValues)] = rng.uniform();
            d.images.push_back(img);
        }
    }
    return d;
}

Matrix column(std::span<const double> v) {
    Matrix m(v.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
    return m;
}

}  // namespace

TEST_SUITE("learn") {

TEST_CASE("error metrics") {
    const std::vector<double> zero{0, 0}, truth{3, 4};
    CHECK(rmse(truth, truth) == 0.0);
    CHECK(rmse(zero, truth) == doctest::Approx(std::sqrt(12.5)));
    CHECK(mae(zero, truth) == 3.5);
    const std::vector<double> v{1, 5, 2, 8, -3};
    const std::vector<double> flat(5, mean(v));
    CHECK(rmse(flat, v) == doctest::Approx(population_std(v)).epsilon(1e-14));
    CHECK(population_std(v) == doctest::Approx(oracle::population_std(v)).epsilon(1e-14));
    CHECK_THROWS_AS(rmse(zero, v), ContractError);
    CHECK_THROWS_AS(mean(std::vector<double>{}), ContractError);
}

TEST_CASE("standardizer inverts and handles constant columns") {
    Matrix x(3, 2);
    x(0, 0) = 1; x(1, 0) = 2; x(2, 0) = 3;
    x(0, 1) = x(1, 1) = x(2, 1) = 5;
    const Standardizer s = Standardizer::fit(x);
    CHECK(s.scale[1] == 0.0);
    const Matrix z = s.transform(x);
    CHECK(z(0, 1) == 0.0);
    CHECK(z(2, 0) == doctest::Approx(std::sqrt(1.5)));
    std::vector<double> back(2);
    s.inverse_row(z.row(2), back);
    CHECK(back[0] == doctest::Approx(3.0));
    CHECK(back[1] == 5.0);
}

TEST_CASE("linear regression matches an independent solver") {
    std::vector<double> xs{0, 1, 2, 3, 4}, ys;
    for (double v : xs) ys.push_back(2 * v + 1);
    const LinearModel line = fit_linreg(column(xs), ys);
    CHECK(line.weights[0] == doctest::Approx(2.0));
    CHECK(line.intercept == doctest::Approx(1.0));
    CHECK(rmse(line.predict(column(xs)), ys) < 1e-7);

    const std::vector<double> ones(4, 1.0), y{3, 9, 1, 7};
    const LinearModel flat = fit_linreg(column(ones), y);
    CHECK(flat.weights[0] == 0.0);
    CHECK(flat.intercept == doctest::Approx(5.0));

    Rng rng(12);
    for (int trial = 0; trial < 5; ++trial) {
        const std::size_t n = 40, d = 2 + rng.below(5);
        Matrix x(n, d);
        std::vector<double> target(n);
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < d; ++c) x(r, c) = rng.normal(c, 1 + c);
            target[r] = rng.normal(0, 5) + x(r, 0);
        }
        const LinearModel m = fit_linreg(x, target);
        const auto ref = oracle::least_squares(x, target);
        CHECK(m.intercept == doctest::Approx(ref[0]).epsilon(1e-6));
        for (std::size_t c = 0; c < d; ++c) CHECK(m.weights[c] == doctest::Approx(ref[c + 1]).epsilon(1e-6));
    }
}

TEST_CASE("dense stack layout and zero network") {
    const DenseStack s({4, 3, 2});
    CHECK(s.parameter_count() == 4 * 3 + 3 + 3 * 2 + 2);
    CHECK(s.bias_offset(0) == 12);
    CHECK(s.weight_offset(1) == 15);
    MlpModel m = make_mlp(4, 2, 8, 6, 1);
    std::fill(m.params.begin(), m.params.end(), 0.0);
    const Matrix pred = predict_mlp(m, Matrix(3, 4, 1.5));
    for (double v : pred.data()) CHECK(v == 0.0);
}

TEST_CASE("finite differences step around a kink") {
    // relu(p0) + p1^2 with p0 just right of the kink: a 1e-5 step straddles it.
    const auto loss = [](std::span<const double> p) { return std::max(p[0], 0.0) + p[1] * p[1]; };
    const std::vector<double> at{3e-6, 0.5};
    const auto naive = oracle::numeric_gradient(loss, at, 1e-5);
    CHECK(naive[0] == doctest::Approx(0.65));
    std::size_t shrunk = 0;
    const auto smooth = oracle::smooth_numeric_gradient(loss, at, 1e-5, &shrunk);
    CHECK(smooth[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(smooth[1] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(shrunk == 1);
}

TEST_CASE("analytic gradients agree with finite differences") {
    for (std::uint64_t seed = 100; seed < 104; ++seed) {
        const auto a = gradcheck::mlp(seed);
        CHECK(a.max_relative_error < gradcheck::kTolerance);
        const auto b = gradcheck::trajcnn(seed);
        CHECK(b.max_relative_error < gradcheck::kTolerance);
    }
}

TEST_CASE("vector kernels do not change network outputs") {
    if (!simd::isa_available(simd::Isa::Avx2)) return;
    const simd::Isa before = simd::active_isa();
    MlpModel m = make_mlp(5, 2, 33, 6, 3);
    Rng rng(3);
    Matrix x(7, 5);
    for (double& v : x.data()) v = rng.normal();
    simd::set_active_isa(simd::Isa::Scalar);
    const Matrix a = predict_mlp(m, x);
    simd::set_active_isa(simd::Isa::Avx2);
    const Matrix b = predict_mlp(m, x);
    simd::set_active_isa(before);
    for (std::size_t i = 0; i < a.data().size(); ++i) CHECK(b.data()[i] == doctest::Approx(a.data()[i]).epsilon(1e-12));
}

TEST_CASE("convolution matches a direct 'same' convolution") {
    const TrajCnnNet net(2, 2, 1, 1, 4, 6);
    std::vector<double> params(net.parameter_count());
    net.initialize(params, 5);
    Rng rng(5);
    for (double& p : params) p += 0.1 * rng.normal();
    std::vector<double> in(kImageChannels * kGridSize * kGridSize);
    for (double& v : in) v = rng.normal();
    const auto got = net.conv_block_output(params, 0, in);
    const std::size_t s = kGridSize, ci = kImageChannels;
    const std::size_t bias_at = 2 * ci * 9;
    for (std::size_t f = 0; f < 2; ++f)
        for (std::size_t r = 0; r < s; ++r)
            for (std::size_t c = 0; c < s; ++c) {
                double acc = params[bias_at + f];
                for (std::size_t ch = 0; ch < ci; ++ch)
                    for (int dr = -1; dr <= 1; ++dr)
                        for (int dc = -1; dc <= 1; ++dc) {
                            const long rr = static_cast<long>(r) + dr, cc = static_cast<long>(c) + dc;
                            if (rr < 0 || cc < 0 || rr >= static_cast<long>(s) || cc >= static_cast<long>(s)) continue;
                            acc += params[((f * ci + ch) * 3 + (dr + 1)) * 3 + (dc + 1)] * in[(ch * s + rr) * s + cc];
                        }
                CHECK(got[(f * s + r) * s + c] == doctest::Approx(acc).epsilon(1e-12));
            }
}

TEST_CASE("delta kernels pass images through and pooling keeps maxima") {
    const TrajCnnNet net(2, 1, 1, 1, 4, 6);
    CHECK(net.spatial(1) == 14);
    CHECK(net.spatial(2) == 7);
    CHECK(net.flattened_dim() == 49);
    std::vector<double> params(net.parameter_count(), 0.0);
    params[4] = 1.0;                        // block 0: centre tap on channel 0
    params[kImageChannels * 9 + 1 + 4] = 1.0;  // block 1: centre tap
    Rng rng(6);
    std::vector<double> in(kImageChannels * kGridSize * kGridSize);
    for (double& v : in) v = rng.uniform();
    const auto same = net.conv_block_output(params, 0, in);
    for (std::size_t i = 0; i < same.size(); ++i) CHECK(same[i] == in[i]);

    TrajImage img;
    img.values[TrajImage::index(0, 0, 0)] = 1;
    img.values[TrajImage::index(0, 1, 0)] = 2;
    img.values[TrajImage::index(1, 0, 0)] = 3;
    img.values[TrajImage::index(1, 1, 0)] = 4;
    const auto flat = net.conv_forward(params, img.values, nullptr);
    REQUIRE(flat.size() == 49);
    CHECK(flat[0] == 4.0);
    for (std::size_t i = 1; i < flat.size(); ++i) CHECK(flat[i] == 0.0);
}

TEST_CASE("adam moves against the gradient") {
    Adam opt(2, AdamOptions{0.1});
    std::vector<double> p{1.0, -1.0};
    const std::vector<double> g{2.0, -0.5};
    opt.step(p, g);
    CHECK(p[0] == doctest::Approx(0.9));
    CHECK(p[1] == doctest::Approx(-0.9));
    CHECK(opt.steps() == 1);
}

TEST_CASE("gbdt with no rounds predicts the training mean") {
    const Dataset d = toy_dataset(50, 1);
    GbdtParams p;
    p.n_estimators = 0;
    const auto y = d.departure_delay();
    const GbdtModel m = fit_gbdt(d.features, y, p);
    double sum = 0.0;
    for (double v : y) sum += v;
    for (double v : m.predict(d.features)) CHECK(v == sum / static_cast<double>(y.size()));
    CHECK(m.trees.empty());
    for (auto c : m.split_counts) CHECK(c == 0);
}

TEST_CASE("gbdt recovers the brute-force best threshold on step data") {
    Rng rng(13);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<double> x, y;
        const double step = rng.uniform(-1, 1);
        for (int i = 0; i < 80; ++i) {
            const double v = std::round(rng.uniform(-2, 2) * 100) / 100;
            x.push_back(v);
            y.push_back((v > step ? 5.0 : 0.0) + rng.normal(0, 0.3));
        }
        GbdtParams p;
        p.n_estimators = 1;
        p.num_leaves = 2;
        p.learning_rate = 1.0;
        p.min_data_in_leaf = 1;
        const GbdtModel m = fit_gbdt(column(x), y, p);
        REQUIRE(m.trees.size() == 1);
        REQUIRE(m.trees[0].nodes.size() == 3);

        std::vector<double> distinct = x;
        std::sort(distinct.begin(), distinct.end());
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        double best_gain = -1.0, best_t = 0.0;
        std::size_t best_i = 0;
        for (std::size_t i = 0; i + 1 < distinct.size(); ++i) {
            const double t = (distinct[i] + distinct[i + 1]) / 2;
            double sl = 0, sr = 0, nl = 0, nr = 0;
            for (std::size_t k = 0; k < x.size(); ++k) (x[k] <= t ? (sl += y[k], nl += 1) : (sr += y[k], nr += 1));
            const double gain = sl * sl / nl + sr * sr / nr;
            if (gain > best_gain + 1e-9) best_gain = gain, best_t = t, best_i = i;
        }
        // Same partition of the sample; the midpoint itself may differ by an ulp.
        const double got = m.trees[0].nodes[0].threshold;
        CHECK(got == doctest::Approx(best_t));
        CHECK(got >= distinct[best_i]);
        CHECK(got < distinct[best_i + 1]);
    }
}

TEST_CASE("gbdt training error never rises") {
    const Dataset d = toy_dataset(200, 2);
    GbdtParams p;
    p.n_estimators = 150;
    p.learning_rate = 0.1;
    p.num_leaves = 7;
    const GbdtModel m = fit_gbdt(d.features, d.departure_delay(), p);
    REQUIRE(m.train_rmse.size() == 151);
    for (std::size_t t = 1; t < m.train_rmse.size(); ++t) CHECK(m.train_rmse[t] <= m.train_rmse[t - 1]);
    for (const auto& tree : m.trees) CHECK(tree.leaf_count() <= 7);
    CHECK(m.train_rmse.back() < 0.3 * m.train_rmse.front());
}

TEST_CASE("gbdt split counts ignore monotone relabelling of a feature") {
    const Dataset d = toy_dataset(120, 3);
    GbdtParams p;
    p.n_estimators = 30;
    p.num_leaves = 5;
    p.learning_rate = 0.2;
    const GbdtModel a = fit_gbdt(d.features, d.departure_delay(), p);
    Matrix bent = d.features;
    for (std::size_t r = 0; r < bent.rows(); ++r) bent(r, 1) = std::exp(bent(r, 1)) * 10 + 4;
    const GbdtModel b = fit_gbdt(bent, d.departure_delay(), p);
    CHECK(a.split_counts == b.split_counts);
    for (std::size_t r = 0; r < 10; ++r) CHECK(a.predict_row(d.features.row(r)) == doctest::Approx(b.predict_row(bent.row(r))));
}

TEST_CASE("gbdt early stopping keeps the best prefix") {
    const Dataset d = toy_dataset(300, 4);
    std::vector<std::size_t> fit_rows, val_rows;
    for (std::size_t r = 0; r < 300; ++r) (r < 240 ? fit_rows : val_rows).push_back(r);
    const Dataset fit = d.subset(fit_rows), val = d.subset(val_rows);
    GbdtParams p;
    p.n_estimators = 2000;
    p.learning_rate = 0.3;
    p.patience = 20;
    const auto vy = val.departure_delay();
    const GbdtModel m = fit_gbdt(fit.features, fit.departure_delay(), p, &val.features, vy);
    CHECK(m.trees.size() == static_cast<std::size_t>(m.best_rounds));
    CHECK(m.validation_rmse.size() < 2001);
    const double best = *std::min_element(m.validation_rmse.begin(), m.validation_rmse.end());
    CHECK(rmse(m.predict(val.features), vy) == doctest::Approx(best));
}

TEST_CASE("bin mapper edges split distinct values at midpoints") {
    Matrix x(4, 1);
    x(0, 0) = 1; x(1, 0) = 3; x(2, 0) = 3; x(3, 0) = 7;
    const BinMapper b = BinMapper::fit(x, 255);
    CHECK(b.edges[0] == std::vector<double>{2.0, 5.0});
    CHECK(b.bin(0, 1.0) == 0);
    CHECK(b.bin(0, 2.0) == 0);
    CHECK(b.bin(0, 4.0) == 1);
    CHECK(b.bin(0, 9.0) == 2);
    Matrix many(1000, 1);
    for (std::size_t r = 0; r < 1000; ++r) many(r, 0) = static_cast<double>(r);
    CHECK(BinMapper::fit(many, 16).bin_count(0) <= 16);
}

TEST_CASE("search samples inside the space and keeps the best trial") {
    Rng rng(14);
    for (ModelKind kind : {ModelKind::Mlp, ModelKind::TrajCnn}) {
        const auto ranges = search_ranges(kind);
        for (int i = 0; i < 50; ++i) {
            const auto v = sampled_values(kind, sample_config(kind, TrainConfig{}, rng));
            for (std::size_t k = 0; k < ranges.size(); ++k) {
                CHECK(v[k] >= ranges[k].low * (1 - 1e-12));
                CHECK(v[k] <= ranges[k].high * (1 + 1e-12));
            }
        }
    }
    const auto lr_score = [](const TrainConfig& c) { return c.mlp.learning_rate; };
    const SearchResult r = hyper_search(ModelKind::Mlp, TrainConfig{}, 12, 3, lr_score);
    REQUIRE(r.trials.size() == 12);
    double lowest = 1.0;
    for (const auto& t : r.trials) lowest = std::min(lowest, t.config.mlp.learning_rate);
    CHECK(r.best_config().mlp.learning_rate == lowest);
    const SearchResult one = hyper_search(ModelKind::Mlp, TrainConfig{}, 1, 3, lr_score);
    CHECK(one.best == 0);
    CHECK(hyper_search(ModelKind::Mlp, TrainConfig{}, 12, 3, lr_score).best == r.best);
    CHECK_THROWS_AS(hyper_search(ModelKind::Mlp, TrainConfig{}, 0, 3, lr_score), ParameterError);
    CHECK_THROWS_AS(search_ranges(ModelKind::Gbdt), ParameterError);
    std::ostringstream log;
    write_trial_log(log, ModelKind::Mlp, r);
    CHECK(log.str().rfind("trial,n_node,n_layer,learning_rate,validation_rmse,seconds\n", 0) == 0);
}

TEST_CASE("train configs validate and round-trip through json") {
    TrainConfig c;
    c.kind = ModelKind::TrajCnn;
    c.trajcnn.n_fc = 17;
    c.mlp.learning_rate = 0.5;
    c.seed = 99;
    const TrainConfig back = train_config_from_json(to_json(c));
    CHECK(back.kind == ModelKind::TrajCnn);
    CHECK(back.trajcnn.n_fc == 17);
    CHECK(back.mlp.learning_rate == 0.5);
    CHECK(back.seed == 99);
    c.gbdt.num_leaves = 0;
    CHECK_THROWS_AS(c.validate(), ParameterError);
    CHECK(parse_model_kind("trajcnn") == ModelKind::TrajCnn);
    CHECK_FALSE(parse_model_kind("svm").has_value());
}

TEST_CASE("every model kind learns the planted signal and survives a save") {
    const Dataset all = toy_dataset(160, 5, true);
    std::vector<std::size_t> a, b, c;
    for (std::size_t r = 0; r < 160; ++r) (r < 100 ? a : r < 130 ? b : c).push_back(r);
    const Dataset train = all.subset(a), val = all.subset(b), test = all.subset(c);
    const double spread = population_std(test.departure_delay());
    fixture::TempDir dir("model-io");
    for (ModelKind kind : {ModelKind::LinearRegression, ModelKind::Gbdt, ModelKind::Mlp, ModelKind::TrajCnn}) {
        CAPTURE(model_kind_name(kind));
        TrainConfig cfg;
        cfg.kind = kind;
        cfg.seed = 1;
        cfg.gbdt.n_estimators = 300;
        cfg.gbdt.learning_rate = 0.1;
        cfg.gbdt.min_data_in_leaf = 5;
        cfg.mlp.n_node = 16;
        cfg.mlp.n_epoch = 200;
        cfg.mlp.learning_rate = 0.01;
        cfg.trajcnn.n_fc = 16;
        cfg.trajcnn.n_epoch = 60;
        cfg.trajcnn.learning_rate = 0.003;
        const TrainedModel m = train_model(train, val, cfg);
        const auto pred = m.predict_departure(test);
        CHECK(rmse(pred, test.departure_delay()) < 0.6 * spread);

        const auto path = dir / (std::string(model_kind_name(kind)) + ".json");
        save_model(path, m);
        const TrainedModel back = load_model(path);
        CHECK(back.predict_departure(test) == pred);
        save_model(dir / "again.json", back);
        CHECK(fixture::read_text(path) == fixture::read_text(dir / "again.json"));
    }
    const TrainedModel lr = train_model(train, val, TrainConfig{ModelKind::LinearRegression});
    auto j = model_to_json(lr);
    j["version"] = kModelFormatVersion + 1;
    CHECK_THROWS_AS(model_from_json(j), EncodingError);
    j = model_to_json(lr);
    j["format"] = "something-else";
    CHECK_THROWS_AS(model_from_json(j), EncodingError);
    CHECK_THROWS_AS(lr.predict_departure(train.select_columns({0, 1})), ContractError);
}

}

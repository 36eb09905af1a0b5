#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "tarmac/error.hpp"
#include "tarmac/eval.hpp"
#include "tarmac/learn/metrics.hpp"
#include "tarmac/rng.hpp"

using namespace tarmac;
using namespace tarmac::eval;
using learn::ModelKind;

namespace {

std::vector<Timestamp> hourly(std::size_t n) {
    std::vector<Timestamp> t;
    for (std::size_t i = 0; i < n; ++i) t.push_back(from_epoch_seconds(1'672'617'600 + 3600 * static_cast<std::int64_t>(i)));
    return t;
}

EvalOptions quick_options() {
    EvalOptions o;
    o.base.gbdt.n_estimators = 300;
    o.base.gbdt.learning_rate = 0.05;
    o.base.gbdt.patience = 30;
    o.base.mlp.n_node = 16;
    o.base.mlp.n_epoch = 30;
    o.base.trajcnn.n_fc = 8;
    o.base.trajcnn.n_epoch = 3;
    o.base.trajcnn.batch_size = 32;
    return o;
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_SUITE("eval") {

TEST_CASE("holdout takes the latest rows") {
    const auto t = hourly(10);
    const SplitPlan p = temporal_holdout(t, 0.5);
    REQUIRE(p.folds.size() == 1);
    CHECK(p.folds[0].test == std::vector<std::size_t>{5, 6, 7, 8, 9});
    CHECK(p.folds[0].train == std::vector<std::size_t>{0, 1, 2, 3, 4});
    CHECK(p.folds[0].test_begin == t[5]);
    CHECK_THROWS_AS(temporal_holdout(t, 0.0), ParameterError);
    CHECK_THROWS_AS(temporal_holdout(t, 1.0), ParameterError);
}

TEST_CASE("holdout follows time, not row order") {
    auto t = hourly(12);
    Rng rng(1);
    rng.shuffle(std::span<Timestamp>(t));
    const SplitPlan p = temporal_holdout(t, 0.25);
    for (std::size_t r : p.folds[0].test)
        for (std::size_t q : p.folds[0].train) CHECK(t[q] < t[r]);
    CHECK(p.folds[0].test.size() == 3);
}

TEST_CASE("seven weeks with a two-sevenths holdout test on the final fortnight") {
    std::vector<Timestamp> t;
    Rng rng(2);
    const Timestamp start = parse_iso8601("2023-01-02T00:00:00Z");
    for (int day = 0; day < 49; ++day)
        for (int k = 0; k < 30; ++k) t.push_back(start + Seconds(86400 * day + static_cast<std::int64_t>(rng.below(86400))));
    rng.shuffle(std::span<Timestamp>(t));
    const SplitPlan p = temporal_holdout(t, 2.0 / 7.0);
    std::set<std::size_t> test(p.folds[0].test.begin(), p.folds[0].test.end());
    const Timestamp cut = start + Seconds(86400 * 35);
    for (std::size_t r = 0; r < t.size(); ++r) CHECK((t[r] >= cut) == (test.count(r) == 1));
    CHECK(test.size() == 14 * 30);
}

TEST_CASE("random holdout partitions every row and depends only on the seed") {
    auto t = hourly(40);
    Rng rng(3);
    rng.shuffle(std::span<Timestamp>(t));
    const SplitPlan a = random_holdout(t, 0.2, 11);
    const Fold& f = a.folds.at(0);
    CHECK(f.test.size() == 8);
    CHECK(f.train.size() == 32);
    std::vector<std::size_t> all = f.train;
    all.insert(all.end(), f.test.begin(), f.test.end());
    std::sort(all.begin(), all.end());
    std::vector<std::size_t> want(t.size());
    std::iota(want.begin(), want.end(), std::size_t{0});
    CHECK(all == want);
    for (std::size_t i = 1; i < f.test.size(); ++i) CHECK(t[f.test[i - 1]] < t[f.test[i]]);
    for (std::size_t i = 1; i < f.train.size(); ++i) CHECK(t[f.train[i - 1]] < t[f.train[i]]);
    CHECK(random_holdout(t, 0.2, 11).folds[0].test == f.test);
    CHECK(random_holdout(t, 0.2, 12).folds[0].test != f.test);
    CHECK_THROWS_AS(random_holdout(t, 1.0, 11), ParameterError);

    // The option switch picks the splitter.
    EvalOptions o;
    o.test_fraction = 0.2;
    CHECK(holdout(t, o).folds[0].test == temporal_holdout(t, 0.2).folds[0].test);
    o.random_split = true;
    CHECK(holdout(t, o).folds[0].test.size() == 8);
    CHECK(holdout(t, o).folds[0].test != temporal_holdout(t, 0.2).folds[0].test);
}

TEST_CASE("k-fold blocks are contiguous, disjoint and exhaustive") {
    const auto t = hourly(10);
    const SplitPlan p = temporal_kfold(t, 5);
    REQUIRE(p.folds.size() == 5);
    for (std::size_t i = 0; i < 5; ++i) CHECK(p.folds[i].test == std::vector<std::size_t>{2 * i, 2 * i + 1});

    const auto u = hourly(23);
    const SplitPlan q = temporal_kfold(u, 5);
    std::vector<int> seen(23, 0);
    std::size_t prev_end = 0;
    for (const Fold& f : q.folds) {
        CHECK(f.test.front() == prev_end);
        CHECK(f.test.back() - f.test.front() + 1 == f.test.size());
        prev_end = f.test.back() + 1;
        for (auto r : f.test) ++seen[r];
        CHECK(f.train.size() + f.test.size() == 23);
        std::vector<std::size_t> joined = f.train;
        joined.insert(joined.end(), f.test.begin(), f.test.end());
        std::sort(joined.begin(), joined.end());
        for (std::size_t i = 0; i < 23; ++i) CHECK(joined[i] == i);
    }
    for (int s : seen) CHECK(s == 1);
    CHECK(q.folds[0].test.size() == 5);
    CHECK(q.folds[4].test.size() == 4);

    const SplitPlan chained = temporal_kfold(u, 5, true);
    CHECK(chained.folds[0].train.empty());
    for (const Fold& f : chained.folds)
        for (auto r : f.train) CHECK(r < f.test.front());
    CHECK_THROWS_AS(temporal_kfold(u, 1), ParameterError);
    CHECK_THROWS_AS(temporal_kfold(hourly(3), 5), ParameterError);
}

TEST_CASE("validation tail takes the latest training rows") {
    std::vector<std::size_t> rows(20);
    std::iota(rows.begin(), rows.end(), 0);
    const auto [fit, val] = validation_tail(rows, 0.2);
    CHECK(fit.size() == 16);
    CHECK(val == std::vector<std::size_t>{16, 17, 18, 19});
    const auto [small_fit, small_val] = validation_tail(std::vector<std::size_t>{1, 2, 3}, 0.2);
    CHECK(small_fit.size() == 3);
    CHECK(small_val.empty());
}

TEST_CASE("explainability identities") {
    const std::vector<double> y{1, 4, 9, 2, 7, 3};
    const std::vector<std::string> one(6, "all");
    CHECK(explainability_rmse_categorical(one, y) == doctest::Approx(oracle::population_std(y)).epsilon(1e-12));
    CHECK(explainability_rmse_numeric(y, y) == doctest::Approx(0.0).epsilon(1e-12));
    const std::vector<std::string> two{"a", "b", "a", "b", "a", "b"};
    const std::vector<double> step{3, 7, 3, 7, 3, 7};
    CHECK(explainability_rmse_categorical(two, step) == 0.0);
    const std::vector<double> flat(6, 2.0);
    CHECK(explainability_rmse_numeric(flat, y) == doctest::Approx(oracle::population_std(y)));
    const std::vector<double> x{0, 1, 2, 3, 4, 5};
    std::vector<double> line;
    for (double v : x) line.push_back(4 - 0.5 * v);
    CHECK(explainability_rmse_numeric(x, line) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("importance ranks the driving feature and counts every split") {
    Rng rng(3);
    Matrix x(200, 5);
    std::vector<double> y(200);
    for (std::size_t r = 0; r < 200; ++r) {
        for (std::size_t c = 0; c < 5; ++c) x(r, c) = rng.normal();
        y[r] = std::sin(2 * x(r, 3)) * 10;
    }
    learn::GbdtParams p;
    p.n_estimators = 40;
    p.learning_rate = 0.2;
    p.num_leaves = 6;
    const auto m = learn::fit_gbdt(x, y, p);
    const auto rank = feature_importance(m, {"a", "b", "c", "d", "e"});
    CHECK(rank.front().feature == 3);
    CHECK(rank.front().name == "d");
    std::size_t splits = 0, internal = 0;
    for (const auto& r : rank) splits += r.splits;
    for (const auto& tree : m.trees) internal += tree.split_count();
    CHECK(splits == internal);
    for (std::size_t i = 1; i < rank.size(); ++i) CHECK(rank[i - 1].splits >= rank[i].splits);

    learn::GbdtParams none;
    none.n_estimators = 0;
    for (const auto& r : feature_importance(learn::fit_gbdt(x, y, none))) CHECK(r.splits == 0);
}

TEST_CASE("comparison grid fills applicable cells and marks the rest") {
    const FeatureSet& fs = fixture::small_feature_set();
    const EvalOptions opt = quick_options();
    const ComparisonGrid g = run_comparison(fs, {ModelKind::LinearRegression, ModelKind::Gbdt},
                                            {FeatureCombo::Ref, FeatureCombo::RefAtc}, opt);
    CHECK(g.cells.size() == 4);
    for (const auto& c : g.cells) {
        CHECK(c.applicable);
        CHECK(c.rmse > 0.0);
        CHECK(c.mae <= c.rmse);
        CHECK(c.test_rows == static_cast<std::size_t>(std::ceil(fs.dataset.size() * 2.0 / 7.0 - 1e-9)));
    }
    const ComparisonGrid na = run_comparison(fs, {ModelKind::TrajCnn}, {FeatureCombo::Ref, FeatureCombo::RefImg}, opt);
    CHECK_FALSE(na.at(0, 0).applicable);
    CHECK(na.at(0, 1).applicable);
    std::ostringstream csv;
    write_comparison_csv(csv, na);
    CHECK(csv.str().rfind("model,ref,ref+img\ntrajcnn,N/A,", 0) == 0);

    CHECK(cell_seed(7, ModelKind::Gbdt, FeatureCombo::Ref) == g.at(1, 0).seed);
    CHECK(cell_seed(7, ModelKind::Gbdt, FeatureCombo::Ref) != cell_seed(7, ModelKind::Gbdt, FeatureCombo::RefAtc));
    CHECK(cell_seed(7, ModelKind::Gbdt, FeatureCombo::Ref) != cell_seed(8, ModelKind::Gbdt, FeatureCombo::Ref));
}

TEST_CASE("grid results do not depend on the thread count or grid shape") {
    const FeatureSet& fs = fixture::small_feature_set();
    EvalOptions one = quick_options();
    EvalOptions two = one;
    two.jobs = 2;
    const std::vector<ModelKind> models{ModelKind::Mlp, ModelKind::Gbdt};
    const std::vector<FeatureCombo> combos{FeatureCombo::RefW, FeatureCombo::RefWAtc};
    std::ostringstream a, b;
    write_comparison_csv(a, run_comparison(fs, models, combos, one));
    write_comparison_csv(b, run_comparison(fs, models, combos, two));
    CHECK(a.str() == b.str());
    const ComparisonGrid single = run_comparison(fs, {ModelKind::Gbdt}, {FeatureCombo::RefWAtc}, one);
    const ComparisonGrid full = run_comparison(fs, models, combos, one);
    CHECK(single.at(0, 0).rmse == full.at(1, 1).rmse);
}

TEST_CASE("a one-cell sweep reproduces the comparison cell") {
    const FeatureSet& fs = fixture::small_feature_set();
    const EvalOptions opt = quick_options();
    const SweepGrid s = sweep_window_gap([&](Minutes, Minutes) { return fs; }, {60}, {240}, ModelKind::Gbdt,
                                         FeatureCombo::RefWAtc, opt);
    REQUIRE(s.cells.size() == 1);
    const ComparisonGrid g = run_comparison(fs, {ModelKind::Gbdt}, {FeatureCombo::RefWAtc}, opt);
    CHECK(s.cells[0].result.rmse == g.at(0, 0).rmse);
    CHECK(s.cells[0].result.mae == g.at(0, 0).mae);

    int calls = 0;
    const SweepGrid four = sweep_window_gap(
        [&](Minutes, Minutes) {
            ++calls;
            return fs;
        },
        {30, 60}, {120, 240}, ModelKind::LinearRegression, FeatureCombo::RefAtc, opt);
    CHECK(four.cells.size() == 4);
    CHECK(calls == 4);
    CHECK(four.cells[1].window == Minutes(30));
    CHECK(four.cells[1].gap == Minutes(240));
    std::ostringstream out;
    write_sweep_csv(out, four);
    CHECK(count_lines(out.str()) == 5);
    CHECK_THROWS_AS(sweep_window_gap([&](Minutes, Minutes) { return fs; }, {}, {60}, ModelKind::Gbdt,
                                     FeatureCombo::Ref, opt),
                    ParameterError);
}

TEST_CASE("cross-validation averages the usable folds") {
    const FeatureSet& fs = fixture::small_feature_set();
    const EvalOptions opt = quick_options();
    const SplitPlan plan = temporal_kfold(fs.dataset.timestamps, 4);
    const CellResult cv = cross_validate(fs, plan, ModelKind::LinearRegression, FeatureCombo::RefAtc, opt);
    double sum = 0.0;
    for (const Fold& f : plan.folds) sum += evaluate_cell(fs, f, ModelKind::LinearRegression, FeatureCombo::RefAtc, opt).rmse;
    CHECK(cv.rmse == doctest::Approx(sum / 4));
}

TEST_CASE("analysis covers categorical and numeric columns") {
    const FeatureSet& fs = fixture::small_feature_set();
    const auto rows = analyze_dataset(fs.dataset);
    REQUIRE(rows.size() == 4 + fs.dataset.features.cols());
    CHECK(rows[0].feature == "all_flights");
    CHECK(rows[0].classes == 1);
    CHECK(rows[0].rmse == doctest::Approx(oracle::population_std(fs.dataset.departure_delay())).epsilon(1e-9));
    for (const auto& r : rows) CHECK(r.rmse <= rows[0].rmse * (1 + 1e-9));
    CHECK(rows[1].feature == "airline");
    CHECK(rows[1].classes > 1);
}

TEST_CASE("images are required only by image combinations") {
    FeatureSet fs = fixture::small_feature_set();
    const std::vector<std::size_t> rows{0, 1, 2};
    CHECK(combo_dataset(fs, rows, FeatureCombo::RefImg).has_images());
    CHECK_FALSE(combo_dataset(fs, rows, FeatureCombo::RefAtc).has_images());
    fs.dataset.images.clear();
    CHECK_THROWS_AS(combo_dataset(fs, rows, FeatureCombo::RefImg), ContractError);
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}

}

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "support/fixtures.hpp"
#include "tarmac/error.hpp"
#include "tarmac/pipeline.hpp"
#include "tarmac/run.hpp"

using namespace tarmac;
using learn::ModelKind;

TEST_SUITE("pipeline") {

TEST_CASE("trajectories round-trip through their csv form") {
    const auto world = fixture::make_world(fixture::small_config(4, 1, 20));
    std::stringstream s;
    write_trajectories(s, world.trajectories, world.map);
    const auto back = read_trajectories(s);
    REQUIRE(back.size() == world.trajectories.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        const auto& a = world.trajectories[i];
        const auto& b = back[i];
        CHECK(a.vehicle_id == b.vehicle_id);
        CHECK(a.zone_labels == b.zone_labels);
        REQUIRE(a.points.size() == b.points.size());
        for (std::size_t k = 0; k < a.points.size(); ++k) {
            CHECK(a.points[k].time == b.points[k].time);
            CHECK(a.points[k].lat == b.points[k].lat);
            CHECK(a.points[k].speed == b.points[k].speed);
            CHECK(a.points[k].heading == b.points[k].heading);
        }
    }
}

TEST_CASE("feature sets round-trip through the work directory") {
    const FeatureSet& fs = fixture::small_feature_set();
    fixture::TempDir dir("featureset");
    write_feature_set(dir.path(), fs);
    const FeatureSet back = read_feature_set(dir.path());
    CHECK(back.dataset.ids == fs.dataset.ids);
    CHECK(back.dataset.timestamps == fs.dataset.timestamps);
    CHECK(back.dataset.feature_names == fs.dataset.feature_names);
    CHECK(back.dataset.features == fs.dataset.features);
    CHECK(back.dataset.targets == fs.dataset.targets);
    CHECK(back.groups.atc == fs.groups.atc);
    CHECK(back.groups.weather_raw == fs.groups.weather_raw);
    CHECK(back.weather_vocab == fs.weather_vocab);
    CHECK(back.weather_pca.components == fs.weather_pca.components);
    CHECK(back.window == fs.window);
    REQUIRE(back.dataset.images.size() == fs.dataset.images.size());
    for (std::size_t i = 0; i < fs.dataset.images.size(); ++i) {
        CHECK(back.dataset.images[i].flight_id == fs.dataset.images[i].flight_id);
        for (std::size_t k = 0; k < kImageValues; ++k)
            if (back.dataset.images[i].values[k] != static_cast<double>(static_cast<float>(fs.dataset.images[i].values[k])))
                FAIL("image value changed beyond float32 rounding");
    }
    std::filesystem::remove(dir / files::kImages);
    CHECK_THROWS_WITH_AS(read_feature_set(dir.path()), doctest::Contains("images.bin"), IoError);
    CHECK(read_feature_set(dir.path(), false).dataset.images.empty());
}

TEST_CASE("feature rows follow the departure schedule") {
    const FeatureSet& fs = fixture::small_feature_set();
    const auto& d = fs.dataset;
    CHECK(d.size() == 4 * 60);
    for (std::size_t r = 1; r < d.size(); ++r) CHECK(d.timestamps[r - 1] <= d.timestamps[r]);
    for (std::size_t r = 0; r < d.size(); ++r) {
        double sum = 0.0;
        for (std::size_t c = 0; c < kDelayComponents; ++c) sum += d.targets(r, c);
        CHECK(sum == doctest::Approx(d.targets(r, LabelVector::kDepartureDelay)));
    }
    CHECK(fs.groups.atc.size() == AtcFeatures::kCount);
    CHECK(fs.groups.weather_pca.size() == fs.weather_pca.output_dim());
    CHECK(fs.groups.weather_pca.size() <= kDefaultPcaComponents);
    for (double v : d.features.data()) CHECK(std::isfinite(v));
}

TEST_CASE("feature combination names and column blocks") {
    for (FeatureCombo c : kAllCombos) CHECK(parse_combo(combo_name(c)) == c);
    CHECK_FALSE(parse_combo("ref+gps").has_value());
    CHECK(combo_name(FeatureCombo::RefWAtc) == "ref+w+atc");
    CHECK(applicable(ModelKind::TrajCnn, FeatureCombo::RefImg));
    CHECK_FALSE(applicable(ModelKind::TrajCnn, FeatureCombo::Ref));
    CHECK_FALSE(applicable(ModelKind::Gbdt, FeatureCombo::RefWImg));

    const FeatureGroups& g = fixture::small_feature_set().groups;
    CHECK(combo_columns(g, FeatureCombo::Ref) == g.reference);
    CHECK(combo_columns(g, FeatureCombo::RefAtc).size() == g.reference.size() + g.atc.size());
    CHECK(combo_columns(g, FeatureCombo::RefW).size() == g.reference.size() + g.weather_pca.size());
    CHECK(combo_columns(g, FeatureCombo::RefWImg).size() == g.reference.size() + g.weather_raw.size());
}

TEST_CASE("missing inputs are named") {
    fixture::TempDir dir("missing");
    CHECK_THROWS_WITH_AS(load_raw_inputs(dir.path()), doctest::Contains("gps.csv"), IoError);
    CHECK_THROWS_WITH_AS(read_feature_set(dir.path()), doctest::Contains("dataset.csv"), IoError);
}

TEST_CASE("pipeline config parsing") {
    const PipelineConfig p = load_pipeline_config(fixture::source_dir() / "config" / "pipeline.json");
    CHECK(p.seed == 7);
    CHECK(p.eval.seed == 7);
    CHECK(std::filesystem::exists(p.data_dir / files::kGps));
    CHECK(p.models.size() == 4);
    CHECK(p.combos.size() == 6);

    const auto j = nlohmann::json::parse(R"({"seed": 3, "jobs": 2, "featurize": {"window_min": 30}})");
    const PipelineConfig q = pipeline_config_from_json(j);
    CHECK(q.scenario.seed == 3);
    CHECK(q.eval.jobs == 2);
    CHECK(q.featurize.window == Minutes(30));
    CHECK_THROWS_AS(pipeline_config_from_json(nlohmann::json::parse(R"({"sede": 3})")), ParameterError);
    CHECK_FALSE(q.eval.random_split);
    CHECK(pipeline_config_from_json(nlohmann::json::parse(R"({"eval": {"split": "random"}})")).eval.random_split);
    CHECK_THROWS_AS(pipeline_config_from_json(nlohmann::json::parse(R"({"eval": {"split": "shuffled"}})")),
                    ParameterError);
    CHECK(parse_int_list("30,60,120") == std::vector<int>{30, 60, 120});
    CHECK_THROWS_AS(parse_model_list("gbdt,svm"), ParameterError);
    CHECK(parse_combo_list("ref,ref+atc").size() == 2);
}

}

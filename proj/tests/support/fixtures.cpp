#include "support/fixtures.hpp"

#include <atomic>
#include <chrono>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using namespace tarmac;

namespace fixture {

fs::path source_dir() { return TARMAC_SOURCE_DIR; }
fs::path golden_dir() { return source_dir() / "data" / "golden"; }
fs::path cli_path() { return TARMAC_CLI_PATH; }

TempDir::TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    path_ = fs::temp_directory_path() /
            (tag + "-" + std::to_string(stamp) + "-" + std::to_string(counter++));
    fs::create_directories(path_);
}

TempDir::~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
}

ScenarioConfig small_config(std::uint64_t seed, int days, int flights_per_day) {
    ScenarioConfig c;
    c.seed = seed;
    c.day_count = days;
    c.flights_per_day = flights_per_day;
    c.background_rate = 4.0;
    // The calibrated congestion capacity assumes full-size traffic.
    c.congestion_capacity = 10.0;
    return c;
}

World make_world(const ScenarioConfig& config) {
    World w;
    w.scenario = generate_scenario(config);
    w.map = default_zone_map();
    CleaningConfig cleaning;
    cleaning.bbox = w.map.bbox;
    for (auto& t : restore_trajectories(w.scenario.gps, cleaning)) w.trajectories.push_back(label_trajectory(t, w.map));
    for (const auto& f : w.scenario.flights) {
        if (f.origin == config.airport) w.departures.push_back(f);
        if (f.destination == config.airport) w.arrivals.push_back(f);
    }
    return w;
}

const FeatureSet& small_feature_set() {
    static const FeatureSet fs = [] {
        const World w = make_world(small_config(11, 4, 60));
        FeaturizeOptions opt;
        return featurize(w.trajectories, w.scenario.flights, w.scenario.weather, w.map, opt);
    }();
    return fs;
}

std::string read_text(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace fixture

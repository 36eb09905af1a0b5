#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "tarmac/ingest.hpp"
#include "tarmac/pipeline.hpp"
#include "tarmac/synth.hpp"
#include "tarmac/zones.hpp"

namespace fixture {

std::filesystem::path source_dir();
std::filesystem::path golden_dir();
std::filesystem::path cli_path();

// Fresh directory removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag = "tarmac");
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

// A generated scenario pushed through cleaning and zone labeling.
struct World {
    tarmac::Scenario scenario;
    tarmac::ZoneMap map;
    std::vector<tarmac::Trajectory> trajectories;
    std::vector<tarmac::FlightRecord> departures;
    std::vector<tarmac::FlightRecord> arrivals;
};

tarmac::ScenarioConfig small_config(std::uint64_t seed, int days = 2, int flights_per_day = 40);
World make_world(const tarmac::ScenarioConfig& config);

// A few days of synthetic traffic, featurized once per process.
const tarmac::FeatureSet& small_feature_set();

std::string read_text(const std::filesystem::path& p);

}  // namespace fixture

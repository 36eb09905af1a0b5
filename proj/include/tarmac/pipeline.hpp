#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tarmac/features.hpp"
#include "tarmac/ingest.hpp"
#include "tarmac/learn/config.hpp"
#include "tarmac/learn/dataset.hpp"
#include "tarmac/pca.hpp"
#include "tarmac/raster.hpp"
#include "tarmac/zones.hpp"

namespace tarmac {

// Standard file names inside a data directory and a work directory.
namespace files {
inline constexpr const char* kGps = "gps.csv";
inline constexpr const char* kSchedule = "schedule.csv";
inline constexpr const char* kWeather = "weather.csv";
inline constexpr const char* kZones = "zones.json";
inline constexpr const char* kGroundTruth = "ground_truth.csv";
inline constexpr const char* kTrajectories = "trajectories.csv";
inline constexpr const char* kIngestReport = "ingest_report.json";
inline constexpr const char* kDataset = "dataset.csv";
inline constexpr const char* kSchema = "dataset.schema.json";
inline constexpr const char* kImages = "images.bin";
inline constexpr const char* kImageIndex = "images.json";
}  // namespace files

// Throws IoError naming the file when it does not exist.
void require_file(const std::filesystem::path& p, std::string_view produced_by = {});

struct RawInputs {
    std::vector<GpsPoint> gps;
    std::vector<FlightRecord> flights;
    std::vector<WeatherRecord> weather;
    ZoneMap zones;
    std::size_t skipped_gps = 0;
    std::size_t skipped_flights = 0;
    std::size_t skipped_weather = 0;
};

RawInputs load_raw_inputs(const std::filesystem::path& data_dir);
std::vector<FlightRecord> load_schedule(const std::filesystem::path& data_dir);
std::vector<WeatherRecord> load_weather(const std::filesystem::path& data_dir);
ZoneMap load_zones(const std::filesystem::path& data_dir);

// Cleaned, segmented and zone-labeled trajectories. On disk one row per
// point: trajectory,vehicle_id,time_iso8601,lat,lon,speed_mps,heading_rad,zone
// with heading kept in radians so the file round-trips exactly.
void write_trajectories(std::ostream& out, const std::vector<Trajectory>& trajectories, const ZoneMap& map);
std::vector<Trajectory> read_trajectories(std::istream& in);

struct IngestResult {
    std::vector<Trajectory> trajectories;
    RestoreReport report;
};

IngestResult ingest(const RawInputs& raw, const CleaningConfig& cleaning);
nlohmann::json to_json(const RestoreReport& r, const RawInputs& raw);

struct FeaturizeOptions {
    Minutes window{60};
    Minutes gap{240};
    std::string airport = "LAX";
    AtcConfig atc;
    std::size_t pca_components = kDefaultPcaComponents;
    bool build_images = true;
    int jobs = 1;
};

// Column blocks of the assembled dataset. Weather appears twice: projected
// onto principal components (for the linear, boosted and MLP models) and as
// the raw encoding (for the image network).
struct FeatureGroups {
    std::vector<std::size_t> reference;  // includes the missing-inbound flag
    std::vector<std::size_t> atc;
    std::vector<std::size_t> weather_pca;
    std::vector<std::size_t> weather_raw;
};

struct FeatureSet {
    learn::Dataset dataset;  // unscaled images when built
    FeatureGroups groups;
    std::vector<std::string> weather_vocab;
    PcaModel weather_pca;
    Minutes window{60};
    Minutes gap{240};
};

// One row per departure from `options.airport`, in scheduled gate-out order.
// Weather PCA is fitted on the encoded hourly weather records.
FeatureSet featurize(const std::vector<Trajectory>& trajectories, const std::vector<FlightRecord>& flights,
                     const std::vector<WeatherRecord>& weather, const ZoneMap& map, const FeaturizeOptions& options);

// dataset.csv, dataset.schema.json and, when images exist, images.bin and
// images.json.
void write_feature_set(const std::filesystem::path& dir, const FeatureSet& fs);
// Throws IoError naming the first missing artifact.
FeatureSet read_feature_set(const std::filesystem::path& dir, bool with_images = true);

enum class FeatureCombo { Ref, RefW, RefAtc, RefWAtc, RefImg, RefWImg };

inline constexpr FeatureCombo kAllCombos[] = {FeatureCombo::Ref,    FeatureCombo::RefW,   FeatureCombo::RefAtc,
                                              FeatureCombo::RefWAtc, FeatureCombo::RefImg, FeatureCombo::RefWImg};

std::string_view combo_name(FeatureCombo c);  // "ref", "ref+w", ...
std::optional<FeatureCombo> parse_combo(std::string_view name);
bool combo_uses_images(FeatureCombo c);

// Whether `model` can run on `combo`: the image network needs images and
// the other models cannot consume them.
bool applicable(learn::ModelKind model, FeatureCombo combo);

// Column indices for the combination; image combos use the raw weather
// encoding, the rest the principal components.
std::vector<std::size_t> combo_columns(const FeatureGroups& g, FeatureCombo combo);

}  // namespace tarmac

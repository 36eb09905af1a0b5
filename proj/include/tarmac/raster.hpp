#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "tarmac/geo.hpp"

namespace tarmac {

inline constexpr std::size_t kGridSize = 28;
inline constexpr std::size_t kImageChannels = 3;
inline constexpr std::size_t kImageValues = kGridSize * kGridSize * kImageChannels;

// 28×28×3 tensor stored [row][col][channel]; row 0 is the north edge.
// Channel 0 counts points, channels 1 and 2 sum the east (vx) and north (vy)
// velocity components.
struct TrajImage {
    std::string flight_id;
    std::vector<double> values = std::vector<double>(kImageValues, 0.0);

    static constexpr std::size_t index(std::size_t row, std::size_t col, std::size_t channel) {
        return (row * kGridSize + col) * kImageChannels + channel;
    }
    double at(std::size_t row, std::size_t col, std::size_t channel) const { return values[index(row, col, channel)]; }
    double channel_sum(std::size_t channel) const;
};

struct RasterResult {
    TrajImage image;
    std::size_t dropped = 0;  // points outside the bbox
};

class Rasterizer {
public:
    // Throws GeometryError for a zero-width or zero-height bbox.
    explicit Rasterizer(const BoundingBox& bbox);

    // Adds one point; returns false (and leaves the image untouched) when the
    // point lies outside the bbox.
    bool add(TrajImage& image, double lat, double lon, double speed, double heading) const;

    std::pair<std::size_t, std::size_t> cell_of(double lat, double lon) const;

private:
    BoundingBox bbox_;
};

template <class Points>
RasterResult rasterize(const Points& points, const BoundingBox& bbox) {
    const Rasterizer raster(bbox);
    RasterResult result;
    for (const auto& p : points)
        if (!raster.add(result.image, p.lat, p.lon, p.speed, p.heading)) ++result.dropped;
    return result;
}

// Min-max scaling to [0, 1], fitted on training images.
struct ImageScaler {
    enum class Mode { PerChannel, Global };
    Mode mode = Mode::PerChannel;
    std::array<double, kImageChannels> min{};
    std::array<double, kImageChannels> max{};
};

// Throws FitError for an empty set. Global mode shares one (min, max) over
// all channels.
ImageScaler fit_scaler(const std::vector<TrajImage>& train_images, ImageScaler::Mode mode = ImageScaler::Mode::PerChannel);

// (v - min)/(max - min) clamped to [0, 1]; a channel with max == min maps to 0.
TrajImage apply_scaler(const ImageScaler& scaler, const TrajImage& image);

// Binary tensor: four little-endian uint32 (n, 28, 28, 3) followed by
// n·2352 little-endian float32 values.
void write_image_tensor(std::ostream& out, const std::vector<TrajImage>& images);
std::vector<TrajImage> read_image_tensor(std::istream& in);

// JSON index mapping flight_id to tensor row.
std::string image_index_json(const std::vector<TrajImage>& images);
void apply_image_index(const std::string& json_text, std::vector<TrajImage>& images);

}  // namespace tarmac

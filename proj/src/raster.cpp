#include "tarmac/raster.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <ostream>

#include <json.hpp>

#include "tarmac/error.hpp"

namespace tarmac {

double TrajImage::channel_sum(std::size_t channel) const {
    double s = 0.0;
    for (std::size_t i = channel; i < values.size(); i += kImageChannels) s += values[i];
    return s;
}

Rasterizer::Rasterizer(const BoundingBox& bbox) : bbox_(bbox) {
    if (bbox.degenerate()) throw GeometryError("rasterize: bounding box has zero width or height");
}

std::pair<std::size_t, std::size_t> Rasterizer::cell_of(double lat, double lon) const {
    const double g = static_cast<double>(kGridSize);
    const double fx = std::floor(g * (lon - bbox_.lon_min) / (bbox_.lon_max - bbox_.lon_min));
    const double fy = std::floor(g * (bbox_.lat_max - lat) / (bbox_.lat_max - bbox_.lat_min));
    const auto col = static_cast<std::size_t>(std::clamp(fx, 0.0, g - 1.0));
    const auto row = static_cast<std::size_t>(std::clamp(fy, 0.0, g - 1.0));
    return {row, col};
}

bool Rasterizer::add(TrajImage& image, double lat, double lon, double speed, double heading) const {
    if (!bbox_.contains(lat, lon)) return false;
    const auto [row, col] = cell_of(lat, lon);
    image.values[TrajImage::index(row, col, 0)] += 1.0;
    image.values[TrajImage::index(row, col, 1)] += speed * std::sin(heading);
    image.values[TrajImage::index(row, col, 2)] += speed * std::cos(heading);
    return true;
}

ImageScaler fit_scaler(const std::vector<TrajImage>& train_images, ImageScaler::Mode mode) {
    if (train_images.empty()) throw FitError("fit_scaler: no training images");
    ImageScaler s;
    s.mode = mode;
    s.min.fill(std::numeric_limits<double>::infinity());
    s.max.fill(-std::numeric_limits<double>::infinity());
    for (const auto& img : train_images)
        for (std::size_t i = 0; i < img.values.size(); ++i) {
            const std::size_t c = i % kImageChannels;
            s.min[c] = std::min(s.min[c], img.values[i]);
            s.max[c] = std::max(s.max[c], img.values[i]);
        }
    if (mode == ImageScaler::Mode::Global) {
        const double lo = *std::min_element(s.min.begin(), s.min.end());
        const double hi = *std::max_element(s.max.begin(), s.max.end());
        s.min.fill(lo);
        s.max.fill(hi);
    }
    return s;
}

TrajImage apply_scaler(const ImageScaler& scaler, const TrajImage& image) {
    TrajImage out;
    out.flight_id = image.flight_id;
    for (std::size_t i = 0; i < image.values.size(); ++i) {
        const std::size_t c = i % kImageChannels;
        const double range = scaler.max[c] - scaler.min[c];
        out.values[i] = range > 0.0 ? std::clamp((image.values[i] - scaler.min[c]) / range, 0.0, 1.0) : 0.0;
    }
    return out;
}

namespace {

void put_u32(std::ostream& out, std::uint32_t v) {
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    out.write(b, 4);
}

std::uint32_t get_u32(std::istream& in) {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4)) throw IoError("image tensor: truncated header");
    return b[0] | (b[1] << 8) | (b[2] << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

}  // namespace

void write_image_tensor(std::ostream& out, const std::vector<TrajImage>& images) {
    put_u32(out, static_cast<std::uint32_t>(images.size()));
    put_u32(out, kGridSize);
    put_u32(out, kGridSize);
    put_u32(out, kImageChannels);
    for (const auto& img : images)
        for (double v : img.values) put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
    if (!out) throw IoError("image tensor: write failed");
}

std::vector<TrajImage> read_image_tensor(std::istream& in) {
    const std::uint32_t n = get_u32(in);
    if (get_u32(in) != kGridSize || get_u32(in) != kGridSize || get_u32(in) != kImageChannels)
        throw SchemaError("image tensor: expected shape [n,28,28,3]");
    std::vector<TrajImage> images(n);
    for (auto& img : images)
        for (double& v : img.values) v = std::bit_cast<float>(get_u32(in));
    return images;
}

std::string image_index_json(const std::vector<TrajImage>& images) {
    nlohmann::json doc;
    doc["shape"] = {images.size(), kGridSize, kGridSize, kImageChannels};
    doc["dtype"] = "float32-le";
    nlohmann::json rows = nlohmann::json::object();
    for (std::size_t i = 0; i < images.size(); ++i) rows[images[i].flight_id] = i;
    doc["rows"] = rows;
    return doc.dump(1);
}

void apply_image_index(const std::string& json_text, std::vector<TrajImage>& images) {
    const auto doc = nlohmann::json::parse(json_text);
    for (const auto& [id, row] : doc.at("rows").items()) {
        const auto r = row.get<std::size_t>();
        if (r >= images.size()) throw SchemaError("image index row out of range for '" + id + "'");
        images[r].flight_id = id;
    }
}

}  // namespace tarmac

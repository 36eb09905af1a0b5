#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "tarmac/error.hpp"
#include "tarmac/raster.hpp"
#include "tarmac/rng.hpp"

using namespace tarmac;

namespace {

const BoundingBox kBox{33.93, -118.43, 33.96, -118.38};

struct P {
    double lat, lon, speed, heading;
};

double total(const TrajImage& img) {
    double s = 0.0;
    for (double v : img.values) s += std::abs(v);
    return s;
}

}  // namespace

TEST_SUITE("raster") {

TEST_CASE("no points give a blank image") {
    const auto r = rasterize(std::vector<P>{}, kBox);
    CHECK(total(r.image) == 0.0);
    CHECK(r.dropped == 0);
}

TEST_CASE("an eastbound point at the centre fills one cell") {
    const std::vector<P> one{{(kBox.lat_min + kBox.lat_max) / 2, (kBox.lon_min + kBox.lon_max) / 2, 10.0,
                              std::numbers::pi / 2}};
    const auto r = rasterize(one, kBox);
    CHECK(r.image.at(14, 14, 0) == 1.0);
    CHECK(r.image.at(14, 14, 1) == doctest::Approx(10.0));
    CHECK(r.image.at(14, 14, 2) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(total(r.image) == doctest::Approx(11.0));

    const auto two = rasterize(std::vector<P>{one[0], one[0]}, kBox);
    CHECK(two.image.at(14, 14, 0) == 2.0);
    CHECK(two.image.at(14, 14, 1) == doctest::Approx(20.0));
}

TEST_CASE("corners map to the edge cells and outside points are dropped") {
    const Rasterizer raster(kBox);
    CHECK(raster.cell_of(kBox.lat_max, kBox.lon_min) == std::pair<std::size_t, std::size_t>{0, 0});
    CHECK(raster.cell_of(kBox.lat_min, kBox.lon_max) == std::pair<std::size_t, std::size_t>{27, 27});
    const auto r = rasterize(std::vector<P>{{34.5, -118.4, 1, 0}, {33.95, -118.40, 3, 0}}, kBox);
    CHECK(r.dropped == 1);
    CHECK(r.image.channel_sum(0) == 1.0);
    CHECK(r.image.channel_sum(2) == doctest::Approx(3.0));
    CHECK_THROWS_AS(Rasterizer(BoundingBox{1, 1, 1, 2}), GeometryError);
}

TEST_CASE("channel zero counts every retained point") {
    Rng rng(4);
    std::vector<P> pts;
    for (int i = 0; i < 500; ++i)
        pts.push_back({rng.uniform(33.92, 33.97), rng.uniform(-118.44, -118.37), rng.uniform(0, 80),
                       rng.uniform(0, 2 * std::numbers::pi)});
    std::size_t inside = 0;
    for (const auto& p : pts) inside += kBox.contains(p.lat, p.lon) ? 1 : 0;
    const auto r = rasterize(pts, kBox);
    CHECK(r.image.channel_sum(0) == static_cast<double>(inside));
    CHECK(r.dropped == pts.size() - inside);
    for (std::size_t i = 0; i < kImageValues; i += kImageChannels) CHECK(r.image.values[i] == std::floor(r.image.values[i]));
}

TEST_CASE("min-max scaling") {
    std::vector<TrajImage> set(3);
    CHECK_THROWS_AS(fit_scaler({}), FitError);
    const ImageScaler blank = fit_scaler(set);
    CHECK(blank.min[0] == 0.0);
    CHECK(blank.max[0] == 0.0);
    CHECK(total(apply_scaler(blank, set[0])) == 0.0);

    set[0].values[TrajImage::index(0, 0, 1)] = 0.0;
    set[1].values[TrajImage::index(3, 3, 1)] = 5.0;
    set[2].values[TrajImage::index(5, 5, 1)] = 10.0;
    set[2].values[TrajImage::index(5, 5, 2)] = -4.0;
    const ImageScaler s = fit_scaler(set);
    CHECK(s.min[1] == 0.0);
    CHECK(s.max[1] == 10.0);
    TrajImage probe;
    probe.values[TrajImage::index(1, 1, 1)] = 2.5;
    probe.values[TrajImage::index(1, 1, 2)] = -4.0;
    probe.values[TrajImage::index(2, 2, 1)] = 99.0;
    const TrajImage scaled = apply_scaler(s, probe);
    CHECK(scaled.at(1, 1, 1) == 0.25);
    CHECK(scaled.at(1, 1, 2) == 0.0);
    CHECK(scaled.at(0, 0, 2) == 1.0);
    CHECK(scaled.at(2, 2, 1) == 1.0);  // clamped
    CHECK(scaled.at(4, 4, 0) == 0.0);  // constant channel

    const ImageScaler g = fit_scaler(set, ImageScaler::Mode::Global);
    CHECK(g.min[0] == -4.0);
    CHECK(g.max[2] == 10.0);
}

TEST_CASE("image tensors round-trip as float32") {
    std::vector<TrajImage> imgs(2);
    imgs[0].flight_id = "a";
    imgs[1].flight_id = "b";
    imgs[1].values[7] = 0.5;
    imgs[0].values[kImageValues - 1] = 3.0;
    std::stringstream s;
    write_image_tensor(s, imgs);
    CHECK(s.str().size() == 16 + 2 * kImageValues * 4);
    auto back = read_image_tensor(s);
    REQUIRE(back.size() == 2);
    CHECK(back[1].values[7] == 0.5);
    CHECK(back[0].values[kImageValues - 1] == 3.0);
    apply_image_index(image_index_json(imgs), back);
    CHECK(back[1].flight_id == "b");
}

}

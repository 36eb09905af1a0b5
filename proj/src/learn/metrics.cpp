#include "tarmac/learn/metrics.hpp"

#include <cmath>

#include "tarmac/error.hpp"

namespace tarmac::learn {

namespace {

void check(std::span<const double> pred, std::span<const double> truth) {
    require(!truth.empty(), "metric: empty input");
    require(pred.size() == truth.size(), "metric: prediction/truth length mismatch");
}

}  // namespace

double rmse(std::span<const double> pred, std::span<const double> truth) {
    check(pred, truth);
    double s = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double d = pred[i] - truth[i];
        s += d * d;
    }
    return std::sqrt(s / static_cast<double>(pred.size()));
}

double mae(std::span<const double> pred, std::span<const double> truth) {
    check(pred, truth);
    double s = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) s += std::abs(pred[i] - truth[i]);
    return s / static_cast<double>(pred.size());
}

double mean(std::span<const double> v) {
    require(!v.empty(), "mean: empty input");
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double population_std(std::span<const double> v) {
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size()));
}

}  // namespace tarmac::learn

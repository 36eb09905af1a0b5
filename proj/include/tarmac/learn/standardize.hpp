#pragma once

#include <span>
#include <vector>

#include "tarmac/linalg.hpp"

namespace tarmac::learn {

// Per-column z-scoring with population statistics from the fitting data.
// Constant columns have scale 0 and transform to 0.
struct Standardizer {
    std::vector<double> mean;
    std::vector<double> scale;

    static Standardizer fit(const Matrix& x);
    static Standardizer identity(std::size_t dim);

    void transform_row(std::span<const double> in, std::span<double> out) const;
    Matrix transform(const Matrix& x) const;
    // Inverse mapping; constant columns come back as their mean.
    void inverse_row(std::span<const double> in, std::span<double> out) const;
};

}  // namespace tarmac::learn

#pragma once

#include <span>
#include <vector>

#include "tarmac/linalg.hpp"

namespace tarmac::learn {

struct LinearModel {
    std::vector<double> weights;
    double intercept = 0.0;

    double predict_row(std::span<const double> x) const;
    std::vector<double> predict(const Matrix& x) const;
};

inline constexpr double kLinregJitter = 1e-8;

// Least squares through the normal equations on z-scored columns with a
// 1e-8 ridge on the diagonal; constant columns get weight 0 and the
// intercept absorbs the mean.
LinearModel fit_linreg(const Matrix& x, std::span<const double> y);

}  // namespace tarmac::learn

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tarmac/linalg.hpp"

namespace tarmac {

inline constexpr std::size_t kDefaultPcaComponents = 18;

struct PcaModel {
    std::vector<double> mean;
    Matrix components;                        // k × d, orthonormal rows
    std::vector<double> explained_variance;   // length k, nonincreasing

    std::size_t input_dim() const { return mean.size(); }
    std::size_t output_dim() const { return components.rows(); }
};

// Principal axes of the (n-1)-normalized sample covariance of the rows of
// `x`. The component count is min(k, numerical rank). Each component's
// largest-magnitude entry is made positive. Throws FitError for < 2 rows.
PcaModel fit_pca(const Matrix& x, std::size_t k = kDefaultPcaComponents);

// (x - mean) · componentsᵀ. Throws ContractError on dimension mismatch.
std::vector<double> apply_pca(const PcaModel& model, std::span<const double> x);

// mean + scoresᵀ · components
std::vector<double> reconstruct_pca(const PcaModel& model, std::span<const double> scores);

}  // namespace tarmac

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tarmac/learn/config.hpp"
#include "tarmac/learn/dataset.hpp"
#include "tarmac/linalg.hpp"

namespace tarmac::learn {

// Per-feature bin edges. A value's bin is the number of edges strictly below
// it, so "bin <= b" is the same test as "x <= edges[b]".
struct BinMapper {
    std::vector<std::vector<double>> edges;

    // Midpoints between consecutive distinct values while they fit in
    // max_bins; otherwise midpoints at quantile positions of the sorted column.
    static BinMapper fit(const Matrix& x, int max_bins);
    std::size_t bin_count(std::size_t feature) const { return edges[feature].size() + 1; }
    std::uint8_t bin(std::size_t feature, double value) const;
};

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    double gain = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;  // leaf output, already scaled by the learning rate

    bool is_leaf() const { return feature < 0; }
};

struct RegressionTree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root

    double predict_row(std::span<const double> x) const;
    std::size_t leaf_count() const;
    std::size_t split_count() const { return nodes.size() - leaf_count(); }
};

struct GbdtModel {
    double initial_prediction = 0.0;
    double learning_rate = 0.0;
    std::vector<RegressionTree> trees;
    std::vector<std::size_t> split_counts;  // per feature, over `trees`
    std::vector<double> train_rmse;         // entry t: after t rounds
    std::vector<double> validation_rmse;    // entry t: after t rounds, when validated
    int best_rounds = 0;

    double predict_row(std::span<const double> x) const;
    std::vector<double> predict(const Matrix& x) const;
};

// Boosts squared-error regression trees on `y`. With a validation set,
// stops after `patience` rounds without improvement and keeps the best
// prefix of trees. A constant target yields zero trees.
GbdtModel fit_gbdt(const Matrix& x, std::span<const double> y, const GbdtParams& params,
                   const Matrix* validation_x = nullptr, std::span<const double> validation_y = {});

// Departure-delay column only.
GbdtModel fit_gbdt(const Dataset& train, const Dataset& validation, const TrainConfig& config);

inline std::vector<double> predict_gbdt(const GbdtModel& model, const Matrix& x) { return model.predict(x); }

}  // namespace tarmac::learn

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tarmac/learn/config.hpp"
#include "tarmac/learn/dataset.hpp"
#include "tarmac/learn/dense.hpp"
#include "tarmac/learn/standardize.hpp"

namespace tarmac::learn {

struct MlpModel {
    DenseStack stack;
    std::vector<double> params;
    Standardizer input;   // applied to raw features
    Standardizer output;  // maps network outputs back to minutes
};

// Hidden layers of equal width; Glorot-initialized from `seed`.
MlpModel make_mlp(std::size_t input_dim, int hidden_layers, int hidden_width, std::size_t output_dim,
                  std::uint64_t seed);

// Mean over the batch of the squared error summed across output columns,
// with inputs and targets already in network space. Adds dLoss/dparams to
// `grad` (which must be params-sized) and returns the loss.
double mlp_loss_gradient(const MlpModel& model, std::span<const double> params, const Matrix& x, const Matrix& y,
                         std::span<double> grad);

// Network-space forward pass.
Matrix mlp_forward(const MlpModel& model, std::span<const double> params, const Matrix& x);

// Raw features in, minutes out (one column per label).
Matrix predict_mlp(const MlpModel& model, const Matrix& features);

struct FitReport {
    int epochs_run = 0;
    int best_epoch = -1;
    double best_validation_rmse = 0.0;
    std::vector<double> validation_curve;
    std::vector<double> train_loss_curve;
};

// Adam on mini-batches; early stopping on validation departure-delay RMSE
// (minutes) with the configured patience; returns best-epoch weights. An
// empty validation set trains for n_epoch epochs. Throws FitError on a
// non-finite loss.
MlpModel fit_mlp(const Dataset& train, const Dataset& validation, const TrainConfig& config,
                 FitReport* report = nullptr);

}  // namespace tarmac::learn

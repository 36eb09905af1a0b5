#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tarmac/learn/config.hpp"
#include "tarmac/learn/dataset.hpp"
#include "tarmac/learn/dense.hpp"
#include "tarmac/learn/mlp.hpp"
#include "tarmac/learn/standardize.hpp"
#include "tarmac/raster.hpp"

namespace tarmac::learn {

// Convolutional blocks (3×3 'same' convolution, ReLU, 2×2/stride-2 max
// pool) over a 28×28×3 image, flattened and concatenated with the
// standardized flight features, then a fully connected ReLU head with one
// linear output per label.
//
// Parameter layout: for each conv block, filters [out][in][3][3] then biases
// [out]; the dense head follows.
class TrajCnnNet {
public:
    TrajCnnNet() = default;
    TrajCnnNet(int conv_blocks, int filters, std::size_t feature_dim, int fc_layers, int fc_width,
               std::size_t output_dim);

    int conv_blocks() const { return conv_blocks_; }
    int filters() const { return filters_; }
    // Side length entering block b (b == conv_blocks gives the final size).
    std::size_t spatial(int b) const { return spatial_[static_cast<std::size_t>(b)]; }
    std::size_t flattened_dim() const;
    std::size_t feature_dim() const { return feature_dim_; }
    std::size_t output_dim() const { return head_.output_dim(); }
    std::size_t conv_parameter_count() const { return conv_offsets_.back(); }
    std::size_t parameter_count() const { return conv_parameter_count() + head_.parameter_count(); }
    const DenseStack& head() const { return head_; }

    void initialize(std::span<double> params, std::uint64_t seed) const;

    // Flattened conv features for one image given in [row][col][channel]
    // layout; `trace` (optional) keeps what backward needs.
    struct ConvTrace {
        std::vector<std::vector<double>> inputs;     // per block, channel-major
        std::vector<std::vector<double>> activated;  // per block, post-ReLU pre-pool
        std::vector<std::vector<std::uint32_t>> argmax;
    };
    std::vector<double> conv_forward(std::span<const double> params, std::span<const double> image,
                                     ConvTrace* trace) const;
    // Accumulates conv parameter gradients given dLoss/dflattened.
    void conv_backward(std::span<const double> params, const ConvTrace& trace, std::span<const double> d_flat,
                       std::span<double> grad) const;

    // Pre-pool output of block b for inspection and tests.
    std::vector<double> conv_block_output(std::span<const double> params, int block,
                                          std::span<const double> input_channel_major) const;

private:
    std::size_t conv_offset(int b) const { return conv_offsets_[static_cast<std::size_t>(b)]; }
    std::size_t in_channels(int b) const { return b == 0 ? kImageChannels : static_cast<std::size_t>(filters_); }

    int conv_blocks_ = 0;
    int filters_ = 0;
    std::size_t feature_dim_ = 0;
    std::vector<std::size_t> spatial_;
    std::vector<std::size_t> conv_offsets_;
    DenseStack head_;
};

struct TrajCnnModel {
    TrajCnnNet net;
    std::vector<double> params;
    Standardizer input;
    Standardizer output;
};

TrajCnnModel make_trajcnn(std::size_t feature_dim, const TrajCnnParams& p, std::size_t output_dim,
                          std::uint64_t seed);

// Mean over the batch of squared error summed across outputs, inputs and
// targets in network space. Adds dLoss/dparams into `grad`.
double trajcnn_loss_gradient(const TrajCnnModel& model, std::span<const double> params,
                             const std::vector<const TrajImage*>& images, const Matrix& x, const Matrix& y,
                             std::span<double> grad);

Matrix trajcnn_forward(const TrajCnnModel& model, std::span<const double> params,
                       const std::vector<const TrajImage*>& images, const Matrix& x);

// Scaled images plus raw features in, minutes out. ContractError when the
// image and feature row counts differ.
Matrix predict_trajcnn(const TrajCnnModel& model, const std::vector<TrajImage>& images, const Matrix& features);

// Datasets must carry scaled images aligned with their rows.
TrajCnnModel fit_trajcnn(const Dataset& train, const Dataset& validation, const TrainConfig& config,
                         FitReport* report = nullptr);

}  // namespace tarmac::learn

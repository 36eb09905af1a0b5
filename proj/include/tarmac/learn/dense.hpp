#pragma once

#include <span>
#include <vector>

#include "tarmac/linalg.hpp"
#include "tarmac/rng.hpp"

namespace tarmac::learn {

// Fully connected stack: ReLU on every hidden layer, identity on the output.
// Parameters live in one flat buffer, per layer: weights [out][in] row-major
// then biases [out].
class DenseStack {
public:
    DenseStack() = default;
    explicit DenseStack(std::vector<std::size_t> sizes);

    const std::vector<std::size_t>& sizes() const { return sizes_; }
    std::size_t input_dim() const { return sizes_.front(); }
    std::size_t output_dim() const { return sizes_.back(); }
    std::size_t layer_count() const { return sizes_.size() - 1; }
    std::size_t parameter_count() const { return offsets_.back(); }
    std::size_t weight_offset(std::size_t layer) const { return offsets_[layer]; }
    std::size_t bias_offset(std::size_t layer) const { return offsets_[layer] + sizes_[layer] * sizes_[layer + 1]; }

    // Glorot-uniform weights, zero biases.
    void initialize(std::span<double> params, Rng& rng) const;

    // activations[0] = input batch; activations[l+1] = layer l output
    // (post-ReLU for hidden layers). Each matrix is batch × width.
    void forward(std::span<const double> params, const Matrix& input, std::vector<Matrix>& activations) const;

    // Accumulates dLoss/dparams into `grad` given dLoss/doutput and returns
    // dLoss/dinput.
    Matrix backward(std::span<const double> params, const std::vector<Matrix>& activations, const Matrix& d_output,
                    std::span<double> grad) const;

private:
    std::vector<std::size_t> sizes_;
    std::vector<std::size_t> offsets_;
};

}  // namespace tarmac::learn

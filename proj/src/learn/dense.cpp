#include "tarmac/learn/dense.hpp"

#include <cmath>

#include "tarmac/error.hpp"
#include "tarmac/simd/kernels.hpp"

namespace tarmac::learn {

DenseStack::DenseStack(std::vector<std::size_t> sizes) : sizes_(std::move(sizes)) {
    require(sizes_.size() >= 2, "DenseStack: need input and output sizes");
    offsets_.push_back(0);
    for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
        require(sizes_[l] > 0 && sizes_[l + 1] > 0, "DenseStack: zero-width layer");
        offsets_.push_back(offsets_.back() + sizes_[l] * sizes_[l + 1] + sizes_[l + 1]);
    }
}

void DenseStack::initialize(std::span<double> params, Rng& rng) const {
    require(params.size() == parameter_count(), "DenseStack::initialize: size mismatch");
    for (std::size_t l = 0; l < layer_count(); ++l) {
        const double limit = std::sqrt(6.0 / static_cast<double>(sizes_[l] + sizes_[l + 1]));
        const std::size_t w = weight_offset(l);
        for (std::size_t i = 0; i < sizes_[l] * sizes_[l + 1]; ++i) params[w + i] = rng.uniform(-limit, limit);
        const std::size_t b = bias_offset(l);
        for (std::size_t i = 0; i < sizes_[l + 1]; ++i) params[b + i] = 0.0;
    }
}

void DenseStack::forward(std::span<const double> params, const Matrix& input, std::vector<Matrix>& activations) const {
    require(input.cols() == input_dim(), "DenseStack::forward: input width mismatch");
    const std::size_t batch = input.rows();
    activations.resize(layer_count() + 1);
    activations[0] = input;
    for (std::size_t l = 0; l < layer_count(); ++l) {
        const std::size_t in = sizes_[l];
        const std::size_t out = sizes_[l + 1];
        const bool hidden = l + 1 < layer_count();
        const Matrix& x = activations[l];
        Matrix& y = activations[l + 1];
        y = Matrix(batch, out);
        const double* w = params.data() + weight_offset(l);
        const double* b = params.data() + bias_offset(l);
        // Weight row outermost so it stays cache-resident across the batch.
        for (std::size_t o = 0; o < out; ++o) {
            const std::span<const double> w_row(w + o * in, in);
            for (std::size_t s = 0; s < batch; ++s) {
                const double v = b[o] + simd::dot(w_row, x.row(s));
                y(s, o) = hidden && v < 0.0 ? 0.0 : v;
            }
        }
    }
}

Matrix DenseStack::backward(std::span<const double> params, const std::vector<Matrix>& activations,
                            const Matrix& d_output, std::span<double> grad) const {
    require(grad.size() == parameter_count(), "DenseStack::backward: gradient size mismatch");
    require(activations.size() == layer_count() + 1, "DenseStack::backward: missing activations");
    const std::size_t batch = d_output.rows();
    Matrix delta = d_output;
    for (std::size_t l = layer_count(); l-- > 0;) {
        const std::size_t in = sizes_[l];
        const std::size_t out = sizes_[l + 1];
        const Matrix& x = activations[l];
        const Matrix& y = activations[l + 1];
        if (l + 1 < layer_count())
            for (std::size_t s = 0; s < batch; ++s)
                for (std::size_t o = 0; o < out; ++o)
                    if (y(s, o) <= 0.0) delta(s, o) = 0.0;

        const double* w = params.data() + weight_offset(l);
        double* gw = grad.data() + weight_offset(l);
        double* gb = grad.data() + bias_offset(l);
        Matrix d_in(batch, in);
        for (std::size_t o = 0; o < out; ++o) {
            const std::span<const double> w_row(w + o * in, in);
            const std::span<double> gw_row(gw + o * in, in);
            for (std::size_t s = 0; s < batch; ++s) {
                const double d = delta(s, o);
                if (d == 0.0) continue;
                gb[o] += d;
                simd::axpy(d, x.row(s), gw_row);
                simd::axpy(d, w_row, d_in.row(s));
            }
        }
        delta = std::move(d_in);
    }
    return delta;
}

}  // namespace tarmac::learn

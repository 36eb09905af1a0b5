#include "tarmac/learn/standardize.hpp"

#include <algorithm>
#include <cmath>

#include "tarmac/error.hpp"

namespace tarmac::learn {

Standardizer Standardizer::fit(const Matrix& x) {
    require(x.rows() > 0, "Standardizer::fit: no rows");
    Standardizer s;
    const std::size_t n = x.rows();
    s.mean.assign(x.cols(), 0.0);
    s.scale.assign(x.cols(), 0.0);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < x.cols(); ++c) s.mean[c] += x(r, c);
    for (double& m : s.mean) m /= static_cast<double>(n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < x.cols(); ++c) {
            const double d = x(r, c) - s.mean[c];
            s.scale[c] += d * d;
        }
    for (std::size_t c = 0; c < x.cols(); ++c) {
        const double sd = std::sqrt(s.scale[c] / static_cast<double>(n));
        // Treat float-noise spreads around a constant as constant.
        s.scale[c] = sd > 1e-12 * std::max(1.0, std::abs(s.mean[c])) ? sd : 0.0;
    }
    return s;
}

Standardizer Standardizer::identity(std::size_t dim) {
    Standardizer s;
    s.mean.assign(dim, 0.0);
    s.scale.assign(dim, 1.0);
    return s;
}

void Standardizer::transform_row(std::span<const double> in, std::span<double> out) const {
    require(in.size() == mean.size() && out.size() == mean.size(), "Standardizer: dimension mismatch");
    for (std::size_t c = 0; c < in.size(); ++c) out[c] = scale[c] > 0.0 ? (in[c] - mean[c]) / scale[c] : 0.0;
}

Matrix Standardizer::transform(const Matrix& x) const {
    Matrix out(x.rows(), x.cols());
    for (std::size_t r = 0; r < x.rows(); ++r) transform_row(x.row(r), out.row(r));
    return out;
}

void Standardizer::inverse_row(std::span<const double> in, std::span<double> out) const {
    require(in.size() == mean.size() && out.size() == mean.size(), "Standardizer: dimension mismatch");
    for (std::size_t c = 0; c < in.size(); ++c) out[c] = mean[c] + in[c] * scale[c];
}

}  // namespace tarmac::learn

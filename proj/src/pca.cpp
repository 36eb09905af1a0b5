#include "tarmac/pca.hpp"

#include <algorithm>
#include <cmath>

#include "tarmac/error.hpp"

namespace tarmac {

PcaModel fit_pca(const Matrix& x, std::size_t k) {
    if (x.rows() < 2) throw FitError("fit_pca: need at least 2 rows");
    if (k == 0) throw ParameterError("fit_pca: component count must be positive");
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();

    PcaModel model;
    model.mean.assign(d, 0.0);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < d; ++c) model.mean[c] += x(r, c);
    for (double& m : model.mean) m /= static_cast<double>(n);

    Matrix cov(d, d);
    std::vector<double> centered(d);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < d; ++c) centered[c] = x(r, c) - model.mean[c];
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = i; j < d; ++j) cov(i, j) += centered[i] * centered[j];
    }
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i; j < d; ++j) {
            cov(i, j) /= static_cast<double>(n - 1);
            cov(j, i) = cov(i, j);
        }

    const SymmetricEigen eig = symmetric_eigen(cov);
    const double top = eig.values.empty() ? 0.0 : std::max(eig.values.front(), 0.0);
    std::size_t rank = 0;
    while (rank < d && eig.values[rank] > 1e-10 * top && top > 0.0) ++rank;
    const std::size_t kept = std::min(k, rank);

    model.components = Matrix(kept, d);
    model.explained_variance.resize(kept);
    for (std::size_t r = 0; r < kept; ++r) {
        model.explained_variance[r] = eig.values[r];
        std::size_t arg = 0;
        for (std::size_t c = 1; c < d; ++c)
            if (std::abs(eig.vectors(r, c)) > std::abs(eig.vectors(r, arg))) arg = c;
        const double sign = eig.vectors(r, arg) < 0.0 ? -1.0 : 1.0;
        for (std::size_t c = 0; c < d; ++c) model.components(r, c) = sign * eig.vectors(r, c);
    }
    return model;
}

std::vector<double> apply_pca(const PcaModel& model, std::span<const double> x) {
    require(x.size() == model.input_dim(), "apply_pca: input dimension mismatch");
    std::vector<double> out(model.output_dim(), 0.0);
    for (std::size_t r = 0; r < model.output_dim(); ++r) {
        double s = 0.0;
        for (std::size_t c = 0; c < x.size(); ++c) s += (x[c] - model.mean[c]) * model.components(r, c);
        out[r] = s;
    }
    return out;
}

std::vector<double> reconstruct_pca(const PcaModel& model, std::span<const double> scores) {
    require(scores.size() == model.output_dim(), "reconstruct_pca: score dimension mismatch");
    std::vector<double> out = model.mean;
    for (std::size_t r = 0; r < scores.size(); ++r)
        for (std::size_t c = 0; c < out.size(); ++c) out[c] += scores[r] * model.components(r, c);
    return out;
}

}  // namespace tarmac

#include "tarmac/learn/linreg.hpp"

#include "tarmac/error.hpp"
#include "tarmac/learn/metrics.hpp"
#include "tarmac/learn/standardize.hpp"

namespace tarmac::learn {

double LinearModel::predict_row(std::span<const double> x) const {
    require(x.size() == weights.size(), "LinearModel: feature count mismatch");
    double s = intercept;
    for (std::size_t i = 0; i < x.size(); ++i) s += weights[i] * x[i];
    return s;
}

std::vector<double> LinearModel::predict(const Matrix& x) const {
    std::vector<double> out(x.rows());
    for (std::size_t r = 0; r < x.rows(); ++r) out[r] = predict_row(x.row(r));
    return out;
}

LinearModel fit_linreg(const Matrix& x, std::span<const double> y) {
    require(x.rows() == y.size() && !y.empty(), "fit_linreg: row count mismatch");
    const std::size_t d = x.cols();
    const Standardizer s = Standardizer::fit(x);
    const Matrix z = s.transform(x);
    const double y_mean = mean(y);

    Matrix gram(d, d);
    std::vector<double> rhs(d, 0.0);
    for (std::size_t r = 0; r < z.rows(); ++r) {
        const auto row = z.row(r);
        const double yc = y[r] - y_mean;
        for (std::size_t i = 0; i < d; ++i) {
            rhs[i] += row[i] * yc;
            for (std::size_t j = i; j < d; ++j) gram(i, j) += row[i] * row[j];
        }
    }
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < i; ++j) gram(i, j) = gram(j, i);

    const std::vector<double> beta = d > 0 ? solve_spd(gram, rhs, kLinregJitter) : std::vector<double>{};
    LinearModel m;
    m.weights.assign(d, 0.0);
    m.intercept = y_mean;
    for (std::size_t i = 0; i < d; ++i) {
        if (s.scale[i] == 0.0) continue;
        m.weights[i] = beta[i] / s.scale[i];
        m.intercept -= m.weights[i] * s.mean[i];
    }
    return m;
}

}  // namespace tarmac::learn

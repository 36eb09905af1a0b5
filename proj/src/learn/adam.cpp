#include "tarmac/learn/adam.hpp"

#include <cmath>

#include "tarmac/error.hpp"

namespace tarmac::learn {

Adam::Adam(std::size_t parameter_count, AdamOptions options)
    : opt_(options), m_(parameter_count, 0.0), v_(parameter_count, 0.0) {}

void Adam::step(std::span<double> params, std::span<const double> grad) {
    require(params.size() == m_.size() && grad.size() == m_.size(), "Adam::step: size mismatch");
    ++t_;
    const double c1 = 1.0 - std::pow(opt_.beta1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(opt_.beta2, static_cast<double>(t_));
    const double lr = opt_.learning_rate;
    for (std::size_t i = 0; i < params.size(); ++i) {
        m_[i] = opt_.beta1 * m_[i] + (1.0 - opt_.beta1) * grad[i];
        v_[i] = opt_.beta2 * v_[i] + (1.0 - opt_.beta2) * grad[i] * grad[i];
        const double m_hat = m_[i] / c1;
        const double v_hat = v_[i] / c2;
        params[i] -= lr * m_hat / (std::sqrt(v_hat) + opt_.epsilon);
    }
}

}  // namespace tarmac::learn

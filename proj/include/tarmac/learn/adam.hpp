#pragma once

#include <span>
#include <vector>

namespace tarmac::learn {

struct AdamOptions {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

class Adam {
public:
    Adam(std::size_t parameter_count, AdamOptions options);

    // One bias-corrected update of `params` against `grad`.
    void step(std::span<double> params, std::span<const double> grad);

    long steps() const { return t_; }

private:
    AdamOptions opt_;
    std::vector<double> m_;
    std::vector<double> v_;
    long t_ = 0;
};

}  // namespace tarmac::learn

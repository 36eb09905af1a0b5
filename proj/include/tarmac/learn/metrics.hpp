#pragma once

#include <span>

namespace tarmac::learn {

// Throw ContractError on empty or mismatched inputs.
double rmse(std::span<const double> pred, std::span<const double> truth);
double mae(std::span<const double> pred, std::span<const double> truth);

double mean(std::span<const double> v);
// Population (n-divisor) standard deviation.
double population_std(std::span<const double> v);

}  // namespace tarmac::learn

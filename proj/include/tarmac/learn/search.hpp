#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "tarmac/learn/config.hpp"
#include "tarmac/rng.hpp"

namespace tarmac::learn {

// Bounds of one sampled hyper-parameter, in the units the model uses.
struct ParamRange {
    std::string name;
    double low;
    double high;
};

// Search spaces exist for the MLP and TrajCNN; other kinds throw
// ParameterError.
std::vector<ParamRange> search_ranges(ModelKind kind);

// Draws one configuration: exponents uniform over their interval, counts
// rounded to the nearest integer. Fields outside the space keep `base`.
TrainConfig sample_config(ModelKind kind, const TrainConfig& base, Rng& rng);

// Reads the sampled fields back out of a config, in search_ranges order.
std::vector<double> sampled_values(ModelKind kind, const TrainConfig& c);

struct Trial {
    int index = 0;
    TrainConfig config;
    double validation_rmse = 0.0;
    double seconds = 0.0;
};

struct SearchResult {
    std::vector<Trial> trials;
    std::size_t best = 0;  // lowest validation RMSE, earliest on ties

    const TrainConfig& best_config() const { return trials[best].config; }
};

using TrialEvaluator = std::function<double(const TrainConfig&)>;

// Samples `budget` configurations and scores each with `evaluate`. Throws
// ParameterError on a zero budget.
SearchResult hyper_search(ModelKind kind, const TrainConfig& base, int budget, std::uint64_t seed,
                          const TrialEvaluator& evaluate);

// trial,<sampled names...>,validation_rmse,seconds
void write_trial_log(std::ostream& out, ModelKind kind, const SearchResult& result);

}  // namespace tarmac::learn

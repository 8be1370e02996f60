#pragma once

// Multiplicative weights over N experts with 0-1 losses.
//
// Weights are w_i = exp(-eta * L_i) where L_i is expert i's cumulative loss,
// stored as log-weights so long horizons do not underflow.

#include "llab/concept.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace llab {

// sqrt((8 / T) ln N). Natural log, as written in the learning-rate formula.
double mw_eta(std::size_t horizon, std::size_t num_experts);

// sqrt((T / 2) ln N).
double mw_regret_bound(std::size_t horizon, std::size_t num_experts);

class MWState {
public:
    MWState(std::size_t num_experts, double eta);

    std::size_t size() const { return cumulative_.size(); }
    double eta() const { return eta_; }
    std::size_t round() const { return round_; }
    const std::vector<std::uint64_t>& cumulative_losses() const { return cumulative_; }

    double log_weight(std::size_t i) const { return -eta_ * static_cast<double>(cumulative_[i]); }
    double weight(std::size_t i) const;
    // Weights divided by their sum.
    std::vector<double> normalized_weights() const;

    // Multiplies weight i by exp(-eta * losses[i]); losses are 0 or 1.
    void update(std::span<const std::uint8_t> losses);

    // Mass on y = normalized weight of experts whose output is y.
    PredictionDistribution mix(std::span<const Label> outputs) const;

private:
    double eta_;
    std::size_t round_ = 0;
    std::vector<std::uint64_t> cumulative_;
};

MWState mw_update(MWState state, std::span<const std::uint8_t> losses);
PredictionDistribution mw_mix(const MWState& state, std::span<const Label> outputs);

// Binary expert-advice protocol: experts output e[i][t] in {0,1}, the
// forecaster outputs p_t = weighted mean of e[.][t], outcome y_t in {0,1}.
struct BinaryExpertsResult {
    std::vector<double> forecasts;
    std::vector<std::uint8_t> outcomes;
    double forecaster_loss = 0.0;  // sum_t |p_t - y_t|
    std::uint64_t best_expert_loss = 0;
    double regret = 0.0;
    double bound = 0.0;
};

// outcomes.empty() selects the adaptive adversary y_t = 1[p_t <= 1/2].
BinaryExpertsResult run_binary_experts(const std::vector<std::vector<std::uint8_t>>& advice,
                                       std::vector<std::uint8_t> outcomes);

}  // namespace llab

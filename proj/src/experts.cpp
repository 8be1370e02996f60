#include "llab/experts.hpp"

#include "llab/errors.hpp"

#include <algorithm>
#include <cmath>

namespace llab {

double mw_eta(std::size_t horizon, std::size_t num_experts) {
    if (horizon == 0 || num_experts == 0) throw MalformedInput("mw_eta needs T >= 1 and N >= 1");
    return std::sqrt(8.0 / static_cast<double>(horizon) * std::log(static_cast<double>(num_experts)));
}

double mw_regret_bound(std::size_t horizon, std::size_t num_experts) {
    if (horizon == 0 || num_experts == 0) throw MalformedInput("mw_regret_bound needs T >= 1 and N >= 1");
    return std::sqrt(static_cast<double>(horizon) / 2.0 * std::log(static_cast<double>(num_experts)));
}

MWState::MWState(std::size_t num_experts, double eta) : eta_(eta), cumulative_(num_experts, 0) {
    if (num_experts == 0) throw MalformedInput("multiplicative weights needs at least one expert");
    if (!(eta >= 0.0) || !std::isfinite(eta)) throw MalformedInput("learning rate must be finite and >= 0");
}

double MWState::weight(std::size_t i) const { return std::exp(log_weight(i)); }

std::vector<double> MWState::normalized_weights() const {
    // Shift by the largest log-weight (smallest cumulative loss) before exp.
    const auto best = *std::min_element(cumulative_.begin(), cumulative_.end());
    std::vector<double> w(size());
    double total = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
        w[i] = std::exp(-eta_ * static_cast<double>(cumulative_[i] - best));
        total += w[i];
    }
    if (!(total > 0.0)) throw InternalError("multiplicative weights lost all mass");
    for (auto& x : w) x /= total;
    return w;
}

void MWState::update(std::span<const std::uint8_t> losses) {
    if (losses.size() != size()) {
        throw MalformedInput("loss vector has " + std::to_string(losses.size()) + " entries for " +
                             std::to_string(size()) + " experts");
    }
    for (std::size_t i = 0; i < size(); ++i) {
        if (losses[i] > 1) throw MalformedInput("expert losses must be 0 or 1");
        cumulative_[i] += losses[i];
    }
    ++round_;
}

PredictionDistribution MWState::mix(std::span<const Label> outputs) const {
    if (outputs.size() != size()) {
        throw MalformedInput("expert output vector has " + std::to_string(outputs.size()) + " entries for " +
                             std::to_string(size()) + " experts");
    }
    const auto w = normalized_weights();
    std::map<Label, double> acc;
    for (std::size_t i = 0; i < size(); ++i) acc[outputs[i]] += w[i];
    PredictionDistribution p;
    for (const auto& [y, m] : acc) p.add(y, m);
    return p;
}

MWState mw_update(MWState state, std::span<const std::uint8_t> losses) {
    state.update(losses);
    return state;
}

PredictionDistribution mw_mix(const MWState& state, std::span<const Label> outputs) { return state.mix(outputs); }

BinaryExpertsResult run_binary_experts(const std::vector<std::vector<std::uint8_t>>& advice,
                                       std::vector<std::uint8_t> outcomes) {
    if (advice.empty() || advice.front().empty()) throw MalformedInput("advice matrix must be non-empty");
    const std::size_t n = advice.size();
    const std::size_t horizon = advice.front().size();
    for (const auto& row : advice) {
        if (row.size() != horizon) throw MalformedInput("advice rows differ in length");
    }
    const bool adaptive = outcomes.empty();
    if (!adaptive && outcomes.size() != horizon) throw MalformedInput("outcome sequence length mismatch");

    MWState state(n, mw_eta(horizon, n));
    BinaryExpertsResult r;
    std::vector<std::uint64_t> expert_loss(n, 0);
    std::vector<std::uint8_t> losses(n);
    for (std::size_t t = 0; t < horizon; ++t) {
        const auto w = state.normalized_weights();
        double p = 0.0;
        for (std::size_t i = 0; i < n; ++i) p += w[i] * advice[i][t];
        const std::uint8_t y = adaptive ? static_cast<std::uint8_t>(p <= 0.5 ? 1 : 0) : outcomes[t];
        if (y > 1) throw MalformedInput("outcomes must be 0 or 1");
        r.forecasts.push_back(p);
        r.outcomes.push_back(y);
        r.forecaster_loss += std::abs(p - y);
        for (std::size_t i = 0; i < n; ++i) {
            losses[i] = advice[i][t] != y ? 1 : 0;
            expert_loss[i] += losses[i];
        }
        state.update(losses);
    }
    r.best_expert_loss = *std::min_element(expert_loss.begin(), expert_loss.end());
    r.regret = r.forecaster_loss - static_cast<double>(r.best_expert_loss);
    r.bound = mw_regret_bound(horizon, n);
    return r;
}

}  // namespace llab

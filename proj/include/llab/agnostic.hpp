#pragma once

// Agnostic online learners built from SOA experts under multiplicative weights.
//
// Subset experts (family J): for every J of at most L rounds, expert J predicts
// at round t what SOA would predict after seeing only the examples at rounds
// J ∩ [0, t). Regret of the mixture against the best hypothesis is at most
//
//     L + sqrt((T/2) L ln(eT/L)).
//
// Labeled experts (family Q, finite label alphabet): for every (J, Y) with
// |J| <= L and Y a label per round of J, the expert outputs Y_t on J and
// otherwise what SOA predicts when its history is the expert's own outputs.
// The expert built from the best hypothesis h* replicates h* on every round.
//
// Rounds are 0-based throughout the API.

#include "llab/concept.hpp"
#include "llab/dimensions.hpp"
#include "llab/experts.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace llab {

struct Expert {
    std::vector<std::size_t> rounds;  // J, increasing
    std::vector<Label> labels;        // Y aligned with rounds; empty for subset experts
    friend bool operator==(const Expert&, const Expert&) = default;
    friend auto operator<=>(const Expert&, const Expert&) = default;
};

enum class ExpertKind { subset, labeled };

struct ExpertFamily {
    ExpertKind kind = ExpertKind::subset;
    std::size_t horizon = 0;
    int budget = 0;             // L
    std::size_t num_labels = 0;  // only for labeled families
    std::vector<Expert> experts;

    std::size_t size() const { return experts.size(); }
    // Index of an expert in this family, if present.
    std::optional<std::size_t> find(const Expert& e) const;
};

// sum_{i<=L} C(T, i), saturating at UINT64_MAX.
std::uint64_t subset_family_size(std::size_t horizon, int budget);
// sum_{i<=L} C(T, i) |Y|^i, saturating.
std::uint64_t labeled_family_size(std::size_t horizon, int budget, std::size_t num_labels);

// All J ⊆ {0..T-1} with |J| <= L, in lexicographic order of the sorted index
// lists. Throws ResourceError naming the required size when above cap.
ExpertFamily enumerate_experts(std::size_t horizon, int budget, std::uint64_t cap);
// All (J, Y) pairs, ordered by J then Y lexicographically.
ExpertFamily enumerate_labeled_experts(std::size_t horizon, int budget, std::size_t num_labels, std::uint64_t cap);

// g^J_t: SOA on the examples of `history` at rounds in J below t, queried at x.
// history must cover rounds [0, t).
Label expert_predict(DimensionSolver& solver, const std::vector<std::size_t>& J, const LabeledSequence& history,
                     std::size_t t, Point x);
Label expert_predict(const ConceptClass& c, const std::vector<std::size_t>& J, const LabeledSequence& history,
                     std::size_t t, Point x);

// L + sqrt((T/2) L ln(eT/L)); 0 when L = 0.
double theoretical_regret_bound(std::size_t horizon, int littlestone);

// Online learner interface for randomized predictors.
class RandomizedLearner {
public:
    virtual ~RandomizedLearner() = default;
    virtual PredictionDistribution predict(Point x) = 0;
    virtual void observe(Point x, Label y) = 0;
};

// Multiplicative weights over an expert family. Expert SOA states live in a
// trie keyed by the absorbed (round, label) history so experts sharing a
// history share one version space and one prediction per round.
class ExpertMixture final : public RandomizedLearner {
public:
    ExpertMixture(const ConceptClass& c, DimensionSolver& solver, ExpertFamily family);

    PredictionDistribution predict(Point x) override;
    void observe(Point x, Label y) override;

    std::size_t round() const { return round_; }
    const ExpertFamily& family() const { return family_; }
    const MWState& weights() const { return mw_; }
    // Outputs of the most recent predict() call.
    const std::vector<Label>& expert_outputs() const { return outputs_; }
    // Losses of the most recent observe() call.
    const std::vector<std::uint8_t>& expert_losses() const { return losses_; }

private:
    struct Node {
        HypothesisSet members;
        std::map<std::pair<std::size_t, Label>, std::size_t> children;
        std::size_t predicted_round = SIZE_MAX;
        Point predicted_point = 0;
        Label prediction = kDefaultLabel;
    };

    std::size_t child(std::size_t node, std::size_t t, Point x, Label y);
    Label node_prediction(std::size_t node, Point x);

    const ConceptClass& c_;
    DimensionSolver& solver_;
    ExpertFamily family_;
    MWState mw_;
    std::vector<Node> trie_;
    std::vector<std::size_t> position_;  // current trie node per expert
    std::vector<std::size_t> cursor_;    // next unread entry of the expert's J
    std::vector<Label> outputs_;
    std::vector<std::uint8_t> losses_;
    std::size_t round_ = 0;
    bool predicted_ = false;
    Point pending_point_ = 0;
};

struct RoundRecord {
    Point point = 0;
    Label label = 0;
    PredictionDistribution prediction;
    std::vector<std::uint8_t> expert_losses;
    double expected_loss = 0.0;  // 1 - p_t(Y_t)
    double cumulative_expected_loss = 0.0;
    std::uint64_t opt_so_far = 0;
};

// Full record of one run of an expert mixture.
struct LearnerTrace {
    ExpertKind kind = ExpertKind::subset;
    std::size_t horizon = 0;
    int littlestone = 0;  // L used to build the family
    std::size_t num_experts = 0;
    double eta = 0.0;
    std::vector<RoundRecord> rounds;

    double cumulative_expected_loss = 0.0;
    std::uint64_t opt = 0;
    HypothesisIndex opt_hypothesis = 0;
    double regret = 0.0;  // cumulative expected loss - OPT
    double bound = 0.0;   // guarantee on regret for this learner

    std::vector<std::uint64_t> expert_cumulative_losses;
    std::uint64_t best_expert_loss = 0;
    std::size_t best_expert = 0;
    double expert_regret_bound = 0.0;  // sqrt((T/2) ln N)
    // Largest |(1 - p_t(Y_t)) - weighted mean of expert losses| over rounds.
    double max_mixture_identity_gap = 0.0;

    bool bound_holds() const { return regret <= bound + 1e-9; }
    bool expert_bound_holds() const {
        return cumulative_expected_loss - static_cast<double>(best_expert_loss) <= expert_regret_bound + 1e-9;
    }
};

struct LearnerOptions {
    std::optional<int> budget_override;  // use this L instead of littlestone_dim(c)
    std::uint64_t expert_cap = 0;        // 0: use cap_cells()
};

// Runs the subset-expert mixture (eta from T = |s| and |J|) over s.
LearnerTrace aag_run(const ConceptClass& c, const LabeledSequence& s, const LearnerOptions& options = {});
LearnerTrace aag_run(DimensionSolver& solver, const LabeledSequence& s, const LearnerOptions& options = {});

// Runs the labeled (adaptive) expert mixture over s.
LearnerTrace finite_y_learner(const ConceptClass& c, const LabeledSequence& s, const LearnerOptions& options = {});
LearnerTrace finite_y_learner(DimensionSolver& solver, const LabeledSequence& s, const LearnerOptions& options = {});

// Drives a mixture through a fixed sequence and records the trace.
LearnerTrace run_mixture(DimensionSolver& solver, ExpertFamily family, const LabeledSequence& s, double bound);

// Best-expert certificate for the subset family.
struct BestExpertWitness {
    HypothesisIndex best_hypothesis = 0;   // h*
    std::uint64_t opt = 0;
    std::vector<std::size_t> agreeing_rounds;  // R*: rounds where h* is right
    std::vector<std::size_t> mistake_rounds;   // J*: conservative SOA mistakes on R*
    int littlestone = 0;
    std::uint64_t expert_mistakes = 0;  // sum_t 1[g^{J*}_t != Y_t]
    bool correct_off_witness = false;   // g^{J*}_t = Y_t on R* \ J*

    bool size_ok() const { return static_cast<int>(mistake_rounds.size()) <= littlestone; }
    bool mistakes_ok() const { return expert_mistakes <= opt + static_cast<std::uint64_t>(littlestone); }
    bool holds() const { return size_ok() && mistakes_ok() && correct_off_witness; }
};

BestExpertWitness best_expert_witness(const ConceptClass& c, const LabeledSequence& s);
BestExpertWitness best_expert_witness(DimensionSolver& solver, const LabeledSequence& s);

// The labeled expert (J*, Y*) that replays h*: J* are the rounds where SOA,
// fed h*'s own labels, mispredicts; Y* are h*'s labels there.
Expert replicating_expert(DimensionSolver& solver, const LabeledSequence& s, HypothesisIndex h);

// Outputs of one labeled expert on the points of s (labels of s unused).
std::vector<Label> labeled_expert_outputs(DimensionSolver& solver, const Expert& e, const LabeledSequence& s);

}  // namespace llab

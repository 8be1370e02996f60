#pragma once

// Adversaries and the bound-verification experiment runner.

#include "llab/agnostic.hpp"
#include "llab/concept.hpp"
#include "llab/oracles.hpp"
#include "llab/soa.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace llab {

// Walks a depth-L shattered tree, answering each node with whichever edge
// label differs from the learner's prediction. The result is realizable, has
// length L, and the learner errs on every round. Throws PreconditionError for
// randomized learners or an empty class.
LabeledSequence tree_walk_adversary(const ConceptClass& c, OnlineLearner& learner);

// Points uniform; label h(x), replaced with probability `rate` by a uniformly
// chosen different label. Deterministic in the seed.
LabeledSequence noisy_adversary(const ConceptClass& c, HypothesisIndex h, double rate, std::size_t horizon,
                                std::uint64_t seed);

// Adaptive adversary against a randomized learner: points uniform, and each
// label is the one, among labels some hypothesis outputs at the point, that
// the learner's current prediction gives the least mass (lowest index on ties).
LabeledSequence min_mass_adversary(const ConceptClass& c, RandomizedLearner& learner, std::size_t horizon,
                                   std::uint64_t seed);

// Upper bound on the sequential graph dimension from the Littlestone
// dimension: 2 L log2(e |Y|).
double sequential_graph_bound(int littlestone, std::size_t num_labels);

struct ExperimentConfig {
    // Path to a class file, "example1:M", or "random:NX,NY,NH".
    std::string class_source;
    // Optional sequence file; when set the adversary is not used.
    std::string sequence_file;
    // "noisy" (rate from noise_rate), "minmass" or "treewalk".
    std::string adversary = "noisy";
    double noise_rate = 0.2;
    // "aag", "finitey" or "soa".
    std::string learner = "aag";
    std::size_t horizon = 0;  // 0: length of the sequence file
    std::size_t trials = 1;
    std::uint64_t seed = 1;
    std::string out_prefix;  // empty: write nothing
    std::uint64_t cap_cells = 0;  // 0: keep the global cap
    std::optional<int> budget_override;
    // Test hook: every regret bound is multiplied by this before checking.
    double bound_scale = 1.0;
};

struct Check {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    bool passed = false;
};

struct TrialReport {
    std::size_t trial = 0;
    LabeledSequence sequence;
    LearnerTrace trace;
    std::vector<Check> checks;
    nlohmann::json certificate;
    bool passed() const;
};

struct Report {
    std::string learner;
    int littlestone = 0;
    std::optional<int> sequential_graph;  // absent when the loss class exceeds the cap
    std::vector<TrialReport> trials;
    std::vector<Check> class_checks;
    bool passed() const;
    nlohmann::json to_json() const;
};

// Builds the class named by a class source string.
ConceptClass load_class_source(const std::string& source, std::uint64_t seed);

// Runs every trial, evaluates each applicable inequality and, if out_prefix is
// set, writes PREFIX.json plus the per-round CSV (PREFIX.csv for one trial,
// PREFIX.<k>.csv per trial otherwise).
Report run_experiment(const ExperimentConfig& config);

// Per-round CSV: t,expected_loss,cum_expected_loss,opt_so_far,bound (t is 1-based).
std::string trace_csv(const LearnerTrace& trace);
nlohmann::json trace_certificate(const LearnerTrace& trace, const ExpertFamily* family = nullptr);

// SOA run as a trace: expected loss is the 0-1 mistake, bound is L.
LearnerTrace soa_trace(DimensionSolver& solver, const LabeledSequence& s);

}  // namespace llab

#pragma once

// Exhaustive oracles over finite classes: best hypothesis in hindsight,
// sequential Rademacher complexity and the epsilon-approximation error of a
// subsample.

#include "llab/concept.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace llab {

struct OptResult {
    HypothesisIndex hypothesis = 0;  // lowest index among minimizers
    std::uint64_t mistakes = 0;
};

// min_h sum_t 1[h(X_t) != Y_t]. Throws PreconditionError for an empty class.
OptResult opt_mistakes(const ConceptClass& c, const LabeledSequence& s);

// OPT of every prefix: entry t is OPT over rounds 0..t.
std::vector<std::uint64_t> opt_prefix(const ConceptClass& c, const LabeledSequence& s);

// Per-hypothesis mistake counts over s.
std::vector<std::uint64_t> hypothesis_mistakes(const ConceptClass& c, const LabeledSequence& s);

// Exact sequential Rademacher complexity of the 0-1 loss class at depth T, by
// enumerating every complete tree mapping sign prefixes to (x, y). The value
// is a rational with denominator T * 2^T and is returned as a double.
// Requires (|X| |Y|)^(2^T - 1) within the cell cap.
double sequential_rademacher(const ConceptClass& c, std::size_t horizon);

// sup_h | mean loss of h on the rounds in `sample` - mean loss on s |.
// `sample` indexes s and may repeat rounds; each repeat counts.
double aulln_error(const ConceptClass& c, std::span<const std::size_t> sample, const LabeledSequence& s);

}  // namespace llab

#pragma once

// Multiclass Standard Optimal Algorithm.
//
// Prediction at x is the label whose restriction of the current version space
// has the largest Littlestone dimension. Only labels realized at x are
// candidates; ties go to the lowest label index, and an empty version space
// predicts kDefaultLabel.

#include "llab/concept.hpp"
#include "llab/dimensions.hpp"

#include <vector>

namespace llab {

// Deterministic online learner interface used by forcing adversaries.
class OnlineLearner {
public:
    virtual ~OnlineLearner() = default;
    virtual Label predict(Point x) = 0;
    virtual void observe(Point x, Label y) = 0;
    virtual bool is_deterministic() const { return true; }
};

Label soa_predict(DimensionSolver& solver, const HypothesisSet& v, Point x);
Label soa_predict(const VersionSpace& v, Point x);

// Streaming SOA state. Once the version space becomes empty it stays empty and
// every prediction is kDefaultLabel.
class SoaLearner final : public OnlineLearner {
public:
    SoaLearner(const ConceptClass& c, DimensionSolver& solver);

    Label predict(Point x) override;
    // Full update: every observed example is absorbed.
    void observe(Point x, Label y) override;

    VersionSpace version_space() const { return VersionSpace(c_, members_); }
    const HypothesisSet& members() const { return members_; }
    std::size_t history_length() const { return history_; }
    std::size_t mistakes() const { return mistakes_; }

private:
    const ConceptClass& c_;
    DimensionSolver& solver_;
    HypothesisSet members_;
    std::size_t history_ = 0;
    std::size_t mistakes_ = 0;
};

struct SoaRun {
    std::vector<Label> predictions;
    std::size_t mistakes = 0;
};

SoaRun soa_run(const ConceptClass& c, const LabeledSequence& s);
SoaRun soa_run(DimensionSolver& solver, const LabeledSequence& s);

// SOA with conservative updates: an example enters the history only when the
// prediction on it was wrong. Returns the (0-based, increasing) rounds that
// were absorbed. Throws PreconditionError when s is not realizable by c.
std::vector<std::size_t> conservative_soa(const ConceptClass& c, const LabeledSequence& s);
std::vector<std::size_t> conservative_soa(DimensionSolver& solver, const LabeledSequence& s);

}  // namespace llab

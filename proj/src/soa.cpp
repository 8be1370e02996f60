#include "llab/soa.hpp"

#include "llab/errors.hpp"

namespace llab {

Label soa_predict(DimensionSolver& solver, const HypothesisSet& v, Point x) {
    const auto& c = solver.concept_class();
    c.check_point(x);
    Label best = kDefaultLabel;
    int best_dim = -2;
    for (const auto& [y, agree] : c.realized(x)) {
        const HypothesisSet child = v & agree;
        if (child.empty()) continue;
        const int d = solver.littlestone(child);
        if (d > best_dim) {
            best_dim = d;
            best = y;
        }
    }
    return best;
}

Label soa_predict(const VersionSpace& v, Point x) {
    DimensionSolver solver(v.concept_class());
    return soa_predict(solver, v.members(), x);
}

SoaLearner::SoaLearner(const ConceptClass& c, DimensionSolver& solver)
    : c_(c), solver_(solver), members_(c.all()) {
    if (&solver.concept_class() != &c) throw MalformedInput("SOA solver is bound to a different class");
}

Label SoaLearner::predict(Point x) { return soa_predict(solver_, members_, x); }

void SoaLearner::observe(Point x, Label y) {
    c_.check_point(x);
    c_.check_label(y);
    if (predict(x) != y) ++mistakes_;
    members_ &= c_.agreeing(x, y);
    ++history_;
}

SoaRun soa_run(DimensionSolver& solver, const LabeledSequence& s) {
    const auto& c = solver.concept_class();
    s.validate(c);
    SoaRun run;
    HypothesisSet v = c.all();
    for (const auto& e : s.entries) {
        const Label pred = soa_predict(solver, v, e.point);
        run.predictions.push_back(pred);
        if (pred != e.label) ++run.mistakes;
        v &= c.agreeing(e.point, e.label);
    }
    return run;
}

SoaRun soa_run(const ConceptClass& c, const LabeledSequence& s) {
    DimensionSolver solver(c);
    return soa_run(solver, s);
}

std::vector<std::size_t> conservative_soa(DimensionSolver& solver, const LabeledSequence& s) {
    const auto& c = solver.concept_class();
    s.validate(c);
    if (!is_realizable(c, s)) throw PreconditionError("conservative SOA needs a realizable sequence");
    std::vector<std::size_t> absorbed;
    HypothesisSet v = c.all();
    for (std::size_t t = 0; t < s.size(); ++t) {
        if (soa_predict(solver, v, s[t].point) != s[t].label) {
            absorbed.push_back(t);
            v &= c.agreeing(s[t].point, s[t].label);
        }
    }
    return absorbed;
}

std::vector<std::size_t> conservative_soa(const ConceptClass& c, const LabeledSequence& s) {
    DimensionSolver solver(c);
    return conservative_soa(solver, s);
}

}  // namespace llab

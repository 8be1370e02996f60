#include "llab/agnostic.hpp"

#include "llab/errors.hpp"
#include "llab/oracles.hpp"
#include "llab/soa.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace llab {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > kSaturated / a) return kSaturated;
    return a * b;
}

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) { return b > kSaturated - a ? kSaturated : a + b; }

std::uint64_t effective_cap(const LearnerOptions& options) {
    return options.expert_cap != 0 ? options.expert_cap : cap_cells();
}

void require_family(std::uint64_t needed, std::uint64_t cap, const char* what) {
    if (needed > cap) {
        throw ResourceError(std::string(what) + " needs " +
                            (needed == kSaturated ? std::string("more than 2^64") : std::to_string(needed)) +
                            " experts, cap is " + std::to_string(cap));
    }
}

// sum_{i<=L} C(T, i) * base^i
std::uint64_t family_size(std::size_t horizon, int budget, std::uint64_t base) {
    if (budget < 0) return 0;
    std::uint64_t total = 0;
    unsigned __int128 binom = 1;
    std::uint64_t power = 1;
    for (int i = 0; i <= budget && static_cast<std::size_t>(i) <= horizon; ++i) {
        if (i > 0) {
            binom = binom * (horizon - static_cast<std::size_t>(i) + 1) / static_cast<unsigned>(i);
            power = saturating_mul(power, base);
        }
        const std::uint64_t b = binom > kSaturated ? kSaturated : static_cast<std::uint64_t>(binom);
        total = saturating_add(total, saturating_mul(b, power));
        if (binom > kSaturated) return kSaturated;
    }
    return total;
}

const ExpertFamily& checked(const ExpertFamily& f) {
    if (f.size() == 0) throw PreconditionError("expert family is empty");
    if (f.horizon == 0) throw PreconditionError("expert mixture needs a horizon >= 1");
    return f;
}

}  // namespace

std::optional<std::size_t> ExpertFamily::find(const Expert& e) const {
    auto it = std::find(experts.begin(), experts.end(), e);
    if (it == experts.end()) return std::nullopt;
    return static_cast<std::size_t>(it - experts.begin());
}

std::uint64_t subset_family_size(std::size_t horizon, int budget) { return family_size(horizon, budget, 1); }

std::uint64_t labeled_family_size(std::size_t horizon, int budget, std::size_t num_labels) {
    return family_size(horizon, budget, num_labels);
}

ExpertFamily enumerate_experts(std::size_t horizon, int budget, std::uint64_t cap) {
    if (budget < 0) throw PreconditionError("expert budget must be >= 0");
    require_family(subset_family_size(horizon, budget), cap, "subset expert family");
    ExpertFamily family{ExpertKind::subset, horizon, budget, 0, {}};
    std::vector<std::size_t> current;
    std::function<void(std::size_t)> walk = [&](std::size_t start) {
        family.experts.push_back({current, {}});
        if (static_cast<int>(current.size()) == budget) return;
        for (std::size_t i = start; i < horizon; ++i) {
            current.push_back(i);
            walk(i + 1);
            current.pop_back();
        }
    };
    walk(0);
    return family;
}

ExpertFamily enumerate_labeled_experts(std::size_t horizon, int budget, std::size_t num_labels, std::uint64_t cap) {
    if (num_labels == 0) throw MalformedInput("labeled experts need a non-empty label alphabet");
    require_family(labeled_family_size(horizon, budget, num_labels), cap, "labeled expert family");
    const ExpertFamily subsets = enumerate_experts(horizon, budget, kSaturated);
    ExpertFamily family{ExpertKind::labeled, horizon, budget, num_labels, {}};
    for (const auto& j : subsets.experts) {
        std::vector<Label> labels(j.rounds.size(), 0);
        while (true) {
            family.experts.push_back({j.rounds, labels});
            // Odometer over label assignments, last position fastest.
            std::size_t pos = labels.size();
            while (pos > 0 && labels[pos - 1] + 1 == num_labels) labels[--pos] = 0;
            if (pos == 0) break;
            ++labels[pos - 1];
        }
    }
    return family;
}

Label expert_predict(DimensionSolver& solver, const std::vector<std::size_t>& J, const LabeledSequence& history,
                     std::size_t t, Point x) {
    const auto& c = solver.concept_class();
    if (history.size() < t) throw MalformedInput("expert history shorter than the queried round");
    HypothesisSet v = c.all();
    for (auto j : J) {
        if (j >= t) continue;
        c.check_point(history[j].point);
        c.check_label(history[j].label);
        v &= c.agreeing(history[j].point, history[j].label);
    }
    return soa_predict(solver, v, x);
}

Label expert_predict(const ConceptClass& c, const std::vector<std::size_t>& J, const LabeledSequence& history,
                     std::size_t t, Point x) {
    DimensionSolver solver(c);
    return expert_predict(solver, J, history, t, x);
}

double theoretical_regret_bound(std::size_t horizon, int littlestone) {
    if (horizon == 0) throw MalformedInput("horizon must be >= 1");
    if (littlestone <= 0) return 0.0;
    const double T = static_cast<double>(horizon);
    const double L = static_cast<double>(littlestone);
    return L + std::sqrt(T / 2.0 * L * std::log(std::exp(1.0) * T / L));
}

// ---------------------------------------------------------------------------
// ExpertMixture

ExpertMixture::ExpertMixture(const ConceptClass& c, DimensionSolver& solver, ExpertFamily family)
    : c_(c),
      solver_(solver),
      family_(std::move(family)),
      mw_(checked(family_).size(), mw_eta(family_.horizon, family_.size())) {
    if (&solver.concept_class() != &c) throw MalformedInput("solver is bound to a different class");
    trie_.push_back(Node{c.all(), {}, SIZE_MAX, 0, kDefaultLabel});
    position_.assign(family_.size(), 0);
    cursor_.assign(family_.size(), 0);
    outputs_.assign(family_.size(), kDefaultLabel);
    losses_.assign(family_.size(), 0);
}

Label ExpertMixture::node_prediction(std::size_t node, Point x) {
    Node& n = trie_[node];
    if (n.predicted_round != round_ || n.predicted_point != x) {
        n.prediction = soa_predict(solver_, n.members, x);
        n.predicted_round = round_;
        n.predicted_point = x;
    }
    return n.prediction;
}

std::size_t ExpertMixture::child(std::size_t node, std::size_t t, Point x, Label y) {
    const auto key = std::make_pair(t, y);
    if (auto it = trie_[node].children.find(key); it != trie_[node].children.end()) return it->second;
    HypothesisSet members = trie_[node].members & c_.agreeing(x, y);
    trie_.push_back(Node{std::move(members), {}, SIZE_MAX, 0, kDefaultLabel});
    const std::size_t id = trie_.size() - 1;
    trie_[node].children.emplace(key, id);
    return id;
}

PredictionDistribution ExpertMixture::predict(Point x) {
    c_.check_point(x);
    if (round_ >= family_.horizon) {
        throw PreconditionError("expert mixture was built for " + std::to_string(family_.horizon) + " rounds");
    }
    const bool labeled = family_.kind == ExpertKind::labeled;
    for (std::size_t e = 0; e < family_.size(); ++e) {
        const Expert& ex = family_.experts[e];
        if (labeled && cursor_[e] < ex.rounds.size() && ex.rounds[cursor_[e]] == round_) {
            outputs_[e] = ex.labels[cursor_[e]];
        } else {
            outputs_[e] = node_prediction(position_[e], x);
        }
    }
    predicted_ = true;
    pending_point_ = x;
    return mw_.mix(outputs_);
}

void ExpertMixture::observe(Point x, Label y) {
    c_.check_label(y);
    if (!predicted_ || pending_point_ != x) predict(x);
    const bool labeled = family_.kind == ExpertKind::labeled;
    for (std::size_t e = 0; e < family_.size(); ++e) losses_[e] = outputs_[e] != y ? 1 : 0;
    mw_.update(losses_);
    for (std::size_t e = 0; e < family_.size(); ++e) {
        const Expert& ex = family_.experts[e];
        const bool in_j = cursor_[e] < ex.rounds.size() && ex.rounds[cursor_[e]] == round_;
        if (labeled) {
            position_[e] = child(position_[e], round_, x, outputs_[e]);
        } else if (in_j) {
            position_[e] = child(position_[e], round_, x, y);
        }
        if (in_j) ++cursor_[e];
    }
    ++round_;
    predicted_ = false;
}

// ---------------------------------------------------------------------------
// Runs

LearnerTrace run_mixture(DimensionSolver& solver, ExpertFamily family, const LabeledSequence& s, double bound) {
    const auto& c = solver.concept_class();
    s.validate(c);
    if (family.horizon != s.size()) throw MalformedInput("expert family horizon differs from the sequence length");

    LearnerTrace trace;
    trace.kind = family.kind;
    trace.horizon = s.size();
    trace.littlestone = family.budget;
    trace.num_experts = family.size();
    trace.bound = bound;

    ExpertMixture mixture(c, solver, std::move(family));
    trace.eta = mixture.weights().eta();
    const auto opt_by_round = opt_prefix(c, s);

    double cumulative = 0.0;
    for (std::size_t t = 0; t < s.size(); ++t) {
        const auto [x, y] = s[t];
        RoundRecord r;
        r.point = x;
        r.label = y;
        r.prediction = mixture.predict(x);
        r.prediction.check();
        const auto w = mixture.weights().normalized_weights();
        mixture.observe(x, y);
        r.expert_losses = mixture.expert_losses();

        r.expected_loss = 1.0 - r.prediction.mass(y);
        double weighted = 0.0;
        for (std::size_t e = 0; e < w.size(); ++e) weighted += w[e] * r.expert_losses[e];
        trace.max_mixture_identity_gap = std::max(trace.max_mixture_identity_gap, std::abs(r.expected_loss - weighted));

        cumulative += r.expected_loss;
        r.cumulative_expected_loss = cumulative;
        r.opt_so_far = opt_by_round[t];
        trace.rounds.push_back(std::move(r));
    }

    const OptResult opt = opt_mistakes(c, s);
    trace.cumulative_expected_loss = cumulative;
    trace.opt = opt.mistakes;
    trace.opt_hypothesis = opt.hypothesis;
    trace.regret = cumulative - static_cast<double>(opt.mistakes);

    trace.expert_cumulative_losses = mixture.weights().cumulative_losses();
    const auto best = std::min_element(trace.expert_cumulative_losses.begin(), trace.expert_cumulative_losses.end());
    trace.best_expert = static_cast<std::size_t>(best - trace.expert_cumulative_losses.begin());
    trace.best_expert_loss = *best;
    trace.expert_regret_bound = mw_regret_bound(trace.horizon, trace.num_experts);
    return trace;
}

namespace {

int family_budget(DimensionSolver& solver, const LearnerOptions& options) {
    const auto& c = solver.concept_class();
    if (c.num_hypotheses() == 0) throw PreconditionError("learners need a non-empty class");
    const int L = options.budget_override ? *options.budget_override : solver.littlestone();
    if (L < 0) throw PreconditionError("expert budget must be >= 0");
    return L;
}

}  // namespace

LearnerTrace aag_run(DimensionSolver& solver, const LabeledSequence& s, const LearnerOptions& options) {
    if (s.empty()) throw MalformedInput("learner needs a sequence of length >= 1");
    const int L = family_budget(solver, options);
    auto family = enumerate_experts(s.size(), L, effective_cap(options));
    return run_mixture(solver, std::move(family), s, theoretical_regret_bound(s.size(), L));
}

LearnerTrace aag_run(const ConceptClass& c, const LabeledSequence& s, const LearnerOptions& options) {
    DimensionSolver solver(c);
    return aag_run(solver, s, options);
}

LearnerTrace finite_y_learner(DimensionSolver& solver, const LabeledSequence& s, const LearnerOptions& options) {
    if (s.empty()) throw MalformedInput("learner needs a sequence of length >= 1");
    const int L = family_budget(solver, options);
    auto family =
        enumerate_labeled_experts(s.size(), L, solver.concept_class().num_labels(), effective_cap(options));
    const double bound = mw_regret_bound(s.size(), family.size());
    return run_mixture(solver, std::move(family), s, bound);
}

LearnerTrace finite_y_learner(const ConceptClass& c, const LabeledSequence& s, const LearnerOptions& options) {
    DimensionSolver solver(c);
    return finite_y_learner(solver, s, options);
}

// ---------------------------------------------------------------------------
// Witnesses

BestExpertWitness best_expert_witness(DimensionSolver& solver, const LabeledSequence& s) {
    const auto& c = solver.concept_class();
    s.validate(c);
    const OptResult opt = opt_mistakes(c, s);

    BestExpertWitness w;
    w.best_hypothesis = opt.hypothesis;
    w.opt = opt.mistakes;
    w.littlestone = solver.littlestone();
    for (std::size_t t = 0; t < s.size(); ++t) {
        if (c(opt.hypothesis, s[t].point) == s[t].label) w.agreeing_rounds.push_back(t);
    }
    const LabeledSequence agreeing = s.subsequence(w.agreeing_rounds);
    for (auto k : conservative_soa(solver, agreeing)) w.mistake_rounds.push_back(w.agreeing_rounds[k]);

    // Replay expert J* over the whole sequence.
    w.correct_off_witness = true;
    HypothesisSet v = c.all();
    std::size_t next = 0;
    std::size_t agree_pos = 0;
    for (std::size_t t = 0; t < s.size(); ++t) {
        const Label g = soa_predict(solver, v, s[t].point);
        const bool in_j = next < w.mistake_rounds.size() && w.mistake_rounds[next] == t;
        const bool in_r = agree_pos < w.agreeing_rounds.size() && w.agreeing_rounds[agree_pos] == t;
        if (g != s[t].label) {
            ++w.expert_mistakes;
            if (in_r && !in_j) w.correct_off_witness = false;
        }
        if (in_r) ++agree_pos;
        if (in_j) {
            v &= c.agreeing(s[t].point, s[t].label);
            ++next;
        }
    }
    return w;
}

BestExpertWitness best_expert_witness(const ConceptClass& c, const LabeledSequence& s) {
    DimensionSolver solver(c);
    return best_expert_witness(solver, s);
}

Expert replicating_expert(DimensionSolver& solver, const LabeledSequence& s, HypothesisIndex h) {
    const auto& c = solver.concept_class();
    s.validate(c);
    if (h >= c.num_hypotheses()) throw MalformedInput("hypothesis index out of range");
    Expert e;
    HypothesisSet v = c.all();
    for (std::size_t t = 0; t < s.size(); ++t) {
        const Label target = c(h, s[t].point);
        if (soa_predict(solver, v, s[t].point) != target) {
            e.rounds.push_back(t);
            e.labels.push_back(target);
        }
        v &= c.agreeing(s[t].point, target);
    }
    return e;
}

std::vector<Label> labeled_expert_outputs(DimensionSolver& solver, const Expert& e, const LabeledSequence& s) {
    const auto& c = solver.concept_class();
    s.validate(c);
    std::vector<Label> out;
    HypothesisSet v = c.all();
    std::size_t next = 0;
    for (std::size_t t = 0; t < s.size(); ++t) {
        Label y;
        if (next < e.rounds.size() && e.rounds[next] == t) {
            y = e.labels[next++];
        } else {
            y = soa_predict(solver, v, s[t].point);
        }
        out.push_back(y);
        v &= c.agreeing(s[t].point, y);
    }
    return out;
}

}  // namespace llab

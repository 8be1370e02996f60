#include "llab/harness.hpp"

#include "llab/dimensions.hpp"
#include "llab/errors.hpp"
#include "llab/io.hpp"
#include "llab/random.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace llab {

using nlohmann::json;

LabeledSequence tree_walk_adversary(const ConceptClass& c, OnlineLearner& learner) {
    if (!learner.is_deterministic()) throw PreconditionError("tree-walk adversary needs a deterministic learner");
    if (c.num_hypotheses() == 0) throw PreconditionError("tree-walk adversary needs a non-empty class");
    DimensionSolver solver(c);
    const int depth = solver.littlestone();
    const auto tree = solver.shattered_tree(c.all(), depth);
    if (!tree) throw InternalError("no shattered tree at the class's own dimension");

    LabeledSequence s;
    std::size_t node = 0;
    for (int t = 0; t < depth; ++t) {
        const auto& n = tree->nodes[node];
        const Label guess = learner.predict(n.point);
        const unsigned branch = guess != n.label0 ? 0 : 1;
        const Label answer = branch == 0 ? n.label0 : n.label1;
        learner.observe(n.point, answer);
        s.push_back({n.point, answer});
        node = 2 * node + 1 + branch;
    }
    return s;
}

LabeledSequence noisy_adversary(const ConceptClass& c, HypothesisIndex h, double rate, std::size_t horizon,
                                std::uint64_t seed) {
    if (!(rate >= 0.0 && rate <= 1.0)) throw MalformedInput("noise rate must lie in [0, 1]");
    if (h >= c.num_hypotheses()) throw MalformedInput("hypothesis index out of range");
    CounterRng rng(seed);
    LabeledSequence s;
    for (std::size_t t = 0; t < horizon; ++t) {
        const auto x = static_cast<Point>(rng.below(c.num_points()));
        Label y = c(h, x);
        if (rng.unit() < rate && c.num_labels() > 1) {
            const auto other = static_cast<Label>(rng.below(c.num_labels() - 1));
            y = other < y ? other : other + 1;
        }
        s.push_back({x, y});
    }
    return s;
}

LabeledSequence min_mass_adversary(const ConceptClass& c, RandomizedLearner& learner, std::size_t horizon,
                                   std::uint64_t seed) {
    CounterRng rng(seed);
    LabeledSequence s;
    for (std::size_t t = 0; t < horizon; ++t) {
        const auto x = static_cast<Point>(rng.below(c.num_points()));
        const auto p = learner.predict(x);
        Label y = kDefaultLabel;
        double least = 2.0;
        for (const auto& [label, agreeing] : c.realized(x)) {
            if (p.mass(label) < least) {
                least = p.mass(label);
                y = label;
            }
        }
        learner.observe(x, y);
        s.push_back({x, y});
    }
    return s;
}

double sequential_graph_bound(int littlestone, std::size_t num_labels) {
    return 2.0 * littlestone * std::log2(std::numbers::e * static_cast<double>(num_labels));
}

// ---------------------------------------------------------------------------
// Traces

LearnerTrace soa_trace(DimensionSolver& solver, const LabeledSequence& s) {
    const auto& c = solver.concept_class();
    const auto run = soa_run(solver, s);
    const auto opt_by_round = opt_prefix(c, s);
    LearnerTrace trace;
    trace.horizon = s.size();
    trace.littlestone = solver.littlestone();
    trace.num_experts = 1;
    trace.bound = trace.littlestone;
    double cumulative = 0.0;
    for (std::size_t t = 0; t < s.size(); ++t) {
        RoundRecord r;
        r.point = s[t].point;
        r.label = s[t].label;
        r.prediction = PredictionDistribution::point_mass(run.predictions[t]);
        r.expected_loss = run.predictions[t] != s[t].label ? 1.0 : 0.0;
        r.expert_losses = {static_cast<std::uint8_t>(r.expected_loss)};
        cumulative += r.expected_loss;
        r.cumulative_expected_loss = cumulative;
        r.opt_so_far = opt_by_round[t];
        trace.rounds.push_back(std::move(r));
    }
    const auto opt = opt_mistakes(c, s);
    trace.cumulative_expected_loss = cumulative;
    trace.opt = opt.mistakes;
    trace.opt_hypothesis = opt.hypothesis;
    trace.regret = cumulative - static_cast<double>(opt.mistakes);
    trace.expert_cumulative_losses = {run.mistakes};
    trace.best_expert_loss = run.mistakes;
    return trace;
}

std::string trace_csv(const LearnerTrace& trace) {
    std::ostringstream out;
    out << "t,expected_loss,cum_expected_loss,opt_so_far,bound\n";
    for (std::size_t t = 0; t < trace.rounds.size(); ++t) {
        const auto& r = trace.rounds[t];
        out << (t + 1) << ',' << io::format_double(r.expected_loss) << ','
            << io::format_double(r.cumulative_expected_loss) << ',' << r.opt_so_far << ','
            << io::format_double(trace.bound) << '\n';
    }
    return out.str();
}

json trace_certificate(const LearnerTrace& trace, const ExpertFamily* family) {
    json j{{"horizon", trace.horizon},
           {"littlestone", trace.littlestone},
           {"num_experts", trace.num_experts},
           {"eta", trace.eta},
           {"cumulative_expected_loss", trace.cumulative_expected_loss},
           {"opt", trace.opt},
           {"opt_hypothesis", trace.opt_hypothesis},
           {"regret", trace.regret},
           {"bound", trace.bound},
           {"bound_holds", trace.bound_holds()},
           {"best_expert_loss", trace.best_expert_loss},
           {"expert_regret_bound", trace.expert_regret_bound},
           {"max_mixture_identity_gap", trace.max_mixture_identity_gap}};
    if (family != nullptr && trace.best_expert < family->size()) {
        const auto& e = family->experts[trace.best_expert];
        j["best_expert"] = {{"rounds", e.rounds}, {"labels", e.labels}};
    }
    return j;
}

// ---------------------------------------------------------------------------
// Experiments

bool TrialReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

bool Report::passed() const {
    return std::all_of(class_checks.begin(), class_checks.end(), [](const Check& c) { return c.passed; }) &&
           std::all_of(trials.begin(), trials.end(), [](const TrialReport& t) { return t.passed(); });
}

namespace {

json checks_json(const std::vector<Check>& checks) {
    json arr = json::array();
    for (const auto& c : checks) arr.push_back({{"name", c.name}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"passed", c.passed}});
    return arr;
}

Check make_check(std::string name, double lhs, double rhs) {
    return {std::move(name), lhs, rhs, lhs <= rhs + 1e-9};
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
    std::vector<std::size_t> out;
    std::stringstream in(text);
    std::string part;
    while (std::getline(in, part, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoul(part, &used));
            if (used != part.size()) throw std::invalid_argument(part);
        } catch (const std::exception&) {
            throw MalformedInput("bad number '" + part + "' in class source");
        }
    }
    return out;
}

}  // namespace

json Report::to_json() const {
    json trials_json = json::array();
    for (const auto& t : trials) {
        trials_json.push_back({{"trial", t.trial},
                               {"sequence", io::sequence_to_json(t.sequence)},
                               {"checks", checks_json(t.checks)},
                               {"certificate", t.certificate},
                               {"passed", t.passed()}});
    }
    return json{{"learner", learner},
                {"littlestone", littlestone},
                {"sequential_graph", sequential_graph ? json(*sequential_graph) : json(nullptr)},
                {"class_checks", checks_json(class_checks)},
                {"trials", trials_json},
                {"passed", passed()}};
}

ConceptClass load_class_source(const std::string& source, std::uint64_t seed) {
    if (source.rfind("example1:", 0) == 0) {
        const auto args = parse_sizes(source.substr(9));
        if (args.size() != 1) throw MalformedInput("expected example1:M");
        return example1_class(static_cast<unsigned>(args[0]));
    }
    if (source.rfind("random:", 0) == 0) {
        const auto args = parse_sizes(source.substr(7));
        if (args.size() != 3) throw MalformedInput("expected random:NX,NY,NH");
        return random_class(seed, args[0], args[1], args[2]);
    }
    return io::read_class(source);
}

Report run_experiment(const ExperimentConfig& config) {
    struct CapGuard {
        explicit CapGuard(std::uint64_t cells) : active(cells != 0) {
            if (active) set_cap_cells(cells);
        }
        ~CapGuard() {
            if (active) set_cap_cells(0);
        }
        bool active;
    } guard(config.cap_cells);

    if (config.trials == 0) throw MalformedInput("experiment needs at least one trial");
    if (config.learner != "aag" && config.learner != "finitey" && config.learner != "soa") {
        throw MalformedInput("unknown learner '" + config.learner + "' (expected aag, finitey or soa)");
    }

    const CounterRng master(config.seed);
    const ConceptClass c = load_class_source(config.class_source, config.seed);
    if (c.num_hypotheses() == 0) throw PreconditionError("experiment class is empty");
    DimensionSolver solver(c);

    Report report;
    report.learner = config.learner;
    report.littlestone = config.budget_override.value_or(solver.littlestone());
    const int true_dim = solver.littlestone();
    try {
        report.sequential_graph = sequential_graph_dim(c);
        report.class_checks.push_back(make_check("sequential_graph_dimension_bound",
                                                 static_cast<double>(*report.sequential_graph),
                                                 sequential_graph_bound(true_dim, c.num_labels())));
    } catch (const ResourceError&) {
        report.sequential_graph.reset();
    }

    std::optional<LabeledSequence> fixed;
    if (!config.sequence_file.empty()) {
        fixed = io::read_sequence(config.sequence_file);
        fixed->validate(c);
        if (config.horizon != 0) {
            if (config.horizon > fixed->size()) throw MalformedInput("horizon exceeds the sequence length");
            fixed = fixed->prefix(config.horizon);
        }
    }

    LearnerOptions options;
    options.budget_override = config.budget_override;

    for (std::size_t k = 0; k < config.trials; ++k) {
        CounterRng rng = master.fork(k + 1);
        const std::uint64_t trial_seed = rng.next();
        TrialReport trial;
        trial.trial = k;

        if (fixed) {
            trial.sequence = *fixed;
        } else {
            if (config.horizon == 0 && config.adversary != "treewalk") {
                throw MalformedInput("horizon is required when no sequence file is given");
            }
            if (config.adversary == "noisy") {
                const auto h = static_cast<HypothesisIndex>(rng.below(c.num_hypotheses()));
                trial.sequence = noisy_adversary(c, h, config.noise_rate, config.horizon, trial_seed);
            } else if (config.adversary == "minmass") {
                if (config.learner == "soa") {
                    SoaLearner soa(c, solver);
                    struct PointMass final : RandomizedLearner {
                        explicit PointMass(SoaLearner& l) : inner(l) {}
                        PredictionDistribution predict(Point x) override {
                            return PredictionDistribution::point_mass(inner.predict(x));
                        }
                        void observe(Point x, Label y) override { inner.observe(x, y); }
                        SoaLearner& inner;
                    } wrapped(soa);
                    trial.sequence = min_mass_adversary(c, wrapped, config.horizon, trial_seed);
                } else {
                    const int L = report.littlestone;
                    auto family = config.learner == "aag"
                                      ? enumerate_experts(config.horizon, L, cap_cells())
                                      : enumerate_labeled_experts(config.horizon, L, c.num_labels(), cap_cells());
                    ExpertMixture mixture(c, solver, std::move(family));
                    trial.sequence = min_mass_adversary(c, mixture, config.horizon, trial_seed);
                }
            } else if (config.adversary == "treewalk") {
                if (config.learner != "soa") {
                    throw PreconditionError("tree-walk adversary needs a deterministic learner (use --learner soa)");
                }
                SoaLearner soa(c, solver);
                trial.sequence = tree_walk_adversary(c, soa);
                if (trial.sequence.empty()) throw PreconditionError("tree-walk sequence is empty (L = 0)");
            } else {
                throw MalformedInput("unknown adversary '" + config.adversary + "' (expected noisy, minmass, treewalk)");
            }
        }

        const double scale = config.bound_scale;
        if (config.learner == "aag") {
            auto family = enumerate_experts(trial.sequence.size(), report.littlestone, cap_cells());
            const ExpertFamily kept = family;
            trial.trace = run_mixture(solver, std::move(family), trial.sequence,
                                      theoretical_regret_bound(trial.sequence.size(), report.littlestone));
            trial.certificate = trace_certificate(trial.trace, &kept);
            trial.checks.push_back(make_check("regret_bound", trial.trace.regret, trial.trace.bound * scale));
            trial.checks.push_back(make_check("expert_regret_bound",
                                              trial.trace.cumulative_expected_loss -
                                                  static_cast<double>(trial.trace.best_expert_loss),
                                              trial.trace.expert_regret_bound * scale));
            const auto w = best_expert_witness(solver, trial.sequence);
            trial.certificate["witness"] = {{"best_hypothesis", w.best_hypothesis},
                                            {"agreeing_rounds", w.agreeing_rounds},
                                            {"mistake_rounds", w.mistake_rounds},
                                            {"expert_mistakes", w.expert_mistakes},
                                            {"correct_off_witness", w.correct_off_witness}};
            trial.checks.push_back(make_check("witness_size", static_cast<double>(w.mistake_rounds.size()),
                                              static_cast<double>(true_dim)));
            trial.checks.push_back(make_check("witness_mistakes", static_cast<double>(w.expert_mistakes),
                                              static_cast<double>(w.opt + static_cast<std::uint64_t>(true_dim))));
        } else if (config.learner == "finitey") {
            auto family = enumerate_labeled_experts(trial.sequence.size(), report.littlestone, c.num_labels(),
                                                    cap_cells());
            const ExpertFamily kept = family;
            trial.trace = run_mixture(solver, std::move(family), trial.sequence,
                                      mw_regret_bound(trial.sequence.size(), kept.size()));
            trial.certificate = trace_certificate(trial.trace, &kept);
            trial.checks.push_back(make_check("regret_bound", trial.trace.regret, trial.trace.bound * scale));
            const Expert star = replicating_expert(solver, trial.sequence, trial.trace.opt_hypothesis);
            const auto idx = kept.find(star);
            const std::uint64_t star_loss = idx ? trial.trace.expert_cumulative_losses[*idx] : UINT64_MAX;
            trial.certificate["replicating_expert"] = {{"rounds", star.rounds}, {"labels", star.labels},
                                                       {"in_family", idx.has_value()}};
            trial.checks.push_back({"replicating_expert_attains_opt", static_cast<double>(star_loss),
                                    static_cast<double>(trial.trace.opt), idx && star_loss == trial.trace.opt});
        } else {
            trial.trace = soa_trace(solver, trial.sequence);
            trial.certificate = trace_certificate(trial.trace);
            const bool realizable = is_realizable(c, trial.sequence);
            trial.certificate["realizable"] = realizable;
            if (realizable) {
                trial.checks.push_back(make_check("soa_mistake_bound", trial.trace.cumulative_expected_loss,
                                                  static_cast<double>(true_dim) * scale));
            }
        }
        report.trials.push_back(std::move(trial));
    }

    if (!config.out_prefix.empty()) {
        io::write_text(config.out_prefix + ".json", report.to_json().dump(2) + "\n");
        if (report.trials.size() == 1) {
            io::write_text(config.out_prefix + ".csv", trace_csv(report.trials.front().trace));
        } else {
            for (const auto& t : report.trials) {
                io::write_text(config.out_prefix + "." + std::to_string(t.trial) + ".csv", trace_csv(t.trace));
            }
        }
    }
    return report;
}

}  // namespace llab

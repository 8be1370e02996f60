#include "llab/acceptance.hpp"

#include "llab/agnostic.hpp"
#include "llab/dimensions.hpp"
#include "llab/experts.hpp"
#include "llab/harness.hpp"
#include "llab/oracles.hpp"
#include "llab/random.hpp"
#include "llab/soa.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

namespace llab {

namespace {

std::string fixed(double v, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string histogram(const std::map<int, std::size_t>& counts) {
    std::string out;
    for (const auto& [k, n] : counts) out += (out.empty() ? "" : " ") + std::to_string(k) + ":" + std::to_string(n);
    return out;
}

// A class together with the solver that memoizes its dimensions. The class
// lives on the heap so the solver's reference stays valid when moved.
struct SolvedClass {
    explicit SolvedClass(ConceptClass c)
        : cls(std::make_unique<ConceptClass>(std::move(c))), solver(std::make_unique<DimensionSolver>(*cls)) {}
    std::unique_ptr<ConceptClass> cls;
    std::unique_ptr<DimensionSolver> solver;
    int dim() { return solver->littlestone(); }
};

// The regret workload shared by criteria 4, 5 and 7: example1_class(3)
// followed by 50 random classes with L <= 2.
std::vector<SolvedClass> regret_classes(std::uint64_t seed) {
    std::vector<SolvedClass> out;
    out.emplace_back(example1_class(3));
    CounterRng rng(seed, 4);
    while (out.size() < 51) {
        const auto nx = static_cast<std::size_t>(rng.between(2, 5));
        const auto ny = static_cast<std::size_t>(rng.between(2, 3));
        const auto nh = static_cast<std::size_t>(rng.between(2, 10));
        SolvedClass sc(random_class(rng.next(), nx, ny, nh));
        if (sc.dim() <= 2) out.push_back(std::move(sc));
    }
    return out;
}

struct RegretCase {
    std::size_t class_index;
    std::size_t horizon;
    bool crafted;
    LabeledSequence sequence;
};

std::vector<RegretCase> regret_cases(std::vector<SolvedClass>& classes, std::uint64_t seed) {
    std::vector<RegretCase> cases;
    CounterRng rng(seed, 5);
    const double rates[] = {0.0, 0.1, 0.2, 0.3, 0.5};
    for (std::size_t horizon : {8, 16, 32}) {
        for (std::size_t i = 0; i < 200; ++i) {
            auto& sc = classes[i % classes.size()];
            const auto h = static_cast<HypothesisIndex>(rng.below(sc.cls->num_hypotheses()));
            const double rate = rates[rng.below(5)];
            cases.push_back({i % classes.size(), horizon, false, noisy_adversary(*sc.cls, h, rate, horizon, rng.next())});
        }
        for (std::size_t i = 0; i < 50; ++i) {
            const std::size_t k = (i * 7) % classes.size();
            auto& sc = classes[k];
            ExpertMixture mixture(*sc.cls, *sc.solver, enumerate_experts(horizon, sc.dim(), cap_cells()));
            cases.push_back({k, horizon, true, min_mass_adversary(*sc.cls, mixture, horizon, rng.next())});
        }
    }
    return cases;
}

template <typename Body>
CriterionResult timed(int id, std::string name, double limit, std::ostream* timings, Body&& body) {
    CriterionResult r;
    r.id = id;
    r.name = std::move(name);
    r.time_limit = limit;
    const auto start = std::chrono::steady_clock::now();
    body(r);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (timings != nullptr) {
        *timings << "criterion " << id << ": " << fixed(r.seconds, 2) << " s (limit " << fixed(limit, 0) << " s)\n";
    }
    return r;
}

// ---------------------------------------------------------------------------

void dimension_oracle(CriterionResult& r, std::uint64_t seed) {
    CounterRng rng(seed, 1);
    std::size_t agree = 0, total = 0;
    std::map<int, std::size_t> by_dim;
    std::string first_mismatch;
    for (int i = 0; i < 500; ++i) {
        const auto nx = static_cast<std::size_t>(rng.between(1, 4));
        const auto ny = static_cast<std::size_t>(rng.between(1, 3));
        const auto nh = static_cast<std::size_t>(rng.between(1, 12));
        const ConceptClass c = random_class(rng.next(), nx, ny, nh);
        const VersionSpace v(c);
        const int fast = littlestone_dim(v);
        const int slow = littlestone_dim_bruteforce(v, static_cast<int>(nx));
        ++total;
        ++by_dim[slow];
        if (fast == slow) {
            ++agree;
        } else if (first_mismatch.empty()) {
            first_mismatch = "; first mismatch at class " + std::to_string(i);
        }
    }
    r.ok = agree == total;
    r.detail = std::to_string(agree) + "/" + std::to_string(total) + " classes agree" + first_mismatch +
               "; classes by L: " + histogram(by_dim);
}

void soa_mistake_bound(CriterionResult& r, std::uint64_t seed) {
    CounterRng rng(seed, 2);
    std::size_t ok = 0;
    std::size_t max_mistakes = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto nx = static_cast<std::size_t>(rng.between(1, 5));
        const auto ny = static_cast<std::size_t>(rng.between(2, 4));
        const auto nh = static_cast<std::size_t>(rng.between(1, 12));
        const ConceptClass c = random_class(rng.next(), nx, ny, nh);
        const auto h = static_cast<HypothesisIndex>(rng.below(c.num_hypotheses()));
        const auto horizon = static_cast<std::size_t>(rng.between(1, 12));
        const LabeledSequence s = noisy_adversary(c, h, 0.0, horizon, rng.next());
        DimensionSolver solver(c);
        const auto run = soa_run(solver, s);
        max_mistakes = std::max(max_mistakes, run.mistakes);
        if (is_realizable(c, s) && static_cast<int>(run.mistakes) <= solver.littlestone()) ++ok;
    }
    r.ok = ok == 1000;
    r.detail = std::to_string(ok) + "/1000 realizable runs within L mistakes (max mistakes " +
               std::to_string(max_mistakes) + ")";
}

ConceptClass full_binary_class(std::size_t n) {
    std::vector<std::string> points;
    for (std::size_t i = 0; i < n; ++i) points.push_back("x" + std::to_string(i));
    std::vector<std::vector<Label>> table;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        std::vector<Label> row(n);
        for (std::size_t i = 0; i < n; ++i) row[i] = (mask >> i) & 1U;
        table.push_back(std::move(row));
    }
    return ConceptClass(std::move(points), {"0", "1"}, std::move(table));
}

void forcing_adversary(CriterionResult& r) {
    bool ok = true;
    std::ostringstream detail;
    for (std::size_t n = 1; n <= 4; ++n) {
        const ConceptClass c = full_binary_class(n);
        DimensionSolver solver(c);
        SoaLearner soa(c, solver);
        const auto s = tree_walk_adversary(c, soa);
        const bool exact = s.size() == n && soa.mistakes() == n && is_realizable(c, s);
        ok = ok && exact;
        detail << (n > 1 ? ", " : "") << "n=" << n << ": " << soa.mistakes() << " mistakes in " << s.size()
               << " rounds";
    }
    r.ok = ok;
    r.detail = detail.str();
}

void regret_certificate(CriterionResult& r, std::vector<SolvedClass>& classes, const std::vector<RegretCase>& cases) {
    std::size_t ok = 0;
    double worst_slack = -std::numeric_limits<double>::infinity();
    double worst_gap = 0.0;
    std::map<int, std::size_t> by_dim;
    for (auto& sc : classes) ++by_dim[sc.dim()];
    for (const auto& rc : cases) {
        auto& sc = classes[rc.class_index];
        const auto trace = aag_run(*sc.solver, rc.sequence);
        const double bound = theoretical_regret_bound(rc.horizon, sc.dim());
        worst_slack = std::max(worst_slack, trace.regret - bound);
        worst_gap = std::max(worst_gap, trace.max_mixture_identity_gap);
        if (trace.regret <= bound + 1e-9 && trace.max_mixture_identity_gap <= 1e-9) ++ok;
    }
    r.ok = ok == cases.size();
    r.detail = std::to_string(ok) + "/" + std::to_string(cases.size()) +
               " sequences within L + sqrt((T/2) L ln(eT/L)); max regret - bound = " + fixed(worst_slack) +
               "; max mixture identity gap = " + fixed(worst_gap, 12) +
               "; classes by L: " + histogram(by_dim);
}

void witness_certificate(CriterionResult& r, std::vector<SolvedClass>& classes, const std::vector<RegretCase>& cases) {
    std::size_t checked = 0, ok = 0;
    for (const auto& rc : cases) {
        if (rc.horizon > 16) continue;
        ++checked;
        auto& sc = classes[rc.class_index];
        const int L = sc.dim();
        const auto w = best_expert_witness(*sc.solver, rc.sequence);
        const auto family = enumerate_experts(rc.horizon, L, cap_cells());

        // Every expert's loss, one SOA query per round, no shared state.
        std::vector<std::uint64_t> losses(family.size(), 0);
        for (std::size_t e = 0; e < family.size(); ++e) {
            for (std::size_t t = 0; t < rc.horizon; ++t) {
                const Label g = expert_predict(*sc.solver, family.experts[e].rounds, rc.sequence, t, rc.sequence[t].point);
                losses[e] += g != rc.sequence[t].label ? 1 : 0;
            }
        }
        const auto trace = aag_run(*sc.solver, rc.sequence);
        const auto idx = family.find(Expert{w.mistake_rounds, {}});
        const auto min_loss = *std::min_element(losses.begin(), losses.end());
        const bool good = w.holds() && idx.has_value() && losses[*idx] == w.expert_mistakes &&
                          min_loss <= w.opt + static_cast<std::uint64_t>(L) &&
                          trace.expert_cumulative_losses == losses;
        if (good) ++ok;
    }
    r.ok = ok == checked && checked > 0;
    r.detail = std::to_string(ok) + "/" + std::to_string(checked) +
               " sequences (T <= 16): J* in family, |J*| <= L, expert mistakes <= OPT + L, all expert losses match enumeration";
}

void experts_bound(CriterionResult& r, std::uint64_t seed) {
    CounterRng rng(seed, 6);
    std::size_t ok = 0, runs = 0;
    double worst = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < 500; ++i) {
        const auto n = static_cast<std::size_t>(rng.between(1, 64));
        const auto horizon = static_cast<std::size_t>(rng.between(1, 64));
        const double density = rng.unit();
        std::vector<std::vector<std::uint8_t>> advice(n, std::vector<std::uint8_t>(horizon));
        for (auto& row : advice) {
            for (auto& e : row) e = rng.unit() < density ? 1 : 0;
        }
        std::vector<std::uint8_t> outcomes(horizon);
        for (auto& y : outcomes) y = rng.below(2) != 0 ? 1 : 0;
        for (auto ys : {outcomes, std::vector<std::uint8_t>{}}) {
            const auto res = run_binary_experts(advice, std::move(ys));
            ++runs;
            worst = std::max(worst, res.regret - res.bound);
            if (res.regret <= res.bound + 1e-9) ++ok;
        }
    }
    r.ok = ok == runs;
    r.detail = std::to_string(ok) + "/" + std::to_string(runs) +
               " runs (random and adaptive outcomes) within sqrt((T/2) ln N); max regret - bound = " + fixed(worst);
}

void separation(CriterionResult& r, std::vector<SolvedClass>& classes) {
    bool ok = true;
    std::ostringstream detail;
    for (unsigned m = 2; m <= 6; ++m) {
        const ConceptClass c = example1_class(m);
        const int L = littlestone_dim(c);
        const int dsg = sequential_graph_dim(c);
        ok = ok && L == 1 && dsg == static_cast<int>(m);
        detail << "m=" << m << ": L=" << L << " dSG=" << dsg << "; ";
    }
    std::size_t within = 0;
    for (auto& sc : classes) {
        const int dsg = sequential_graph_dim(*sc.cls);
        if (dsg <= sequential_graph_bound(sc.dim(), sc.cls->num_labels()) + 1e-9) ++within;
    }
    ok = ok && within == classes.size();
    detail << within << "/" << classes.size() << " classes satisfy dSG <= 2 L log2(e|Y|)";
    r.ok = ok;
    r.detail = detail.str();
}

void rademacher_oracle(CriterionResult& r, std::uint64_t seed) {
    bool ok = true;
    std::ostringstream detail;

    const ConceptClass singleton({"a", "b"}, {"p", "q", "r"}, {{0, 2}});
    for (std::size_t T = 1; T <= 3; ++T) {
        const double v = sequential_rademacher(singleton, T);
        ok = ok && v == 0.0;
        detail << "singleton T=" << T << ": " << fixed(v) << "; ";
    }
    // Two hypotheses that agree at a but disagree at b.
    const ConceptClass pair({"a", "b"}, {"0", "1"}, {{0, 0}, {0, 1}});
    const double half = sequential_rademacher(pair, 1);
    ok = ok && half == 0.5;
    detail << "agree/disagree T=1: " << fixed(half) << "; ";

    CounterRng rng(seed, 8);
    const std::pair<std::size_t, std::size_t> shapes[] = {{1, 2}, {2, 2}, {1, 3}, {2, 3}, {3, 2}};
    std::size_t monotone = 0;
    bool in_range = true;
    for (int i = 0; i < 20; ++i) {
        const auto [nx, ny] = shapes[rng.below(5)];
        const ConceptClass big = random_class(rng.next(), nx, ny, static_cast<std::size_t>(rng.between(2, 5)));
        std::vector<HypothesisIndex> rows;
        for (HypothesisIndex h = 0; h < big.num_hypotheses(); ++h) {
            if (rng.below(2) != 0) rows.push_back(h);
        }
        if (rows.empty()) rows.push_back(0);
        const ConceptClass small = subclass(big, rows);
        const auto T = static_cast<std::size_t>(1 + i % 3);
        const double vs = sequential_rademacher(small, T);
        const double vb = sequential_rademacher(big, T);
        in_range = in_range && vs >= 0.0 && vs <= 1.0 && vb >= 0.0 && vb <= 1.0;
        if (vs <= vb) ++monotone;
    }
    ok = ok && in_range && monotone == 20;
    detail << monotone << "/20 nested pairs monotone; values in [0,1]: " << (in_range ? "yes" : "no");
    r.ok = ok;
    r.detail = detail.str();
}

void finite_y_baseline(CriterionResult& r, std::uint64_t seed) {
    CounterRng rng(seed, 9);
    std::size_t ok = 0;
    double worst = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < 100; ++i) {
        SolvedClass sc = [&] {
            while (true) {
                const auto nx = static_cast<std::size_t>(rng.between(1, 4));
                const auto ny = static_cast<std::size_t>(rng.between(2, 4));
                const auto nh = static_cast<std::size_t>(rng.between(1, 4));
                SolvedClass cand(random_class(rng.next(), nx, ny, nh));
                if (cand.dim() <= 1) return cand;
            }
        }();
        const auto h = static_cast<HypothesisIndex>(rng.below(sc.cls->num_hypotheses()));
        const auto horizon = static_cast<std::size_t>(rng.between(1, 10));
        const double rate = 0.1 * static_cast<double>(rng.below(6));
        const auto s = noisy_adversary(*sc.cls, h, rate, horizon, rng.next());

        const auto trace = finite_y_learner(*sc.solver, s);
        const auto family =
            enumerate_labeled_experts(horizon, sc.dim(), sc.cls->num_labels(), cap_cells());
        const Expert star = replicating_expert(*sc.solver, s, trace.opt_hypothesis);
        const auto idx = family.find(star);
        const auto outputs = labeled_expert_outputs(*sc.solver, star, s);
        bool replicates = true;
        for (std::size_t t = 0; t < s.size(); ++t) {
            replicates = replicates && outputs[t] == (*sc.cls)(trace.opt_hypothesis, s[t].point);
        }
        const double bound = mw_regret_bound(horizon, family.size());
        worst = std::max(worst, trace.regret - bound);
        const bool good = trace.regret <= bound + 1e-9 && idx.has_value() && replicates &&
                          trace.expert_cumulative_losses[*idx] == trace.opt;
        if (good) ++ok;
    }
    r.ok = ok == 100;
    r.detail = std::to_string(ok) +
               "/100 runs within sqrt((T/2) ln|Q|) with the replicating expert attaining OPT; max regret - bound = " +
               fixed(worst);
}

}  // namespace

bool AcceptanceReport::passed() const {
    return !criteria.empty() &&
           std::all_of(criteria.begin(), criteria.end(), [](const CriterionResult& c) { return c.passed(); });
}

std::string AcceptanceReport::text() const {
    std::ostringstream out;
    out << "acceptance seed " << seed << "\n";
    for (const auto& c : criteria) {
        out << "criterion " << c.id << " [" << c.name << "]: " << (c.passed() ? "PASS" : "FAIL");
        if (!c.within_time()) out << " (time limit " << fixed(c.time_limit, 0) << " s exceeded)";
        out << " :: " << c.detail << "\n";
    }
    std::size_t passed_count = 0;
    for (const auto& c : criteria) passed_count += c.passed() ? 1 : 0;
    out << "summary: " << passed_count << "/" << criteria.size() << " criteria passed\n";
    return out.str();
}

AcceptanceReport run_acceptance(std::uint64_t seed, std::ostream* timings) {
    AcceptanceReport report;
    report.seed = seed;
    auto& out = report.criteria;

    out.push_back(timed(1, "dimension-oracle-equivalence", 60, timings,
                        [&](CriterionResult& r) { dimension_oracle(r, seed); }));
    out.push_back(timed(2, "soa-mistake-bound", 60, timings, [&](CriterionResult& r) { soa_mistake_bound(r, seed); }));
    out.push_back(timed(3, "forcing-adversary", 10, timings, [&](CriterionResult& r) { forcing_adversary(r); }));

    std::vector<SolvedClass> classes;
    std::vector<RegretCase> cases;
    out.push_back(timed(4, "regret-certificate", 300, timings, [&](CriterionResult& r) {
        classes = regret_classes(seed);
        cases = regret_cases(classes, seed);
        regret_certificate(r, classes, cases);
    }));
    out.push_back(timed(5, "best-expert-witness", 300, timings,
                        [&](CriterionResult& r) { witness_certificate(r, classes, cases); }));
    out.push_back(timed(6, "experts-regret-bound", 30, timings, [&](CriterionResult& r) { experts_bound(r, seed); }));
    out.push_back(timed(7, "separation-and-dimension-bound", 300, timings,
                        [&](CriterionResult& r) { separation(r, classes); }));
    out.push_back(timed(8, "sequential-rademacher-oracle", 60, timings,
                        [&](CriterionResult& r) { rademacher_oracle(r, seed); }));
    out.push_back(timed(9, "finite-label-baseline", 120, timings,
                        [&](CriterionResult& r) { finite_y_baseline(r, seed); }));
    return report;
}

}  // namespace llab

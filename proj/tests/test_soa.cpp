#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "llab/dimensions.hpp"
#include "llab/errors.hpp"
#include "llab/harness.hpp"
#include "llab/random.hpp"
#include "llab/soa.hpp"
#include "support.hpp"

using namespace llab;

TEST_CASE("prediction on degenerate version spaces") {
    const ConceptClass c({"a", "b"}, {"p", "q", "r"}, {{2, 1}, {0, 0}});
    HypothesisSet one(2);
    one.set(0);
    CHECK(soa_predict(VersionSpace(c, one), 0) == 2);
    CHECK(soa_predict(VersionSpace(c, one), 1) == 1);
    CHECK(soa_predict(VersionSpace(c, HypothesisSet(2)), 1) == 0);
    CHECK_THROWS_AS(soa_predict(VersionSpace(c), 2), MalformedInput);
}

TEST_CASE("symmetric labels break ties to the lowest index") {
    const auto c = testing::full_binary_class(3);
    for (Point x = 0; x < 3; ++x) CHECK(soa_predict(VersionSpace(c), x) == 0);
}

TEST_CASE("labels equal to SOA's own predictions cost nothing") {
    const auto c = example1_class(3);
    DimensionSolver solver(c);
    SoaLearner soa(c, solver);
    LabeledSequence s;
    for (Point x : {0U, 2U, 1U, 1U, 0U}) {
        const Label y = soa.predict(x);
        soa.observe(x, y);
        s.push_back({x, y});
    }
    CHECK(soa.mistakes() == 0);
    CHECK(soa_run(c, s).mistakes == 0);
    CHECK(conservative_soa(c, s).empty());
}

TEST_CASE("property: realizable streams cost at most L mistakes") {
    CounterRng rng(4);
    for (int i = 0; i < 300; ++i) {
        const auto c = random_class(rng.next(), 1 + rng.below(5), 2 + rng.below(3), 1 + rng.below(12));
        const auto h = static_cast<HypothesisIndex>(rng.below(c.num_hypotheses()));
        const auto s = noisy_adversary(c, h, 0.0, 1 + rng.below(12), rng.next());
        DimensionSolver solver(c);
        CHECK(static_cast<int>(soa_run(solver, s).mistakes) <= solver.littlestone());
    }
    const auto e = example1_class(3);
    for (HypothesisIndex h = 0; h < 8; ++h) {
        CHECK(soa_run(e, noisy_adversary(e, h, 0.0, 6, h)).mistakes <= 1);
    }
}

TEST_CASE("property: each full-update mistake lowers the dimension") {
    CounterRng rng(5);
    for (int i = 0; i < 200; ++i) {
        const auto c = random_class(rng.next(), 1 + rng.below(5), 2 + rng.below(3), 1 + rng.below(12));
        const auto h = static_cast<HypothesisIndex>(rng.below(c.num_hypotheses()));
        const auto s = noisy_adversary(c, h, 0.0, 10, rng.next());
        DimensionSolver solver(c);
        SoaLearner soa(c, solver);
        for (const auto& e : s.entries) {
            const int before = solver.littlestone(soa.members());
            const bool wrong = soa.predict(e.point) != e.label;
            soa.observe(e.point, e.label);
            const int after = solver.littlestone(soa.members());
            if (wrong) CHECK(after < before);
            CHECK(after <= before);
        }
        CHECK(soa.version_space().members() == restrict(VersionSpace(c), s).members());
        CHECK(soa.history_length() == s.size());
    }
}

TEST_CASE("determinism") {
    const auto c = random_class(17, 4, 3, 10);
    const auto s = noisy_adversary(c, 0, 0.3, 12, 2);
    const auto a = soa_run(c, s);
    const auto b = soa_run(c, s);
    CHECK(a.predictions == b.predictions);
    CHECK(a.mistakes == b.mistakes);
}

TEST_CASE("property: replaying the conservative rounds reproduces the mistakes") {
    CounterRng rng(6);
    for (int i = 0; i < 200; ++i) {
        const auto c = random_class(rng.next(), 1 + rng.below(5), 2 + rng.below(3), 1 + rng.below(12));
        const auto h = static_cast<HypothesisIndex>(rng.below(c.num_hypotheses()));
        const auto s = noisy_adversary(c, h, 0.0, 1 + rng.below(14), rng.next());
        DimensionSolver solver(c);
        const auto J = conservative_soa(solver, s);
        CHECK(static_cast<int>(J.size()) <= solver.littlestone());

        HypothesisSet v = c.all();
        std::size_t next = 0;
        for (std::size_t t = 0; t < s.size(); ++t) {
            const bool wrong = soa_predict(solver, v, s[t].point) != s[t].label;
            const bool in_j = next < J.size() && J[next] == t;
            CHECK(wrong == in_j);
            if (in_j) {
                v &= c.agreeing(s[t].point, s[t].label);
                ++next;
            }
        }
        CHECK(next == J.size());
    }
}

TEST_CASE("conservative SOA rejects non-realizable streams") {
    const auto c = testing::full_binary_class(1);
    LabeledSequence s;
    s.push_back({0, 0});
    s.push_back({0, 1});
    CHECK_THROWS_AS(conservative_soa(c, s), PreconditionError);
}

TEST_CASE("tree walk forces one conservative update per level") {
    for (std::size_t n = 1; n <= 4; ++n) {
        const auto c = testing::full_binary_class(n);
        DimensionSolver solver(c);
        SoaLearner soa(c, solver);
        const auto s = tree_walk_adversary(c, soa);
        CHECK(conservative_soa(solver, s).size() == n);
    }
}

TEST_CASE("empty version space stops updating and predicts the default") {
    const auto c = testing::full_binary_class(1);
    DimensionSolver solver(c);
    SoaLearner soa(c, solver);
    soa.observe(0, 1);
    soa.observe(0, 0);
    CHECK(soa.members().empty());
    CHECK(soa.predict(0) == 0);
    soa.observe(0, 1);
    CHECK(soa.members().empty());
}

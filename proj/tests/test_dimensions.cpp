#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "llab/dimensions.hpp"
#include "llab/errors.hpp"
#include "llab/random.hpp"
#include "support.hpp"

#include <cmath>

using namespace llab;

namespace {

ConceptClass random_small(CounterRng& rng) {
    return random_class(rng.next(), 1 + rng.below(4), 1 + rng.below(3), 1 + rng.below(12));
}

}  // namespace

TEST_CASE("base cases") {
    const auto c = example1_class(2);
    CHECK(littlestone_dim(VersionSpace(c, HypothesisSet(c.num_hypotheses()))) == -1);
    const ConceptClass single({"a", "b"}, {"p", "q"}, {{0, 1}});
    CHECK(littlestone_dim(single) == 0);
}

TEST_CASE("full binary class on three points") {
    const auto c = testing::full_binary_class(3);
    CHECK(testing::naive_littlestone(c) == 3);
    CHECK(littlestone_dim(c) == 3);
    CHECK(littlestone_dim_bruteforce(VersionSpace(c), 3) == 3);
}

TEST_CASE("example1 classes have dimension one") {
    for (unsigned m = 2; m <= 6; ++m) CHECK(littlestone_dim(example1_class(m)) == 1);
    CHECK(testing::naive_littlestone(example1_class(4)) == 1);
}

TEST_CASE("loss class of example1(3) has dimension three") {
    const auto l = loss_class(example1_class(3));
    CHECK(testing::naive_littlestone(l) == 3);
    CHECK(littlestone_dim(l) == 3);
}

TEST_CASE("sequential graph dimension") {
    for (unsigned m = 2; m <= 6; ++m) {
        const auto c = example1_class(m);
        CHECK(sequential_graph_dim(c) == static_cast<int>(m));
    }
    for (unsigned m = 2; m <= 3; ++m) {
        CHECK(testing::naive_littlestone(loss_class(example1_class(m))) == static_cast<int>(m));
    }
    CHECK(sequential_graph_dim(ConceptClass({"a"}, {"p"}, {})) == -1);

    // Binary labels: the loss class is a relabeling of the class itself.
    CounterRng rng(21);
    for (int i = 0; i < 60; ++i) {
        const auto c = random_class(rng.next(), 1 + rng.below(4), 2, 1 + rng.below(10));
        CHECK(sequential_graph_dim(c) == littlestone_dim(c));
    }
}

TEST_CASE("property: solver matches both oracles on small classes") {
    CounterRng rng(7);
    for (int i = 0; i < 300; ++i) {
        const auto c = random_small(rng);
        const int fast = littlestone_dim(c);
        CHECK(fast == testing::naive_littlestone(c));
        CHECK(fast == littlestone_dim_bruteforce(VersionSpace(c), static_cast<int>(c.num_points())));
    }
}

TEST_CASE("brute force oracle caps and depth limit") {
    const auto big = example1_class(5);
    CHECK_THROWS_AS(littlestone_dim_bruteforce(VersionSpace(big), 5), ResourceError);
    const auto c = testing::full_binary_class(3);
    CHECK(littlestone_dim_bruteforce(VersionSpace(c), 2) == 2);
}

TEST_CASE("property: monotone under inclusion, halving bound, at most one full-dimension label") {
    CounterRng rng(8);
    for (int i = 0; i < 200; ++i) {
        const auto c = random_small(rng);
        DimensionSolver solver(c);
        const int whole = solver.littlestone();

        HypothesisSet part(c.num_hypotheses());
        for (HypothesisIndex h = 0; h < c.num_hypotheses(); ++h) {
            if (rng.below(2) != 0) part.set(h);
        }
        CHECK(solver.littlestone(part) <= whole);

        CHECK(whole <= static_cast<int>(std::floor(std::log2(static_cast<double>(c.num_hypotheses())))));

        for (Point x = 0; x < c.num_points(); ++x) {
            int keeping = 0;
            for (Label y = 0; y < c.num_labels(); ++y) {
                if (solver.littlestone(c.agreeing(x, y)) == whole) ++keeping;
            }
            CHECK(keeping <= 1);
        }
    }
}

TEST_CASE("property: dimension bound from the Littlestone dimension") {
    CounterRng rng(9);
    for (int i = 0; i < 100; ++i) {
        const auto c = random_small(rng);
        const int L = littlestone_dim(c);
        const double bound = 2.0 * L * std::log2(std::exp(1.0) * static_cast<double>(c.num_labels()));
        CHECK(sequential_graph_dim(c) <= bound + 1e-9);
    }
}

TEST_CASE("shattered tree witnesses") {
    CounterRng rng(10);
    for (int i = 0; i < 100; ++i) {
        const auto c = random_small(rng);
        const VersionSpace v(c);
        const int d = littlestone_dim(v);
        if (d < 0) continue;
        const auto tree = shattered_tree(v, d);
        REQUIRE(tree.has_value());
        CHECK(tree->depth == d);
        CHECK(tree->nodes.size() == (std::size_t{1} << d) - 1);
        CHECK(tree->is_shattered_by(v));
        for (std::uint64_t leaf = 0; leaf < (std::uint64_t{1} << d); ++leaf) {
            CHECK(is_realizable(v, tree->path(leaf)));
        }
        for (std::size_t n = 0; n < tree->nodes.size(); ++n) CHECK(tree->nodes[n].label0 != tree->nodes[n].label1);
        CHECK_FALSE(shattered_tree(v, d + 1).has_value());
        if (d > 0) CHECK(tree->truncated(d - 1).is_shattered_by(v));
    }
}

TEST_CASE("node budget raises instead of truncating") {
    const auto c = testing::full_binary_class(4);
    DimensionOptions tight;
    tight.node_budget = 3;
    DimensionSolver solver(c, tight);
    CHECK_THROWS_AS(solver.littlestone(), ResourceError);
}

TEST_CASE("tiny cache gives the same answers") {
    CounterRng rng(12);
    for (int i = 0; i < 50; ++i) {
        const auto c = random_small(rng);
        DimensionOptions small;
        small.cache_capacity = 1;
        DimensionSolver solver(c, small);
        CHECK(solver.littlestone() == littlestone_dim(c));
        CHECK(solver.cache_size() <= 1);
    }
}

TEST_CASE("memo cache is reused") {
    const auto c = example1_class(6);
    DimensionSolver solver(c);
    CHECK(solver.littlestone() == 1);
    const auto expanded = solver.nodes_expanded();
    CHECK(solver.littlestone() == 1);
    CHECK(solver.nodes_expanded() == expanded);
}

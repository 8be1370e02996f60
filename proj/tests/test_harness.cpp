#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "llab/dimensions.hpp"
#include "llab/errors.hpp"
#include "llab/harness.hpp"
#include "llab/io.hpp"
#include "llab/oracles.hpp"
#include "llab/random.hpp"
#include "llab/soa.hpp"
#include "support.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace llab;

namespace {

// Deterministic learner that claims to be randomized.
class CoinLearner : public OnlineLearner {
public:
    Label predict(Point) override { return 0; }
    void observe(Point, Label) override {}
    bool is_deterministic() const override { return false; }
};

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("OPT") {
    const auto c = example1_class(3);
    const auto s = noisy_adversary(c, 6, 0.0, 10, 1);
    CHECK(opt_mistakes(c, s).mistakes == 0);

    const ConceptClass single({"a", "b"}, {"p", "q"}, {{0, 1}});
    LabeledSequence t;
    t.push_back({0, 1});
    t.push_back({1, 1});
    t.push_back({0, 1});
    CHECK(opt_mistakes(single, t).mistakes == 2);

    CounterRng rng(1);
    for (int i = 0; i < 50; ++i) {
        const auto d = random_class(rng.next(), 3, 3, 6);
        const auto u = noisy_adversary(d, 0, 0.6, 15, rng.next());
        const auto all = hypothesis_mistakes(d, u);
        const auto opt = opt_mistakes(d, u);
        CHECK(opt.mistakes == *std::min_element(all.begin(), all.end()));
        CHECK(all[opt.hypothesis] == opt.mistakes);
        CHECK(std::find(all.begin(), all.end(), opt.mistakes) - all.begin() == opt.hypothesis);
        CHECK(opt_prefix(d, u).back() == opt.mistakes);
    }
    CHECK_THROWS_AS(opt_mistakes(ConceptClass({"a"}, {"p"}, {}), t.prefix(0)), PreconditionError);
}

TEST_CASE("tree walk adversary") {
    const auto c = testing::full_binary_class(3);
    DimensionSolver solver(c);
    SoaLearner soa(c, solver);
    const auto s = tree_walk_adversary(c, soa);
    CHECK(s.size() == 3);
    CHECK(soa.mistakes() == 3);
    CHECK(is_realizable(c, s));

    CoinLearner coin;
    CHECK_THROWS_AS(tree_walk_adversary(c, coin), PreconditionError);

    const ConceptClass single({"a"}, {"p", "q"}, {{1}});
    DimensionSolver ssolver(single);
    SoaLearner ssoa(single, ssolver);
    CHECK(tree_walk_adversary(single, ssoa).empty());
}

TEST_CASE("property: tree walk is realizable with length L against any deterministic learner") {
    // A learner that always answers label 0.
    struct Constant : OnlineLearner {
        Label predict(Point) override { return 0; }
        void observe(Point, Label) override {}
    };
    CounterRng rng(2);
    for (int i = 0; i < 100; ++i) {
        const auto c = random_class(rng.next(), 1 + rng.below(4), 2 + rng.below(2), 1 + rng.below(12));
        const int L = littlestone_dim(c);
        DimensionSolver solver(c);
        SoaLearner soa(c, solver);
        Constant constant;
        for (OnlineLearner* learner : std::initializer_list<OnlineLearner*>{&soa, &constant}) {
            const auto s = tree_walk_adversary(c, *learner);
            CHECK(static_cast<int>(s.size()) == L);
            CHECK(is_realizable(c, s));
        }
        CHECK(static_cast<int>(soa.mistakes()) == L);
    }
}

TEST_CASE("noisy adversary") {
    const auto c = random_class(3, 4, 3, 8);
    CHECK(is_realizable(c, noisy_adversary(c, 2, 0.0, 20, 5)));
    CHECK(noisy_adversary(c, 2, 0.3, 20, 5) == noisy_adversary(c, 2, 0.3, 20, 5));
    const auto all_noise = noisy_adversary(c, 2, 1.0, 20, 5);
    for (const auto& e : all_noise.entries) CHECK(e.label != c(2, e.point));
    CHECK_THROWS_AS(noisy_adversary(c, 2, 1.5, 5, 1), MalformedInput);
    CHECK_THROWS_AS(noisy_adversary(c, 99, 0.1, 5, 1), MalformedInput);
}

TEST_CASE("sequential Rademacher complexity") {
    const ConceptClass single({"a", "b"}, {"p", "q", "r"}, {{0, 2}});
    for (std::size_t T = 1; T <= 3; ++T) CHECK(sequential_rademacher(single, T) == 0.0);

    const ConceptClass pair({"a", "b"}, {"0", "1"}, {{0, 0}, {0, 1}});
    CHECK(sequential_rademacher(pair, 1) == 0.5);
    CHECK(testing::rademacher_oracle(pair, 1) == 0.5);

    CHECK_THROWS_AS(sequential_rademacher(pair, 0), MalformedInput);
    CHECK_THROWS_AS(sequential_rademacher(pair, 6), ResourceError);
    CHECK_THROWS_AS(sequential_rademacher(example1_class(3), 3), ResourceError);
}

TEST_CASE("property: tree enumeration matches the minimax recursion") {
    CounterRng rng(3);
    for (int i = 0; i < 40; ++i) {
        const std::size_t nx = 1 + rng.below(2), ny = 2 + rng.below(2);
        const auto c = random_class(rng.next(), nx, ny, 1 + rng.below(5));
        const std::size_t T = 1 + rng.below(3);
        const double v = sequential_rademacher(c, T);
        CHECK(v == testing::rademacher_oracle(c, T));
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("property: Rademacher value is monotone under inclusion") {
    CounterRng rng(4);
    for (int i = 0; i < 30; ++i) {
        const auto big = random_class(rng.next(), 2, 2 + rng.below(2), 2 + rng.below(4));
        std::vector<HypothesisIndex> rows;
        for (HypothesisIndex h = 0; h < big.num_hypotheses(); ++h) {
            if (rng.below(2) != 0) rows.push_back(h);
        }
        if (rows.empty()) rows.push_back(0);
        const auto small = subclass(big, rows);
        for (std::size_t T = 1; T <= 2; ++T) CHECK(sequential_rademacher(small, T) <= sequential_rademacher(big, T));
    }
}

TEST_CASE("epsilon-approximation error") {
    const auto c = random_class(5, 3, 3, 6);
    const auto s = noisy_adversary(c, 1, 0.4, 12, 9);
    std::vector<std::size_t> all(s.size());
    for (std::size_t k = 0; k < all.size(); ++k) all[k] = k;
    CHECK(aulln_error(c, all, s) == 0.0);

    // One hypothesis; K is exactly its mistake rounds.
    const ConceptClass single({"a", "b"}, {"p", "q"}, {{0, 0}});
    LabeledSequence t;
    for (Label y : {1U, 0U, 1U, 0U, 0U}) t.push_back({0, y});
    const std::vector<std::size_t> K{0, 2};
    CHECK(aulln_error(single, K, t) == doctest::Approx(std::abs(1.0 - 2.0 / 5.0)));

    CHECK_THROWS_AS(aulln_error(c, std::vector<std::size_t>{}, s), MalformedInput);
    CHECK_THROWS_AS(aulln_error(c, std::vector<std::size_t>{99}, s), MalformedInput);
}

TEST_CASE("property: epsilon-approximation error ignores a joint permutation") {
    CounterRng rng(5);
    for (int i = 0; i < 100; ++i) {
        const auto c = random_class(rng.next(), 3, 3, 1 + rng.below(8));
        const auto s = noisy_adversary(c, 0, 0.5, 10, rng.next());
        std::vector<std::size_t> K;
        for (std::size_t k = 0; k < 1 + rng.below(10); ++k) K.push_back(rng.below(s.size()));
        std::vector<std::size_t> perm(s.size());
        for (std::size_t k = 0; k < perm.size(); ++k) perm[k] = k;
        for (std::size_t k = perm.size(); k > 1; --k) std::swap(perm[k - 1], perm[rng.below(k)]);
        // perm[new] = old; map K through the inverse.
        std::vector<std::size_t> inverse(perm.size());
        for (std::size_t k = 0; k < perm.size(); ++k) inverse[perm[k]] = k;
        const auto moved = s.subsequence(perm);
        std::vector<std::size_t> moved_K;
        for (auto k : K) moved_K.push_back(inverse[k]);
        CHECK(aulln_error(c, moved_K, moved) == doctest::Approx(aulln_error(c, K, s)).epsilon(1e-15));
    }
}

TEST_CASE("dimension bound helper") {
    CHECK(sequential_graph_bound(0, 5) == 0.0);
    CHECK(sequential_graph_bound(1, 2) == doctest::Approx(2.0 * std::log2(2.0 * std::exp(1.0))));
}

TEST_CASE("class sources") {
    CHECK(load_class_source("example1:3", 1) == example1_class(3));
    CHECK(load_class_source("random:3,2,5", 8) == load_class_source("random:3,2,5", 8));
    CHECK_THROWS_AS(load_class_source("example1:x", 1), MalformedInput);
    CHECK_THROWS_AS(load_class_source("random:3,2", 1), MalformedInput);
    CHECK_THROWS_WITH_AS(load_class_source("/nonexistent/class.json", 1), doctest::Contains("/nonexistent/class.json"), Error);
}

TEST_CASE("experiments") {
    const auto dir = std::filesystem::temp_directory_path() / "llab_harness_test";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);

    ExperimentConfig config;
    config.class_source = "example1:3";
    config.learner = "aag";
    config.horizon = 12;
    config.seed = 7;

    SUBCASE("same config twice gives identical reports") {
        config.out_prefix = (dir / "a").string();
        const auto a = run_experiment(config);
        config.out_prefix = (dir / "b").string();
        const auto b = run_experiment(config);
        CHECK(a.passed());
        CHECK(a.to_json().dump() == b.to_json().dump());
        CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));
        CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
        const auto csv = slurp(dir / "a.csv");
        CHECK(csv.rfind("t,expected_loss,cum_expected_loss,opt_so_far,bound\n", 0) == 0);
        CHECK(std::count(csv.begin(), csv.end(), '\n') == 13);
    }
    SUBCASE("a zeroed bound is reported as a failure") {
        config.adversary = "noisy";
        config.noise_rate = 0.4;
        config.bound_scale = 0.0;
        CHECK_FALSE(run_experiment(config).passed());
    }
    SUBCASE("several trials write one CSV each") {
        config.trials = 3;
        config.out_prefix = (dir / "multi").string();
        const auto r = run_experiment(config);
        CHECK(r.trials.size() == 3);
        for (int k = 0; k < 3; ++k) CHECK(std::filesystem::exists(dir / ("multi." + std::to_string(k) + ".csv")));
    }
    SUBCASE("every learner and adversary") {
        for (const char* learner : {"aag", "finitey", "soa"}) {
            for (const char* adversary : {"noisy", "minmass"}) {
                config.learner = learner;
                config.adversary = adversary;
                config.horizon = 6;
                if (std::string(learner) == "soa" && std::string(adversary) == "minmass") continue;
                CHECK(run_experiment(config).passed());
            }
        }
        config.learner = "soa";
        config.adversary = "treewalk";
        const auto r = run_experiment(config);
        CHECK(r.passed());
        CHECK(r.trials[0].sequence.size() == 1);
    }
    SUBCASE("sequence files") {
        const auto c = example1_class(3);
        const auto s = noisy_adversary(c, 3, 0.2, 9, 4);
        io::write_text(dir / "s.json", io::sequence_to_json(s).dump());
        config.sequence_file = (dir / "s.json").string();
        config.horizon = 0;
        const auto r = run_experiment(config);
        CHECK(r.trials[0].sequence == s);
        config.horizon = 20;
        CHECK_THROWS_AS(run_experiment(config), MalformedInput);
    }
    SUBCASE("bad configurations") {
        config.learner = "nope";
        CHECK_THROWS_AS(run_experiment(config), MalformedInput);
        config.learner = "aag";
        config.trials = 0;
        CHECK_THROWS_AS(run_experiment(config), MalformedInput);
    }
}

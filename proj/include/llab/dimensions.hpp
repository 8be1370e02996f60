#pragma once

// Exact Littlestone and sequential graph dimensions of finite classes.
//
// The solver evaluates the inductive characterization
//
//     L(V) = max_x max_{y0 != y1} min_i L(V_(x, y_i)) + 1,   L(empty) = -1,
//
// over realized labels only. For a fixed x the inner max-min equals the
// second largest child dimension, so each point costs one pass over its
// realized labels. Results are memoized on the member bit pattern. Worst case
// is exponential in the class size; a node budget turns runaway searches into
// ResourceError instead of silent truncation.

#include "llab/concept.hpp"

#include <cstdint>
#include <list>
#include <optional>
#include <unordered_map>
#include <vector>

namespace llab {

// Perfect binary tree in heap order: the node at address b (depth t, b read
// as a t-bit number) sits at index 2^t - 1 + b. Child 0 follows edge label
// label0, child 1 follows label1.
struct ShatteredTree {
    struct Node {
        Point point;
        Label label0;
        Label label1;
        friend bool operator==(const Node&, const Node&) = default;
    };

    int depth = 0;
    std::vector<Node> nodes;

    // The (point, label) path selected by the bits of `leaf` (most significant
    // bit first, `depth` bits).
    LabeledSequence path(std::uint64_t leaf) const;
    // Sibling labels distinct and every root-to-leaf path realizable by v.
    bool is_shattered_by(const VersionSpace& v) const;
    ShatteredTree truncated(int d) const;
};

struct DimensionOptions {
    std::size_t cache_capacity = std::size_t{1} << 20;
    std::uint64_t node_budget = 50'000'000;
};

// Memoizing Littlestone-dimension evaluator bound to one class. Not
// thread-safe; use one solver per task.
class DimensionSolver {
public:
    explicit DimensionSolver(const ConceptClass& cls, DimensionOptions options = {});

    const ConceptClass& concept_class() const { return cls_; }

    int littlestone(const HypothesisSet& members);
    int littlestone(const VersionSpace& v) { return littlestone(v.members()); }
    int littlestone() { return littlestone(cls_.all()); }

    std::optional<ShatteredTree> shattered_tree(const HypothesisSet& members, int depth);

    std::uint64_t nodes_expanded() const { return expanded_; }
    std::size_t cache_size() const { return cache_.size(); }

private:
    struct Entry {
        int dim;
        Point point;
        Label label0;
        Label label1;
    };
    using Lru = std::list<HypothesisSet>;

    Entry solve(const HypothesisSet& v);
    const Entry* lookup(const HypothesisSet& v);
    void store(const HypothesisSet& v, const Entry& e);
    void build(const HypothesisSet& v, int depth, std::size_t index, ShatteredTree& tree);

    const ConceptClass& cls_;
    DimensionOptions options_;
    std::unordered_map<HypothesisSet, std::pair<Entry, Lru::iterator>> cache_;
    Lru lru_;
    std::uint64_t expanded_ = 0;
};

int littlestone_dim(const VersionSpace& v);
int littlestone_dim(const ConceptClass& c);

// Independent oracle: searches explicit tree assignments (points and
// edge-label pairs per node) and checks every root-to-leaf path against the
// hypothesis table. Limited to |X| <= 4 and |H| <= 20.
int littlestone_dim_bruteforce(const VersionSpace& v, int dmax);

// L of the 0-1 loss class over X x Y.
int sequential_graph_dim(const ConceptClass& c);

std::optional<ShatteredTree> shattered_tree(const VersionSpace& v, int depth);

}  // namespace llab

#include "llab/dimensions.hpp"

#include "llab/errors.hpp"

#include <algorithm>
#include <bit>
#include <functional>

namespace llab {

namespace {

int floor_log2(std::size_t n) { return static_cast<int>(std::bit_width(n)) - 1; }

}  // namespace

// ---------------------------------------------------------------------------
// ShatteredTree

LabeledSequence ShatteredTree::path(std::uint64_t leaf) const {
    LabeledSequence s;
    std::size_t idx = 0;
    for (int t = 0; t < depth; ++t) {
        const unsigned b = (leaf >> (depth - 1 - t)) & 1U;
        const Node& n = nodes[idx];
        s.push_back({n.point, b == 0 ? n.label0 : n.label1});
        idx = 2 * idx + 1 + b;
    }
    return s;
}

bool ShatteredTree::is_shattered_by(const VersionSpace& v) const {
    if (depth < 0) return false;
    if (nodes.size() != (std::size_t{1} << depth) - 1) return false;
    const auto& c = v.concept_class();
    for (const auto& n : nodes) {
        if (n.label0 == n.label1 || n.point >= c.num_points() || n.label0 >= c.num_labels() ||
            n.label1 >= c.num_labels()) {
            return false;
        }
    }
    const std::uint64_t leaves = std::uint64_t{1} << depth;
    for (std::uint64_t leaf = 0; leaf < leaves; ++leaf) {
        if (!is_realizable(v, path(leaf))) return false;
    }
    return true;
}

ShatteredTree ShatteredTree::truncated(int d) const {
    ShatteredTree t;
    t.depth = std::min(d, depth);
    t.nodes.assign(nodes.begin(), nodes.begin() + static_cast<std::ptrdiff_t>((std::size_t{1} << t.depth) - 1));
    return t;
}

// ---------------------------------------------------------------------------
// DimensionSolver

DimensionSolver::DimensionSolver(const ConceptClass& cls, DimensionOptions options)
    : cls_(cls), options_(options) {
    if (options_.cache_capacity == 0) options_.cache_capacity = 1;
}

const DimensionSolver::Entry* DimensionSolver::lookup(const HypothesisSet& v) {
    auto it = cache_.find(v);
    if (it == cache_.end()) return nullptr;
    lru_.splice(lru_.begin(), lru_, it->second.second);
    return &it->second.first;
}

void DimensionSolver::store(const HypothesisSet& v, const Entry& e) {
    if (cache_.size() >= options_.cache_capacity) {
        cache_.erase(lru_.back());
        lru_.pop_back();
    }
    lru_.push_front(v);
    cache_.emplace(v, std::make_pair(e, lru_.begin()));
}

DimensionSolver::Entry DimensionSolver::solve(const HypothesisSet& v) {
    const std::size_t n = v.count();
    if (n == 0) return {-1, 0, 0, 0};
    if (n == 1) return {0, 0, 0, 0};
    if (const Entry* hit = lookup(v)) return *hit;
    if (++expanded_ > options_.node_budget) {
        throw ResourceError("Littlestone dimension search exceeded its budget of " +
                            std::to_string(options_.node_budget) + " version spaces");
    }

    struct Child {
        std::size_t size;
        Label label;
        HypothesisSet members;
    };
    struct Split {
        Point point;
        std::vector<Child> children;  // non-empty restrictions, largest first
    };

    std::vector<Split> splits;
    for (Point x = 0; x < cls_.num_points(); ++x) {
        Split s{x, {}};
        for (const auto& [y, agree] : cls_.realized(x)) {
            HypothesisSet child = v & agree;
            const std::size_t sz = child.count();
            if (sz != 0) s.children.push_back({sz, y, std::move(child)});
        }
        if (s.children.size() < 2) continue;
        std::stable_sort(s.children.begin(), s.children.end(),
                         [](const Child& a, const Child& b) { return a.size > b.size; });
        splits.push_back(std::move(s));
    }
    // Most balanced splits first: they bound the achievable value from above.
    std::stable_sort(splits.begin(), splits.end(), [](const Split& a, const Split& b) {
        return a.children[1].size > b.children[1].size;
    });

    const int upper = floor_log2(n);
    Entry best{0, 0, 0, 0};
    for (const auto& s : splits) {
        if (floor_log2(s.children[1].size) + 1 <= best.dim) break;
        int top1 = -2, top2 = -2;
        Label y1 = 0, y2 = 0;
        for (const auto& child : s.children) {
            if (floor_log2(child.size) <= top2) break;
            const int d = solve(child.members).dim;
            if (d > top1) {
                top2 = top1;
                y2 = y1;
                top1 = d;
                y1 = child.label;
            } else if (d > top2) {
                top2 = d;
                y2 = child.label;
            }
        }
        if (top2 + 1 > best.dim) best = {top2 + 1, s.point, std::min(y1, y2), std::max(y1, y2)};
        if (best.dim == upper) break;
    }
    store(v, best);
    return best;
}

int DimensionSolver::littlestone(const HypothesisSet& members) {
    if (members.universe() != cls_.num_hypotheses()) {
        throw MalformedInput("hypothesis set does not belong to this solver's class");
    }
    return solve(members).dim;
}

void DimensionSolver::build(const HypothesisSet& v, int depth, std::size_t index, ShatteredTree& tree) {
    if (depth == 0) return;
    const Entry e = solve(v);
    if (e.dim < depth) throw InternalError("shattered tree reconstruction lost its witness");
    tree.nodes[index] = {e.point, e.label0, e.label1};
    build(v & cls_.agreeing(e.point, e.label0), depth - 1, 2 * index + 1, tree);
    build(v & cls_.agreeing(e.point, e.label1), depth - 1, 2 * index + 2, tree);
}

std::optional<ShatteredTree> DimensionSolver::shattered_tree(const HypothesisSet& members, int depth) {
    if (depth < 0 || depth > littlestone(members)) return std::nullopt;
    if (depth >= 63) throw ResourceError("shattered tree of depth " + std::to_string(depth) + " is too large");
    ShatteredTree tree;
    tree.depth = depth;
    tree.nodes.resize((std::size_t{1} << depth) - 1);
    build(members, depth, 0, tree);
    return tree;
}

int littlestone_dim(const VersionSpace& v) {
    DimensionSolver solver(v.concept_class());
    return solver.littlestone(v);
}

int littlestone_dim(const ConceptClass& c) { return littlestone_dim(VersionSpace(c)); }

std::optional<ShatteredTree> shattered_tree(const VersionSpace& v, int depth) {
    DimensionSolver solver(v.concept_class());
    auto tree = solver.shattered_tree(v.members(), depth);
    if (tree && !tree->is_shattered_by(v)) throw InternalError("constructed tree fails its own validator");
    return tree;
}

int sequential_graph_dim(const ConceptClass& c) {
    if (c.num_hypotheses() == 0) return -1;
    const ConceptClass losses = loss_class(c);
    DimensionSolver solver(losses);
    return solver.littlestone();
}

// ---------------------------------------------------------------------------
// Brute-force oracle

namespace {

class TreeSearch {
public:
    TreeSearch(const ConceptClass& c, std::vector<HypothesisIndex> rows) : c_(c), rows_(std::move(rows)) {}

    bool exists(int depth) {
        depth_ = depth;
        if (depth == 0) return !rows_.empty();
        nodes_.assign((std::size_t{1} << depth) - 1, {});
        return place(0);
    }

private:
    // Edge constraints from the root down to (but excluding) node `index`.
    std::vector<Example> path_to(std::size_t index) const {
        std::vector<Example> path;
        while (index > 0) {
            const std::size_t parent = (index - 1) / 2;
            const auto& n = nodes_[parent];
            path.push_back({n.point, index == 2 * parent + 1 ? n.label0 : n.label1});
            index = parent;
        }
        return path;
    }

    bool consistent(HypothesisIndex h, const std::vector<Example>& path) const {
        return std::all_of(path.begin(), path.end(), [&](const Example& e) { return c_(h, e.point) == e.label; });
    }

    bool some_row_realizes(const std::vector<Example>& path) const {
        return std::any_of(rows_.begin(), rows_.end(), [&](HypothesisIndex h) { return consistent(h, path); });
    }

    bool all_leaves_realizable() const {
        const std::size_t first_leaf = nodes_.size();
        for (std::size_t leaf = first_leaf; leaf < 2 * first_leaf + 1; ++leaf) {
            if (!some_row_realizes(path_to(leaf))) return false;
        }
        return true;
    }

    // Assign nodes in heap order; an edge is admissible only if the path it
    // extends stays realizable.
    bool place(std::size_t index) {
        if (index == nodes_.size()) return all_leaves_realizable();
        auto path = path_to(index);
        for (Point x = 0; x < c_.num_points(); ++x) {
            for (Label y0 = 0; y0 < c_.num_labels(); ++y0) {
                path.push_back({x, y0});
                const bool ok0 = some_row_realizes(path);
                path.pop_back();
                if (!ok0) continue;
                for (Label y1 = y0 + 1; y1 < c_.num_labels(); ++y1) {
                    path.push_back({x, y1});
                    const bool ok1 = some_row_realizes(path);
                    path.pop_back();
                    if (!ok1) continue;
                    nodes_[index] = {x, y0, y1};
                    if (place(index + 1)) return true;
                }
            }
        }
        return false;
    }

    const ConceptClass& c_;
    std::vector<HypothesisIndex> rows_;
    std::vector<ShatteredTree::Node> nodes_;
    int depth_ = 0;
};

}  // namespace

int littlestone_dim_bruteforce(const VersionSpace& v, int dmax) {
    const auto& c = v.concept_class();
    if (c.num_points() > 4 || v.size() > 20) {
        throw ResourceError("brute-force Littlestone oracle is limited to |X| <= 4 and |H| <= 20");
    }
    TreeSearch search(c, v.members().members());
    int best = -1;
    for (int n = 0; n <= dmax; ++n) {
        if (!search.exists(n)) break;
        best = n;
    }
    return best;
}

}  // namespace llab

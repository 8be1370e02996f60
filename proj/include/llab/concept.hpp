#pragma once

// Finite tabular concept classes and the objects built on them: version
// spaces, labeled sequences and randomized predictions.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace llab {

using Point = std::uint32_t;
using Label = std::uint32_t;
using HypothesisIndex = std::uint32_t;

inline constexpr Label kDefaultLabel = 0;

// Resource cap on table cells shared by all generators and exponential
// searches. Default 2^20; the LLAB_CAP_CELLS environment variable overrides it.
std::uint64_t cap_cells();
void set_cap_cells(std::uint64_t cells);  // 0 restores the environment/default value

// Fixed-size set of hypothesis indices backed by 64-bit words.
class HypothesisSet {
public:
    HypothesisSet() = default;
    explicit HypothesisSet(std::size_t universe, bool full = false);

    std::size_t universe() const { return universe_; }
    bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }
    void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

    std::size_t count() const;
    bool empty() const;
    bool is_subset_of(const HypothesisSet& other) const;
    // Lowest member index, or universe() when empty.
    std::size_t first() const;
    std::vector<HypothesisIndex> members() const;

    HypothesisSet& operator&=(const HypothesisSet& other);
    friend HypothesisSet operator&(HypothesisSet a, const HypothesisSet& b) { return a &= b; }
    friend bool operator==(const HypothesisSet&, const HypothesisSet&) = default;

    std::span<const std::uint64_t> words() const { return words_; }
    std::size_t hash() const;

private:
    std::size_t universe_ = 0;
    std::vector<std::uint64_t> words_;
};

// A finite concept class: one row per hypothesis, one column per point,
// entries are label indices. Immutable after construction; duplicate rows are
// dropped (first occurrence kept).
class ConceptClass {
public:
    ConceptClass(std::vector<std::string> point_names, std::vector<std::string> label_names,
                 std::vector<std::vector<Label>> table);

    std::size_t num_points() const { return point_names_.size(); }
    std::size_t num_labels() const { return label_names_.size(); }
    std::size_t num_hypotheses() const { return table_.size(); }

    const std::vector<std::string>& point_names() const { return point_names_; }
    const std::vector<std::string>& label_names() const { return label_names_; }
    const std::vector<std::vector<Label>>& table() const { return table_; }
    const std::vector<Label>& row(HypothesisIndex h) const { return table_[h]; }
    Label operator()(HypothesisIndex h, Point x) const { return table_[h][x]; }

    // Hypotheses with h(x) = y. Empty set when y is realized by no row at x.
    const HypothesisSet& agreeing(Point x, Label y) const;
    // Labels realized at x with their agreeing sets, ascending label order.
    const std::vector<std::pair<Label, HypothesisSet>>& realized(Point x) const { return realized_[x]; }

    HypothesisSet all() const { return HypothesisSet(num_hypotheses(), true); }

    void check_point(Point x) const;
    void check_label(Label y) const;

    friend bool operator==(const ConceptClass& a, const ConceptClass& b) {
        return a.point_names_ == b.point_names_ && a.label_names_ == b.label_names_ &&
               a.table_ == b.table_;
    }

private:
    std::vector<std::string> point_names_;
    std::vector<std::string> label_names_;
    std::vector<std::vector<Label>> table_;
    std::vector<std::vector<std::pair<Label, HypothesisSet>>> realized_;
    HypothesisSet none_;
};

// Subset of a class's hypotheses. The owning class must outlive the value.
class VersionSpace {
public:
    explicit VersionSpace(const ConceptClass& cls) : cls_(&cls), members_(cls.all()) {}
    VersionSpace(const ConceptClass& cls, HypothesisSet members);

    const ConceptClass& concept_class() const { return *cls_; }
    const HypothesisSet& members() const { return members_; }
    std::size_t size() const { return members_.count(); }
    bool empty() const { return members_.empty(); }

    friend bool operator==(const VersionSpace& a, const VersionSpace& b) {
        return a.cls_ == b.cls_ && a.members_ == b.members_;
    }

private:
    const ConceptClass* cls_;
    HypothesisSet members_;
};

struct Example {
    Point point;
    Label label;
    friend bool operator==(const Example&, const Example&) = default;
};

// Ordered online data stream. Labels need not be realizable.
struct LabeledSequence {
    std::vector<Example> entries;

    std::size_t size() const { return entries.size(); }
    bool empty() const { return entries.empty(); }
    const Example& operator[](std::size_t t) const { return entries[t]; }
    void push_back(Example e) { entries.push_back(e); }
    // Throws MalformedInput when an index is out of range for cls.
    void validate(const ConceptClass& cls) const;
    LabeledSequence subsequence(std::span<const std::size_t> rounds) const;
    LabeledSequence prefix(std::size_t length) const;

    friend bool operator==(const LabeledSequence&, const LabeledSequence&) = default;
};

// Probability mass over labels (sparse).
class PredictionDistribution {
public:
    PredictionDistribution() = default;
    static PredictionDistribution point_mass(Label y);

    void add(Label y, double mass);
    double mass(Label y) const;
    double total() const;
    const std::map<Label, double>& support() const { return mass_; }
    // Lowest-index label carrying the least mass among labels [0, num_labels).
    Label least_likely(std::size_t num_labels) const;
    // Throws InternalError unless masses are non-negative and sum to 1 within 1e-9.
    void check() const;

private:
    std::map<Label, double> mass_;
};

// { h in v : h(x) = y }.
VersionSpace restrict(const VersionSpace& v, Point x, Label y);
VersionSpace restrict(const VersionSpace& v, const LabeledSequence& s);
bool is_realizable(const VersionSpace& v, const LabeledSequence& s);
bool is_realizable(const ConceptClass& c, const LabeledSequence& s);

// Hypotheses h_A for every A subset of m points: h_A(x) = A if x in A else *.
// Label 0 is *, label 1 + mask is the set with that bitmask; row index = mask.
ConceptClass example1_class(unsigned m);

// Uniform random table, de-duplicated. Deterministic in the seed.
ConceptClass random_class(std::uint64_t seed, std::size_t nx, std::size_t ny, std::size_t nh);

// Binary class over X x Y with value 1[h(x) != y] at point (x, y).
// Point (x, y) has index x * |Y| + y.
ConceptClass loss_class(const ConceptClass& c);

// Same domain and labels, only the given rows (in the given order).
ConceptClass subclass(const ConceptClass& c, std::span<const HypothesisIndex> rows);

}  // namespace llab

template <>
struct std::hash<llab::HypothesisSet> {
    std::size_t operator()(const llab::HypothesisSet& s) const noexcept { return s.hash(); }
};

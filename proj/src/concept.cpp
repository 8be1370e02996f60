#include "llab/concept.hpp"

#include "llab/errors.hpp"
#include "llab/random.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <set>

namespace llab {

namespace {

constexpr std::uint64_t kDefaultCapCells = std::uint64_t{1} << 20;
std::atomic<std::uint64_t> g_cap_override{0};

std::uint64_t cap_from_env() {
    if (const char* env = std::getenv("LLAB_CAP_CELLS"); env != nullptr && *env != '\0') {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != nullptr && *end == '\0' && v > 0) return v;
        throw MalformedInput("LLAB_CAP_CELLS must be a positive integer, got '" + std::string(env) + "'");
    }
    return kDefaultCapCells;
}

void require_cells(std::uint64_t cells, const std::string& what) {
    if (cells > cap_cells()) {
        throw ResourceError(what + " needs " + std::to_string(cells) + " table cells, cap is " +
                            std::to_string(cap_cells()));
    }
}

}  // namespace

std::uint64_t cap_cells() {
    const std::uint64_t v = g_cap_override.load();
    return v != 0 ? v : cap_from_env();
}

void set_cap_cells(std::uint64_t cells) { g_cap_override.store(cells); }

// ---------------------------------------------------------------------------
// HypothesisSet

HypothesisSet::HypothesisSet(std::size_t universe, bool full)
    : universe_(universe), words_((universe + 63) / 64, full ? ~std::uint64_t{0} : 0) {
    if (full && (universe & 63) != 0) words_.back() = (std::uint64_t{1} << (universe & 63)) - 1;
}

std::size_t HypothesisSet::count() const {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
}

bool HypothesisSet::empty() const {
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

bool HypothesisSet::is_subset_of(const HypothesisSet& other) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
        if ((words_[i] & ~other.words_[i]) != 0) return false;
    }
    return true;
}

std::size_t HypothesisSet::first() const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
        if (words_[i] != 0) return i * 64 + static_cast<std::size_t>(std::countr_zero(words_[i]));
    }
    return universe_;
}

std::vector<HypothesisIndex> HypothesisSet::members() const {
    std::vector<HypothesisIndex> out;
    for (std::size_t i = 0; i < words_.size(); ++i) {
        std::uint64_t w = words_[i];
        while (w != 0) {
            out.push_back(static_cast<HypothesisIndex>(i * 64 + std::countr_zero(w)));
            w &= w - 1;
        }
    }
    return out;
}

HypothesisSet& HypothesisSet::operator&=(const HypothesisSet& other) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
    return *this;
}

std::size_t HypothesisSet::hash() const {
    std::uint64_t h = CounterRng::mix(universe_);
    for (auto w : words_) h = CounterRng::mix(h ^ w);
    return static_cast<std::size_t>(h);
}

// ---------------------------------------------------------------------------
// ConceptClass

ConceptClass::ConceptClass(std::vector<std::string> point_names, std::vector<std::string> label_names,
                           std::vector<std::vector<Label>> table)
    : point_names_(std::move(point_names)), label_names_(std::move(label_names)) {
    if (point_names_.empty()) throw MalformedInput("concept class needs at least one point");
    if (label_names_.empty()) throw MalformedInput("concept class needs at least one label");

    std::set<std::vector<Label>> seen;
    for (std::size_t r = 0; r < table.size(); ++r) {
        auto& row = table[r];
        if (row.size() != point_names_.size()) {
            throw MalformedInput("hypothesis " + std::to_string(r) + " has " + std::to_string(row.size()) +
                                 " entries, expected " + std::to_string(point_names_.size()));
        }
        for (Label y : row) {
            if (y >= label_names_.size()) {
                throw MalformedInput("hypothesis " + std::to_string(r) + " uses label index " +
                                     std::to_string(y) + " outside the alphabet");
            }
        }
        if (seen.insert(row).second) table_.push_back(std::move(row));
    }

    none_ = HypothesisSet(table_.size());
    realized_.resize(point_names_.size());
    for (Point x = 0; x < point_names_.size(); ++x) {
        std::map<Label, HypothesisSet> by_label;
        for (HypothesisIndex h = 0; h < table_.size(); ++h) {
            auto [it, inserted] = by_label.try_emplace(table_[h][x], table_.size());
            it->second.set(h);
        }
        realized_[x].assign(by_label.begin(), by_label.end());
    }
}

const HypothesisSet& ConceptClass::agreeing(Point x, Label y) const {
    const auto& r = realized_[x];
    auto it = std::lower_bound(r.begin(), r.end(), y, [](const auto& p, Label l) { return p.first < l; });
    return (it != r.end() && it->first == y) ? it->second : none_;
}

void ConceptClass::check_point(Point x) const {
    if (x >= num_points()) {
        throw MalformedInput("point index " + std::to_string(x) + " out of range (|X| = " +
                             std::to_string(num_points()) + ")");
    }
}

void ConceptClass::check_label(Label y) const {
    if (y >= num_labels()) {
        throw MalformedInput("label index " + std::to_string(y) + " out of range (|Y| = " +
                             std::to_string(num_labels()) + ")");
    }
}

// ---------------------------------------------------------------------------
// VersionSpace, sequences, distributions

VersionSpace::VersionSpace(const ConceptClass& cls, HypothesisSet members)
    : cls_(&cls), members_(std::move(members)) {
    if (members_.universe() != cls.num_hypotheses()) {
        throw MalformedInput("version space universe does not match its class");
    }
}

void LabeledSequence::validate(const ConceptClass& cls) const {
    for (const auto& e : entries) {
        cls.check_point(e.point);
        cls.check_label(e.label);
    }
}

LabeledSequence LabeledSequence::subsequence(std::span<const std::size_t> rounds) const {
    LabeledSequence out;
    out.entries.reserve(rounds.size());
    for (auto t : rounds) {
        if (t >= entries.size()) throw MalformedInput("round index " + std::to_string(t) + " out of range");
        out.entries.push_back(entries[t]);
    }
    return out;
}

LabeledSequence LabeledSequence::prefix(std::size_t length) const {
    LabeledSequence out;
    out.entries.assign(entries.begin(), entries.begin() + static_cast<std::ptrdiff_t>(std::min(length, size())));
    return out;
}

PredictionDistribution PredictionDistribution::point_mass(Label y) {
    PredictionDistribution p;
    p.add(y, 1.0);
    return p;
}

void PredictionDistribution::add(Label y, double mass) {
    if (mass < 0.0) throw InternalError("negative probability mass");
    if (mass > 0.0) mass_[y] += mass;
}

double PredictionDistribution::mass(Label y) const {
    auto it = mass_.find(y);
    return it == mass_.end() ? 0.0 : it->second;
}

double PredictionDistribution::total() const {
    double s = 0.0;
    for (const auto& [y, m] : mass_) s += m;
    return s;
}

Label PredictionDistribution::least_likely(std::size_t num_labels) const {
    Label best = 0;
    double best_mass = mass(0);
    for (Label y = 1; y < num_labels; ++y) {
        const double m = mass(y);
        if (m < best_mass) {
            best = y;
            best_mass = m;
        }
    }
    return best;
}

void PredictionDistribution::check() const {
    for (const auto& [y, m] : mass_) {
        if (!(m >= 0.0)) throw InternalError("prediction has negative mass");
    }
    if (std::abs(total() - 1.0) > 1e-9) throw InternalError("prediction masses do not sum to 1");
}

// ---------------------------------------------------------------------------
// Operations

VersionSpace restrict(const VersionSpace& v, Point x, Label y) {
    const auto& c = v.concept_class();
    c.check_point(x);
    c.check_label(y);
    return VersionSpace(c, v.members() & c.agreeing(x, y));
}

VersionSpace restrict(const VersionSpace& v, const LabeledSequence& s) {
    s.validate(v.concept_class());
    HypothesisSet m = v.members();
    for (const auto& e : s.entries) {
        m &= v.concept_class().agreeing(e.point, e.label);
        if (m.empty()) break;
    }
    return VersionSpace(v.concept_class(), std::move(m));
}

bool is_realizable(const VersionSpace& v, const LabeledSequence& s) { return !restrict(v, s).empty(); }

bool is_realizable(const ConceptClass& c, const LabeledSequence& s) { return is_realizable(VersionSpace(c), s); }

ConceptClass example1_class(unsigned m) {
    if (m == 0) throw MalformedInput("example1_class needs m >= 1");
    if (m > 24) throw ResourceError("example1_class(" + std::to_string(m) + ") is beyond any cell cap");
    const std::uint64_t subsets = std::uint64_t{1} << m;
    require_cells(subsets * m, "example1_class(" + std::to_string(m) + ")");
    // Label alphabet also has 2^m + 1 entries.
    require_cells(subsets + 1, "example1_class(" + std::to_string(m) + ") label alphabet");

    std::vector<std::string> points;
    for (unsigned i = 0; i < m; ++i) points.push_back("x" + std::to_string(i + 1));

    std::vector<std::string> labels{"*"};
    for (std::uint64_t mask = 0; mask < subsets; ++mask) {
        std::string name = "{";
        for (unsigned i = 0; i < m; ++i) {
            if ((mask >> i) & 1U) {
                if (name.size() > 1) name += ",";
                name += points[i];
            }
        }
        labels.push_back(name + "}");
    }

    std::vector<std::vector<Label>> table(subsets, std::vector<Label>(m, 0));
    for (std::uint64_t mask = 0; mask < subsets; ++mask) {
        for (unsigned i = 0; i < m; ++i) {
            if ((mask >> i) & 1U) table[mask][i] = static_cast<Label>(1 + mask);
        }
    }
    return ConceptClass(std::move(points), std::move(labels), std::move(table));
}

ConceptClass random_class(std::uint64_t seed, std::size_t nx, std::size_t ny, std::size_t nh) {
    if (nx == 0 || ny == 0 || nh == 0) throw MalformedInput("random_class needs nx, ny, nh >= 1");
    require_cells(static_cast<std::uint64_t>(nx) * nh, "random_class");
    CounterRng rng(seed);
    std::vector<std::string> points, labels;
    for (std::size_t i = 0; i < nx; ++i) points.push_back("x" + std::to_string(i));
    for (std::size_t i = 0; i < ny; ++i) labels.push_back("y" + std::to_string(i));
    std::vector<std::vector<Label>> table(nh, std::vector<Label>(nx));
    for (auto& row : table) {
        for (auto& cell : row) cell = static_cast<Label>(rng.below(ny));
    }
    return ConceptClass(std::move(points), std::move(labels), std::move(table));
}

ConceptClass loss_class(const ConceptClass& c) {
    const std::size_t nx = c.num_points();
    const std::size_t ny = c.num_labels();
    require_cells(static_cast<std::uint64_t>(nx) * ny * std::max<std::size_t>(c.num_hypotheses(), 1),
                  "loss_class");
    std::vector<std::string> points;
    points.reserve(nx * ny);
    for (Point x = 0; x < nx; ++x) {
        for (Label y = 0; y < ny; ++y) points.push_back(c.point_names()[x] + "|" + c.label_names()[y]);
    }
    std::vector<std::vector<Label>> table;
    table.reserve(c.num_hypotheses());
    for (const auto& row : c.table()) {
        std::vector<Label> lrow(nx * ny);
        for (Point x = 0; x < nx; ++x) {
            for (Label y = 0; y < ny; ++y) lrow[x * ny + y] = row[x] != y ? 1 : 0;
        }
        table.push_back(std::move(lrow));
    }
    return ConceptClass(std::move(points), {"0", "1"}, std::move(table));
}

ConceptClass subclass(const ConceptClass& c, std::span<const HypothesisIndex> rows) {
    std::vector<std::vector<Label>> table;
    for (auto h : rows) {
        if (h >= c.num_hypotheses()) throw MalformedInput("hypothesis index out of range");
        table.push_back(c.row(h));
    }
    return ConceptClass(c.point_names(), c.label_names(), std::move(table));
}

}  // namespace llab

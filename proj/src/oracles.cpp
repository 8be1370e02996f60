#include "llab/oracles.hpp"

#include "llab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace llab {

std::vector<std::uint64_t> hypothesis_mistakes(const ConceptClass& c, const LabeledSequence& s) {
    s.validate(c);
    std::vector<std::uint64_t> mistakes(c.num_hypotheses(), 0);
    for (HypothesisIndex h = 0; h < c.num_hypotheses(); ++h) {
        for (const auto& e : s.entries) mistakes[h] += c(h, e.point) != e.label ? 1 : 0;
    }
    return mistakes;
}

OptResult opt_mistakes(const ConceptClass& c, const LabeledSequence& s) {
    if (c.num_hypotheses() == 0) throw PreconditionError("OPT is undefined for an empty class");
    const auto mistakes = hypothesis_mistakes(c, s);
    const auto best = std::min_element(mistakes.begin(), mistakes.end());
    return {static_cast<HypothesisIndex>(best - mistakes.begin()), *best};
}

std::vector<std::uint64_t> opt_prefix(const ConceptClass& c, const LabeledSequence& s) {
    if (c.num_hypotheses() == 0) throw PreconditionError("OPT is undefined for an empty class");
    s.validate(c);
    std::vector<std::uint64_t> running(c.num_hypotheses(), 0);
    std::vector<std::uint64_t> out;
    out.reserve(s.size());
    for (const auto& e : s.entries) {
        for (HypothesisIndex h = 0; h < c.num_hypotheses(); ++h) running[h] += c(h, e.point) != e.label ? 1 : 0;
        out.push_back(*std::min_element(running.begin(), running.end()));
    }
    return out;
}

double sequential_rademacher(const ConceptClass& c, std::size_t horizon) {
    if (horizon == 0) throw MalformedInput("sequential Rademacher complexity needs T >= 1");
    if (c.num_hypotheses() == 0) throw PreconditionError("sequential Rademacher complexity of an empty class");
    if (horizon > 5) throw ResourceError("sequential Rademacher enumeration is limited to T <= 5");

    const std::size_t pairs = c.num_points() * c.num_labels();
    const std::size_t num_nodes = (std::size_t{1} << horizon) - 1;
    // Number of complete trees: pairs^num_nodes, checked against the cap.
    double trees = std::pow(static_cast<double>(pairs), static_cast<double>(num_nodes));
    if (trees > static_cast<double>(cap_cells())) {
        throw ResourceError("sequential Rademacher enumeration needs " + std::to_string(pairs) + "^" +
                            std::to_string(num_nodes) + " trees, cap is " + std::to_string(cap_cells()));
    }

    // Each (x, y) acts only through its loss column over the hypotheses, so
    // pairs with identical columns are interchangeable.
    std::set<std::vector<int>> distinct;
    for (Point x = 0; x < c.num_points(); ++x) {
        for (Label y = 0; y < c.num_labels(); ++y) {
            std::vector<int> col(c.num_hypotheses());
            for (HypothesisIndex h = 0; h < c.num_hypotheses(); ++h) col[h] = c(h, x) != y ? 1 : 0;
            distinct.insert(std::move(col));
        }
    }
    const std::vector<std::vector<int>> columns(distinct.begin(), distinct.end());
    const std::size_t H = c.num_hypotheses();
    const std::size_t paths = std::size_t{1} << horizon;

    std::vector<std::size_t> tree(num_nodes, 0);
    std::vector<long> sums(H);
    long best = std::numeric_limits<long>::min();
    while (true) {
        long total = 0;
        for (std::size_t eps = 0; eps < paths; ++eps) {
            std::fill(sums.begin(), sums.end(), 0);
            std::size_t node = 0;
            for (std::size_t t = 0; t < horizon; ++t) {
                const unsigned bit = (eps >> (horizon - 1 - t)) & 1U;
                const int sign = bit != 0 ? 1 : -1;
                const auto& col = columns[tree[node]];
                for (std::size_t h = 0; h < H; ++h) sums[h] += sign * col[h];
                node = 2 * node + 1 + bit;
            }
            total += *std::max_element(sums.begin(), sums.end());
        }
        best = std::max(best, total);

        std::size_t pos = 0;
        while (pos < num_nodes && tree[pos] + 1 == columns.size()) tree[pos++] = 0;
        if (pos == num_nodes) break;
        ++tree[pos];
    }
    return static_cast<double>(best) / (static_cast<double>(horizon) * static_cast<double>(paths));
}

double aulln_error(const ConceptClass& c, std::span<const std::size_t> sample, const LabeledSequence& s) {
    if (sample.empty()) throw MalformedInput("epsilon-approximation sample must be non-empty");
    if (c.num_hypotheses() == 0) throw PreconditionError("epsilon-approximation error of an empty class");
    s.validate(c);
    for (auto k : sample) {
        if (k >= s.size()) throw MalformedInput("sample index " + std::to_string(k) + " outside the sequence");
    }
    double worst = 0.0;
    for (HypothesisIndex h = 0; h < c.num_hypotheses(); ++h) {
        std::uint64_t on_sample = 0, on_all = 0;
        for (auto k : sample) on_sample += c(h, s[k].point) != s[k].label ? 1 : 0;
        for (const auto& e : s.entries) on_all += c(h, e.point) != e.label ? 1 : 0;
        const double gap = static_cast<double>(on_sample) / static_cast<double>(sample.size()) -
                           static_cast<double>(on_all) / static_cast<double>(s.size());
        worst = std::max(worst, std::abs(gap));
    }
    return worst;
}

}  // namespace llab

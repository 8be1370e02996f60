#pragma once

// Test-side oracles written straight from the definitions, sharing no code
// with the library's solvers.

#include "llab/concept.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

namespace testing {

inline llab::ConceptClass full_binary_class(std::size_t n) {
    std::vector<std::string> points;
    for (std::size_t i = 0; i < n; ++i) points.push_back("p" + std::to_string(i));
    std::vector<std::vector<llab::Label>> table;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        std::vector<llab::Label> row(n);
        for (std::size_t i = 0; i < n; ++i) row[i] = (mask >> i) & 1U;
        table.push_back(row);
    }
    return llab::ConceptClass(points, {"0", "1"}, table);
}

inline std::vector<llab::HypothesisIndex> all_rows(const llab::ConceptClass& c) {
    std::vector<llab::HypothesisIndex> rows(c.num_hypotheses());
    std::iota(rows.begin(), rows.end(), 0);
    return rows;
}

inline std::vector<llab::HypothesisIndex> keep(const llab::ConceptClass& c, const std::vector<llab::HypothesisIndex>& rows,
                                               llab::Point x, llab::Label y) {
    std::vector<llab::HypothesisIndex> out;
    for (auto h : rows) {
        if (c(h, x) == y) out.push_back(h);
    }
    return out;
}

// Is there a depth-d tree shattered by `rows`? A depth-0 tree needs one row.
inline bool shatters(const llab::ConceptClass& c, const std::vector<llab::HypothesisIndex>& rows, int d) {
    if (rows.empty()) return false;
    if (d == 0) return true;
    for (llab::Point x = 0; x < c.num_points(); ++x) {
        for (llab::Label y0 = 0; y0 < c.num_labels(); ++y0) {
            const auto left = keep(c, rows, x, y0);
            if (left.empty() || !shatters(c, left, d - 1)) continue;
            for (llab::Label y1 = 0; y1 < c.num_labels(); ++y1) {
                if (y1 == y0) continue;
                if (shatters(c, keep(c, rows, x, y1), d - 1)) return true;
            }
        }
    }
    return false;
}

// Largest shattered depth; -1 for no rows.
inline int naive_littlestone(const llab::ConceptClass& c, const std::vector<llab::HypothesisIndex>& rows) {
    int d = -1;
    while (shatters(c, rows, d + 1)) ++d;
    return d;
}

inline int naive_littlestone(const llab::ConceptClass& c) { return naive_littlestone(c, all_rows(c)); }

// Sequential Rademacher value by the minimax recursion: at each depth the
// tree picks the (x, y) maximizing the average continuation over both signs.
// Returns the sum over all 2^remaining sign paths, so everything stays integral.
inline long rademacher_recursion(const llab::ConceptClass& c, std::size_t remaining, std::vector<long>& sums) {
    if (remaining == 0) return *std::max_element(sums.begin(), sums.end());
    long best = std::numeric_limits<long>::min();
    for (llab::Point x = 0; x < c.num_points(); ++x) {
        for (llab::Label y = 0; y < c.num_labels(); ++y) {
            long total = 0;
            for (int sign : {-1, 1}) {
                for (llab::HypothesisIndex h = 0; h < c.num_hypotheses(); ++h) sums[h] += sign * (c(h, x) != y ? 1 : 0);
                total += rademacher_recursion(c, remaining - 1, sums);
                for (llab::HypothesisIndex h = 0; h < c.num_hypotheses(); ++h) sums[h] -= sign * (c(h, x) != y ? 1 : 0);
            }
            best = std::max(best, total);
        }
    }
    return best;
}

inline double rademacher_oracle(const llab::ConceptClass& c, std::size_t horizon) {
    std::vector<long> sums(c.num_hypotheses(), 0);
    const long scaled = rademacher_recursion(c, horizon, sums);
    return static_cast<double>(scaled) / (static_cast<double>(horizon) * static_cast<double>(1UL << horizon));
}

}  // namespace testing

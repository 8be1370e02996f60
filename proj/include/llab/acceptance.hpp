#pragma once

// The acceptance suite: exact finite checks of every dimension, mistake and
// regret guarantee the library implements. Shared by `llab verify` and the
// acceptance test binary.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace llab {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool ok = false;         // every check in the criterion held
    double seconds = 0.0;    // wall time, kept out of the report text
    double time_limit = 0.0;
    std::string detail;

    bool within_time() const { return seconds < time_limit; }
    bool passed() const { return ok && within_time(); }
};

struct AcceptanceReport {
    std::uint64_t seed = 0;
    std::vector<CriterionResult> criteria;

    bool passed() const;
    // Deterministic text (no timings): one line per criterion plus a summary.
    std::string text() const;
};

inline constexpr std::uint64_t kDefaultAcceptanceSeed = 20230710;

// Runs criteria 1-9. Timings are written to `timings` when non-null.
AcceptanceReport run_acceptance(std::uint64_t seed, std::ostream* timings = nullptr);

}  // namespace llab

#pragma once

#include <string>

#include "qchab/decomposition.hpp"

namespace qchab::crit {

// Mordell-Weil rank information supplied by the caller: exact, an inclusive
// interval, or unknown.  Ranks are never computed here.
struct RankInput {
    enum class Kind { Exact, Interval, Unknown };
    Kind kind = Kind::Unknown;
    long lo = 0, hi = 0;  // Exact: lo == hi == r; Interval: lo <= hi

    static RankInput exact(long r) {
        QCHAB_CHECK(r >= 0, "rank must be nonnegative");
        return RankInput{Kind::Exact, r, r};
    }
    static RankInput interval(long lo, long hi) {
        QCHAB_CHECK(0 <= lo && lo <= hi, "rank interval requires 0 <= lo <= hi");
        return RankInput{Kind::Interval, lo, hi};
    }
    static RankInput unknown() { return RankInput{}; }

    bool operator==(const RankInput&) const = default;
};

enum class Verdict { Holds, Fails, Unknown };

const char* to_string(Verdict v);

// Lower bound for the rank of the Neron-Severi group of the Jacobian, from
// the Rosati-invariant part of its endomorphism algebra: each totally real
// factor contributes its full degree, each CM factor the degree of its
// maximal totally real subfield (half), both counted with multiplicity.
long ns_rank_lower_bound(const decomp::Decomposition& d);

struct Bounds {
    long genus = 0;
    long ns_lower_bound = 0;
    long classical_bound = 0;   // B1 = g:      rank < B1 is the classical condition
    long quadratic_bound = 0;   // B2 = g-1+rNS: rank < B2 is the quadratic condition
};

// Computes both bounds.  B2 is evaluated in two algebraically equal forms
// (via the NS bound, and directly as -1 + 2*sum of real degrees + 3/2*sum of
// CM degrees, with multiplicity); their exact agreement is asserted.
Bounds bounds(const decomp::Decomposition& d);

struct CriterionReport {
    decomp::Decomposition decomposition;
    long genus = 0;
    long ns_lower_bound = 0;
    long classical_bound = 0;
    long quadratic_bound = 0;
    RankInput rank;
    Verdict classical_verdict = Verdict::Unknown;
    Verdict quadratic_verdict = Verdict::Unknown;
    std::string conclusion_scope;
    std::string sharpness_note;
};

// Three-valued evaluation of both conditions against the rank input: with an
// exact rank r, a condition with bound B holds iff r < B; with an interval,
// Holds if hi < B, Fails if lo >= B, Unknown otherwise; unknown rank gives
// Unknown.  A quadratic Holds asserts finiteness of the quadratic Chabauty
// set for every prime of good reduction, recorded in conclusion_scope.
CriterionReport evaluate(const decomp::Decomposition& d, const RankInput& rank);

}  // namespace qchab::crit

#include "qchab/criterion.hpp"

namespace qchab::crit {

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Holds: return "Holds";
        case Verdict::Fails: return "Fails";
        case Verdict::Unknown: return "Unknown";
    }
    throw InternalError("unreachable verdict value");
}

long ns_rank_lower_bound(const decomp::Decomposition& d) {
    long r = 0;
    for (const decomp::IsogenyFactor& f : d.factors) {
        if (f.field_class.kind == poly::FieldClass::Kind::TotallyReal) {
            r += f.multiplicity * f.degree;
        } else {
            QCHAB_CHECK(f.degree % 2 == 0, "a CM field has even degree");
            r += f.multiplicity * (f.degree / 2);
        }
    }
    return r;
}

Bounds bounds(const decomp::Decomposition& d) {
    Bounds b;
    b.genus = d.genus;
    b.ns_lower_bound = ns_rank_lower_bound(d);
    b.classical_bound = b.genus;
    b.quadratic_bound = b.genus - 1 + b.ns_lower_bound;

    // Independent second form: B2 = -1 + 2*(sum of totally real degrees)
    //                               + (3/2)*(sum of CM degrees),
    // degrees counted with multiplicity, in exact arithmetic.
    Rat direct(-1);
    for (const decomp::IsogenyFactor& f : d.factors) {
        const Rat dm(f.degree * f.multiplicity);
        if (f.field_class.kind == poly::FieldClass::Kind::TotallyReal)
            direct += Rat(2) * dm;
        else
            direct += Rat(3, 2) * dm;
    }
    QCHAB_CHECK(direct.get_den() == 1, "quadratic bound must be an integer");
    QCHAB_CHECK(direct == Rat(b.quadratic_bound),
                "the two algebraic forms of the quadratic bound disagree");
    return b;
}

namespace {

Verdict verdict_for(const RankInput& rank, long bound) {
    switch (rank.kind) {
        case RankInput::Kind::Exact:
            return rank.lo < bound ? Verdict::Holds : Verdict::Fails;
        case RankInput::Kind::Interval:
            if (rank.hi < bound) return Verdict::Holds;
            if (rank.lo >= bound) return Verdict::Fails;
            return Verdict::Unknown;
        case RankInput::Kind::Unknown:
            return Verdict::Unknown;
    }
    throw InternalError("unreachable rank kind");
}

}  // namespace

CriterionReport evaluate(const decomp::Decomposition& d, const RankInput& rank) {
    const Bounds b = bounds(d);
    CriterionReport r;
    r.decomposition = d;
    r.genus = b.genus;
    r.ns_lower_bound = b.ns_lower_bound;
    r.classical_bound = b.classical_bound;
    r.quadratic_bound = b.quadratic_bound;
    r.rank = rank;
    r.classical_verdict = verdict_for(rank, b.classical_bound);
    r.quadratic_verdict = verdict_for(rank, b.quadratic_bound);
    r.conclusion_scope =
        "when the quadratic condition is satisfied, the quadratic Chabauty set X(Q_l)_2 "
        "is finite for any prime l of good reduction";
    bool all_mult_one = true;
    for (const decomp::IsogenyFactor& f : d.factors)
        if (f.multiplicity != 1) all_mult_one = false;
    r.sharpness_note =
        all_mult_one
            ? "the Neron-Severi rank bound is a lower bound; with every factor of "
              "multiplicity 1 it is an equality exactly when the factors are pairwise "
              "non-isogenous (not decided here)"
            : "the Neron-Severi rank bound is a lower bound only: repeated factors may "
              "increase the true rank further";
    return r;
}

}  // namespace qchab::crit

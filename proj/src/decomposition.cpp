#include "qchab/decomposition.hpp"

#include <algorithm>
#include <random>
#include <utility>

namespace qchab::decomp {

namespace {

using linalg::RationalMatrix;
using linalg::Subspace;
using poly::IntPolynomial;

// f(A) by Horner's rule.
RationalMatrix poly_eval_matrix(const IntPolynomial& f, const RationalMatrix& a) {
    const std::size_t n = a.rows();
    QCHAB_CHECK(a.cols() == n, "polynomial evaluation requires a square matrix");
    RationalMatrix r(n, n);
    if (f.is_zero()) return r;
    const auto& c = f.coeffs();
    for (std::size_t i = 0; i < n; ++i) r.at(i, i) = Rat(c.back());
    for (std::size_t k = c.size() - 1; k-- > 0;) {
        r = r * a;
        for (std::size_t i = 0; i < n; ++i) r.at(i, i) += Rat(c[k]);
    }
    return r;
}

IntPolynomial charpoly_int(const RationalMatrix& m) {
    return poly::from_rational_poly(linalg::charpoly(m));
}

std::vector<Rat> flatten(const RationalMatrix& m) {
    std::vector<Rat> v;
    v.reserve(m.rows() * m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) v.push_back(m.at(i, j));
    return v;
}

// Incremental row echelon over Q for membership testing and dimension
// counting (no canonical form needed here).
struct SpanAccumulator {
    std::vector<std::vector<Rat>> rows;  // each normalized to leading 1
    std::vector<std::size_t> lead;

    // Returns true if v enlarged the span.
    bool insert(std::vector<Rat> v) {
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const Rat& c = v[lead[r]];
            if (c != 0) {
                const Rat f = c;
                const auto& row = rows[r];
                for (std::size_t j = lead[r]; j < v.size(); ++j) v[j] -= f * row[j];
            }
        }
        std::size_t l = 0;
        while (l < v.size() && v[l] == 0) ++l;
        if (l == v.size()) return false;
        const Rat inv = v[l];
        for (std::size_t j = l; j < v.size(); ++j) v[j] /= inv;
        rows.push_back(std::move(v));
        lead.push_back(l);
        return true;
    }

    std::size_t dim() const { return rows.size(); }
};

// Subspace of the ambient space spanned by coordinate rows relative to w.
Subspace lift_coordinates(const Subspace& coords_space, const Subspace& w) {
    RationalMatrix spanning = coords_space.basis() * w.basis();
    Subspace lifted(spanning);
    QCHAB_CHECK(lifted.dim() == coords_space.dim(),
                "coordinate lift changed the dimension of a component");
    return lifted;
}

struct FinalizedComponent {
    Subspace w;
};

// Dimension of the (commutative) matrix algebra generated by gens, via span
// closure starting from the identity.
std::size_t algebra_dimension(const std::vector<RationalMatrix>& gens, std::size_t n) {
    SpanAccumulator span;
    std::vector<RationalMatrix> worklist;
    RationalMatrix id = RationalMatrix::identity(n);
    span.insert(flatten(id));
    worklist.push_back(std::move(id));
    while (!worklist.empty()) {
        RationalMatrix m = std::move(worklist.back());
        worklist.pop_back();
        for (const RationalMatrix& g : gens) {
            RationalMatrix p = m * g;
            if (span.insert(flatten(p))) worklist.push_back(std::move(p));
        }
    }
    return span.dim();
}

// Minimal polynomial of a semisimple rational matrix: the squarefree part of
// its characteristic polynomial.
IntPolynomial minimal_polynomial(const RationalMatrix& t) {
    return poly::squarefree_part(charpoly_int(t));
}

// Monic irreducible generator polynomial of the Hecke field on an isotypic
// component, found from the restricted generators in a deterministic order:
// each generator alone (ascending prime), then small seeded random integer
// combinations.  `d` is the dimension of the algebra they generate.
IntPolynomial find_field_polynomial(const std::vector<RationalMatrix>& gens, std::size_t d) {
    auto certify = [&](const RationalMatrix& t) -> std::optional<IntPolynomial> {
        IntPolynomial mp = minimal_polynomial(t);
        if (mp.degree() != static_cast<long>(d)) return std::nullopt;
        auto factors = poly::factor_over_rationals(mp);
        QCHAB_CHECK(factors.size() == 1 && factors[0].second == 1,
                    "Hecke algebra on an unsplit component is not a field: "
                    "distinct eigenvalue systems remained merged");
        QCHAB_CHECK(factors[0].first.leading() == 1,
                    "field polynomial of an eigenvalue field must be monic");
        return factors[0].first;
    };

    for (const RationalMatrix& g : gens)
        if (auto f = certify(g)) return *f;

    const std::size_t n = gens.front().rows();
    for (unsigned trial = 0; trial < 200; ++trial) {
        std::mt19937 rng(0x51a3u + trial);
        std::uniform_int_distribution<int> coeff(-3, 3);
        RationalMatrix t(n, n);
        bool nonzero = false;
        for (const RationalMatrix& g : gens) {
            const int c = coeff(rng);
            if (c == 0) continue;
            nonzero = true;
            t = t + g * Rat(c);
        }
        if (!nonzero) continue;
        if (auto f = certify(t)) return *f;
    }
    throw InternalError("no primitive element found for the Hecke field of a component");
}

}  // namespace

std::vector<IsotypicComponent> isotypic_decomposition(ms::Space& space) {
    std::vector<long> order;
    for (long p : ms::primes_up_to(ms::sturm_bound(space.level())))
        if (space.level() % p != 0) order.push_back(p);
    return isotypic_decomposition(space, order);
}

std::vector<IsotypicComponent> isotypic_decomposition(ms::Space& space,
                                                      const std::vector<long>& prime_order) {
    const long N = space.level();
    const Subspace& plus = space.plus_cuspidal();
    QCHAB_CHECK(plus.dim() > 0, "isotypic decomposition requires a nonzero star-fixed "
                                "cuspidal subspace");

    // The canonical separating set: ascending primes not dividing N up to the
    // determination bound.  prime_order must be a permutation of it.
    std::vector<long> good_primes;
    for (long p : ms::primes_up_to(ms::sturm_bound(N)))
        if (N % p != 0) good_primes.push_back(p);
    QCHAB_CHECK(!good_primes.empty(), "no separating primes available at this level");
    {
        std::vector<long> sorted = prime_order;
        std::sort(sorted.begin(), sorted.end());
        QCHAB_CHECK(sorted == good_primes,
                    "separating primes must be a permutation of the ascending good primes "
                    "up to the determination bound");
    }

    // Refinement: split along generalized eigenspaces of T_p.  A component
    // whose T_p-characteristic polynomial is irreducible is a single
    // eigenvalue system (the operator alone generates a field acting
    // irreducibly), so it is final; components are otherwise kept active
    // through the whole prime list so that the terminal ones are certified
    // unsplittable by every separating prime.
    std::vector<Subspace> active{plus};
    std::vector<FinalizedComponent> final_components;
    for (long p : prime_order) {
        if (active.empty()) break;
        std::vector<Subspace> next_active;
        for (const Subspace& w : active) {
            RationalMatrix a = space.hecke_on(w, p);
            auto factors = poly::factor_over_rationals(charpoly_int(a));
            if (factors.size() == 1) {
                if (factors[0].second == 1)
                    final_components.push_back({w});
                else
                    next_active.push_back(w);
                continue;
            }
            std::size_t split_total = 0;
            for (const auto& [f, e] : factors) {
                // T_p (p coprime to the level) acts semisimply, so the
                // generalized eigenspace is the plain kernel of f(T_p); the
                // dimension check verifies semisimplicity exactly.
                Subspace coords = linalg::kernel(poly_eval_matrix(f, a));
                QCHAB_CHECK(static_cast<long>(coords.dim()) == e * f.degree(),
                            "component dimension mismatch: semisimplicity violated");
                Subspace piece = lift_coordinates(coords, w);
                split_total += piece.dim();
                if (e == 1)
                    final_components.push_back({std::move(piece)});
                else
                    next_active.push_back(std::move(piece));
            }
            QCHAB_CHECK(split_total == w.dim(),
                        "eigenspace splitting failed to exhaust a component");
        }
        active = std::move(next_active);
    }

    // Components that survived every separating prime carry one eigenvalue
    // system with multiplicity; per-component certification below recovers the
    // field degree and multiplicity from the Hecke algebra itself.
    for (Subspace& w : active) final_components.push_back({std::move(w)});
    active.clear();

    std::vector<IsotypicComponent> components;
    std::size_t total_dim = 0;
    for (FinalizedComponent& fc : final_components) {
        Subspace w = std::move(fc.w);
        const std::size_t n = w.dim();
        total_dim += n;

        // Canonical field polynomial: the first ascending good prime whose
        // characteristic polynomial on the component is irreducible gives a
        // multiplicity-one certificate directly.  Failing all primes, the
        // component carries multiplicity, and the field is certified from the
        // algebra generated by every separating operator.
        std::optional<IntPolynomial> field_poly;
        long multiplicity = 1;
        std::vector<RationalMatrix> gens;
        gens.reserve(good_primes.size());
        for (long q : good_primes) {
            gens.push_back(space.hecke_on(w, q));
            auto factors = poly::factor_over_rationals(charpoly_int(gens.back()));
            if (factors.size() == 1 && factors[0].second == 1) {
                QCHAB_CHECK(factors[0].first.leading() == 1,
                            "field polynomial of an eigenvalue field must be monic");
                field_poly = factors[0].first;
                break;
            }
        }
        if (!field_poly) {
            const std::size_t d = algebra_dimension(gens, n);
            QCHAB_CHECK(d > 0 && n % d == 0,
                        "component dimension not divisible by its field degree: "
                        "semisimplicity violated");
            multiplicity = static_cast<long>(n / d);
            field_poly = find_field_polynomial(gens, d);
        }
        QCHAB_CHECK(static_cast<long>(n) == multiplicity * field_poly->degree(),
                    "component dimension must equal multiplicity times field degree");
        components.push_back(
            IsotypicComponent{std::move(w), std::move(*field_poly), multiplicity, {}});
    }
    QCHAB_CHECK(total_dim == plus.dim(),
                "isotypic components do not fill the star-fixed cuspidal subspace");

    // Deterministic order: (field degree, trace sequence over ascending good
    // primes, field polynomial, multiplicity).  Traces are extended lazily;
    // Tr(T_p | W) = multiplicity * Tr_{F/Q}(a_p) is always divisible by the
    // multiplicity, with integral quotient.
    auto ensure_trace = [&](IsotypicComponent& c, std::size_t k) {
        while (c.traces.size() <= k) {
            RationalMatrix t = space.hecke_on(c.space, good_primes[c.traces.size()]);
            Rat tr;
            for (std::size_t i = 0; i < t.rows(); ++i) tr += t.at(i, i);
            tr /= Rat(c.multiplicity);
            QCHAB_CHECK(tr.get_den() == 1, "eigenvalue field trace is not an integer");
            c.traces.push_back(tr.get_num());
        }
    };
    auto compare = [&](IsotypicComponent& x, IsotypicComponent& y) -> int {
        if (x.field_poly.degree() != y.field_poly.degree())
            return x.field_poly.degree() < y.field_poly.degree() ? -1 : 1;
        for (std::size_t k = 0; k < good_primes.size(); ++k) {
            ensure_trace(x, k);
            ensure_trace(y, k);
            const int c = cmp(x.traces[k], y.traces[k]);
            if (c != 0) return c;
        }
        if (x.field_poly != y.field_poly) return x.field_poly < y.field_poly ? -1 : 1;
        if (x.multiplicity != y.multiplicity) return x.multiplicity < y.multiplicity ? -1 : 1;
        const RationalMatrix& bx = x.space.basis();
        const RationalMatrix& by = y.space.basis();
        if (bx.rows() != by.rows()) return bx.rows() < by.rows() ? -1 : 1;
        for (std::size_t i = 0; i < bx.rows(); ++i)
            for (std::size_t j = 0; j < bx.cols(); ++j) {
                const int c = cmp(bx.at(i, j), by.at(i, j));
                if (c != 0) return c;
            }
        return 0;
    };
    std::vector<std::size_t> index(components.size());
    for (std::size_t i = 0; i < index.size(); ++i) index[i] = i;
    std::sort(index.begin(), index.end(), [&](std::size_t i, std::size_t j) {
        return compare(components[i], components[j]) < 0;
    });
    std::vector<IsotypicComponent> sorted;
    sorted.reserve(components.size());
    for (std::size_t i : index) sorted.push_back(std::move(components[i]));
    return sorted;
}

Decomposition jacobian_factors(ms::Space& space) {
    const long N = space.level();
    QCHAB_CHECK(space.genus() >= 1, "jacobian decomposition requires genus >= 1");
    std::vector<IsotypicComponent> components = isotypic_decomposition(space);

    Decomposition d;
    d.source = Decomposition::Source::Computed;
    d.level = N;
    d.label = "X0(" + std::to_string(N) + ")";
    d.genus = space.genus();
    for (std::size_t i = 0; i < components.size(); ++i) {
        IsotypicComponent& c = components[i];
        IsogenyFactor f;
        f.label = std::to_string(N) + "." + std::to_string(i + 1);
        f.degree = c.field_poly.degree();
        f.field_class = poly::classify_hecke_field(c.field_poly);
        f.multiplicity = c.multiplicity;
        f.field_poly = std::move(c.field_poly);
        d.factors.push_back(std::move(f));
    }
    validate(d, /*ingested=*/false);
    return d;
}

Decomposition jacobian_factors(long N) {
    ms::Space space(N);
    return jacobian_factors(space);
}

void validate(const Decomposition& d, bool ingested) {
    auto fail = [&](const std::string& msg) {
        if (ingested) throw SchemaError(msg);
        throw InternalError(msg);
    };
    if (d.label.empty()) fail("curve_label: must be nonempty");
    long genus_sum = 0;
    for (std::size_t i = 0; i < d.factors.size(); ++i) {
        const IsogenyFactor& f = d.factors[i];
        const std::string path = "factors[" + std::to_string(i) + "]";
        if (f.label.empty()) fail(path + ".label: must be nonempty");
        if (f.degree < 1) fail(path + ".degree: must be a positive integer");
        if (f.multiplicity < 1) fail(path + ".multiplicity: must be a positive integer");
        if (f.field_class.kind == poly::FieldClass::Kind::CM) {
            if (f.degree % 2 != 0) fail(path + ": a CM field has even degree");
            if (f.field_class.real_subfield_degree != f.degree / 2)
                fail(path + ": the real subfield of a CM field has half its degree");
        } else if (f.field_class.real_subfield_degree != 0) {
            fail(path + ": totally real class carries no real-subfield degree");
        }
        if (f.field_poly) {
            if (f.field_poly->degree() != f.degree)
                fail(path + ".min_poly: degree " + std::to_string(f.field_poly->degree()) +
                     " does not match the declared degree " + std::to_string(f.degree));
            auto factors = poly::factor_over_rationals(*f.field_poly);
            if (factors.size() != 1 || factors[0].second != 1)
                fail(path + ".min_poly: polynomial is not irreducible");
            poly::FieldClass cls;
            try {
                cls = poly::classify_hecke_field(*f.field_poly);
            } catch (const MixedSignatureError&) {
                fail(path + ".min_poly: field is neither totally real nor CM");
                throw;  // unreachable; fail always throws
            }
            if (cls.kind != f.field_class.kind)
                fail(path + ".min_poly: polynomial classification does not match the "
                            "declared class");
        } else if (!ingested) {
            fail(path + ".min_poly: mandatory for computed decompositions");
        }
        genus_sum += f.degree * f.multiplicity;
    }
    if (genus_sum != d.genus)
        fail("genus: declared " + std::to_string(d.genus) + " but the factors sum to " +
             std::to_string(genus_sum));
    if (!ingested && d.source == Decomposition::Source::Computed && d.level < 1)
        fail("level: computed decompositions require a positive level");
}

}  // namespace qchab::decomp

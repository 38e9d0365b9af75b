#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qchab/int_polynomial.hpp"
#include "qchab/modular_symbols.hpp"

namespace qchab::decomp {

// One Galois orbit of weight-2 eigenforms, i.e. one isogeny factor of the
// Jacobian, possibly repeated (multiplicity counts old copies of the orbit).
struct IsogenyFactor {
    std::string label;  // deterministic: "<level>.<ordinal>" for computed data
    long degree = 1;    // [F : Q], the degree of the Hecke eigenvalue field
    poly::FieldClass field_class{poly::FieldClass::Kind::TotallyReal, 0};
    long multiplicity = 1;
    // Irreducible integer polynomial defining F.  Always present for computed
    // data (monic); optional for ingested data.
    std::optional<poly::IntPolynomial> field_poly;

    bool operator==(const IsogenyFactor&) const = default;
};

// Decomposition of a Jacobian into isogeny factors, either computed from a
// level or ingested from an external description.
struct Decomposition {
    enum class Source { Computed, Ingested };
    Source source = Source::Computed;
    long level = 0;     // meaningful only for computed data
    std::string label;  // "X0(<level>)" for computed data; the supplied curve label otherwise
    long genus = 0;
    std::vector<IsogenyFactor> factors;

    bool operator==(const Decomposition&) const = default;
};

// Re-verifies every structural invariant: positive degrees and multiplicities,
// even degree for CM factors, field_poly degree agreement / irreducibility /
// classification agreement when present, and the genus identity
// genus = sum of degree x multiplicity.  Violations throw SchemaError when
// `ingested` (bad input data) and InternalError otherwise (engine bug).
void validate(const Decomposition& d, bool ingested);

// One Hecke-isotypic component of the star-fixed cuspidal subspace.
struct IsotypicComponent {
    linalg::Subspace space;          // subspace of the ambient modular symbols space
    poly::IntPolynomial field_poly;  // monic irreducible; defines the eigenvalue field
    long multiplicity = 1;           // dim(space) = multiplicity * deg(field_poly)
    // Tr_{F/Q}(a_p) for the ascending primes p not dividing the level, as far
    // as the deterministic ordering needed them.
    std::vector<Int> traces;
};

// Splits the star-fixed cuspidal subspace into Hecke-isotypic components by
// refining along T_p for primes p not dividing the level, up to
// sturm_bound(level).  The second overload applies the separating primes in
// the given order (a permutation of the default ascending list); the returned
// components, their field polynomials, multiplicities, and order are
// independent of that order.  Requires a nonzero star-fixed cuspidal subspace.
std::vector<IsotypicComponent> isotypic_decomposition(ms::Space& space);
std::vector<IsotypicComponent> isotypic_decomposition(ms::Space& space,
                                                      const std::vector<long>& prime_order);

// Full decomposition with field classification and deterministic labels,
// sorted by (degree, trace sequence, field polynomial).  Requires genus >= 1.
Decomposition jacobian_factors(ms::Space& space);
Decomposition jacobian_factors(long N);

}  // namespace qchab::decomp

#pragma once

#include <utility>
#include <vector>

#include "qchab/common.hpp"
#include "qchab/rational_matrix.hpp"

namespace qchab::poly {

// Polynomial over Z, coefficients in ascending degree order with no trailing
// zero (the zero polynomial has an empty coefficient vector).
class IntPolynomial {
  public:
    IntPolynomial() = default;
    explicit IntPolynomial(std::vector<Int> coeffs) : c_(std::move(coeffs)) { normalize(); }
    static IntPolynomial constant(Int v) { return IntPolynomial({std::move(v)}); }
    // x^k
    static IntPolynomial monomial(std::size_t k);

    bool is_zero() const { return c_.empty(); }
    // degree of the zero polynomial is -1 by convention
    long degree() const { return static_cast<long>(c_.size()) - 1; }
    const std::vector<Int>& coeffs() const { return c_; }
    const Int& coeff(std::size_t i) const;  // 0 beyond degree
    const Int& leading() const;

    bool operator==(const IntPolynomial& o) const = default;
    // Total order: by degree, then coefficient list from the top down.
    bool operator<(const IntPolynomial& o) const;

    friend IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b);
    friend IntPolynomial operator-(const IntPolynomial& a, const IntPolynomial& b);
    friend IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b);
    IntPolynomial operator-() const;

    IntPolynomial derivative() const;
    Int content() const;           // gcd of coefficients, >= 0; 0 for the zero poly
    IntPolynomial primitive_part() const;  // content and sign removed (leading > 0)

    Int evaluate(const Int& x) const;
    Rat evaluate(const Rat& x) const;

    std::string to_string() const;  // e.g. "x^2 + x - 1"

  private:
    void normalize();
    std::vector<Int> c_;
};

// Pseudo-remainder: lc(b)^(deg a - deg b + 1) * a = q*b + r with deg r < deg b.
IntPolynomial pseudo_rem(const IntPolynomial& a, const IntPolynomial& b);

// Exact quotient a / b; throws InternalError if b does not divide a over Q
// (division is performed over Q and checked).
IntPolynomial exact_div(const IntPolynomial& a, const IntPolynomial& b);

// Primitive gcd via the primitive polynomial remainder sequence; result is
// primitive with positive leading coefficient (content of the inputs ignored
// beyond its gcd).
IntPolynomial gcd(const IntPolynomial& a, const IntPolynomial& b);

// Product of the distinct irreducible factors of f: f / gcd(f, f'), made
// primitive with positive leading coefficient.  Requires f nonzero.
IntPolynomial squarefree_part(const IntPolynomial& f);

// Yun's algorithm: pairwise-coprime squarefree s_i with f = unit * prod s_i^i.
std::vector<std::pair<IntPolynomial, int>> squarefree_decomposition(const IntPolynomial& f);

// Complete factorization over Q of a nonzero polynomial: primitive irreducible
// factors with positive leading coefficients and their multiplicities, sorted
// by (degree, coefficient order).  The product of factor^multiplicity equals f
// up to a rational unit.  Method: good-prime reduction, Berlekamp factorization
// mod p, quadratic Hensel lifting to a Landau-Mignotte bound, subset
// recombination.  Deterministic.
std::vector<std::pair<IntPolynomial, int>> factor_over_rationals(const IntPolynomial& f);

// Number of distinct real roots of a squarefree polynomial, by Sturm's theorem
// with a generalized (positively-scaled) pseudo-remainder chain.  Throws
// NonSquarefreeError if gcd(f, f') is non-constant.
int count_real_roots(const IntPolynomial& f);

// Signature classification of the field Q[x]/(f) for irreducible monic f.
struct FieldClass {
    enum class Kind { TotallyReal, CM };
    Kind kind;
    // For CM: degree of the maximal totally real subfield, deg(f)/2.
    int real_subfield_degree = 0;

    bool operator==(const FieldClass&) const = default;
};

// TotallyReal if every root is real, CM if no root is real (degree is then
// forced even: an odd-degree integer polynomial always has a real root).
// A mix of real and non-real roots throws MixedSignatureError: such a field
// cannot arise from weight-2 Hecke eigenvalue data.
FieldClass classify_hecke_field(const IntPolynomial& f);

// Conversion from an exact rational polynomial with integer coefficients
// (e.g. a Hecke characteristic polynomial); throws InternalError if any
// coefficient has a nontrivial denominator.
IntPolynomial from_rational_poly(const linalg::RationalPoly& p);

}  // namespace qchab::poly

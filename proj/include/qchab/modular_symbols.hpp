#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "qchab/common.hpp"
#include "qchab/rational_matrix.hpp"

namespace qchab::ms {

// The projective line P^1(Z/N): canonical representatives of the classes
// (c:d) with gcd(c, d, N) = 1 under unit scaling, plus an index table for
// arbitrary pairs.
class P1 {
  public:
    explicit P1(long N);

    long level() const { return N_; }
    std::size_t size() const { return reps_.size(); }
    const std::pair<long, long>& rep(std::size_t i) const { return reps_[i]; }

    // Index of the class of (c, d); c, d arbitrary integers.  Returns -1 if
    // gcd(c, d, N) > 1 (the pair does not define a point).
    long index(long c, long d) const;

  private:
    long N_;
    std::vector<std::pair<long, long>> reps_;
    std::vector<std::int32_t> table_;  // (c mod N)*N + (d mod N) -> index or -1
};

// Multiplicative/cusp data of X_0(N) from closed-form expressions.
struct GenusData {
    long mu;      // index [SL2(Z) : Gamma_0(N)] = N prod (1 + 1/p)
    long nu2;     // number of elliptic points of order 2
    long nu3;     // number of elliptic points of order 3
    long nu_inf;  // number of cusps = sum over d | N of phi(gcd(d, N/d))
    long genus;   // 1 + mu/12 - nu2/4 - nu3/3 - nu_inf/2
};

GenusData genus_formula(long N);

// ceil(mu / 6): Hecke operators at good primes up to this bound determine a
// weight-2 eigenform on Gamma_0(N).
long sturm_bound(long N);

// Primes in [2, bound], ascending.
std::vector<long> primes_up_to(long bound);

// Cusp p/q in lowest terms with q >= 0; infinity is 1/0.
struct Cusp {
    long p, q;
    bool operator==(const Cusp&) const = default;
};

// Gamma_0(N)-equivalence of cusps: p1/q1 ~ p2/q2 iff s1 q2 = s2 q1 modulo
// gcd(q1 q2, N), where p_i s_i = 1 (mod q_i).
bool cusps_equivalent(const Cusp& a, const Cusp& b, long N);

// Weight-2 modular symbols for Gamma_0(N) over Q.
//
// The space is presented on Manin generators indexed by P^1(Z/N), modulo the
// two-term and three-term relations x + x.sigma = 0 and
// x + x.tau + x.tau^2 = 0.  Construction computes the quotient map Q (one
// column per generator), a section onto free generators, the boundary map to
// the cusp classes, the star involution, the cuspidal and plus-cuspidal
// subspaces, and the genus.  Every structural identity is verified exactly at
// build time; violations raise InternalError.
class Space {
  public:
    explicit Space(long level);

    long level() const { return N_; }
    const P1& p1() const { return p1_; }
    const GenusData& invariants() const { return inv_; }
    long genus() const { return inv_.genus; }
    std::size_t ambient_dim() const { return ambient_; }
    long num_cusps() const { return static_cast<long>(cusp_classes_.size()); }
    const std::vector<Cusp>& cusp_classes() const { return cusp_classes_; }

    // Class of generator i in the quotient (column i of the quotient map).
    const linalg::RationalMatrix& quotient_map() const { return q_; }

    // Boundary map on the quotient: num_cusps x ambient_dim.
    const linalg::RationalMatrix& boundary() const { return boundary_; }

    // Star involution on the quotient, induced by (c:d) -> (-c:d).
    const linalg::RationalMatrix& star() const { return star_; }

    const linalg::Subspace& cuspidal() const { return cuspidal_; }
    const linalg::Subspace& plus_cuspidal() const { return plus_cuspidal_; }

    // Hecke operator on the quotient via Heilbronn matrices: T_p for p prime
    // to the level, U_p for p dividing it.  Cached per prime.
    const linalg::RationalMatrix& hecke_matrix(long p);

    // The same operator restricted to an invariant subspace, in the
    // coordinates of the subspace basis.  Invariance is verified exactly.
    linalg::RationalMatrix hecke_on(const linalg::Subspace& w, long p);

  private:
    void build();

    long N_;
    P1 p1_;
    GenusData inv_;
    std::size_t ambient_ = 0;
    linalg::RationalMatrix q_;                    // ambient x mu
    std::vector<std::size_t> section_gen_;        // basis j -> generator index
    // Integer form of q_ scaled by per-row denominators (Hecke fast path).
    std::vector<std::vector<std::pair<std::uint32_t, Int>>> col_entries_;
    std::vector<Int> row_den_;
    std::vector<Cusp> cusp_classes_;
    linalg::RationalMatrix boundary_;             // num_cusps x ambient
    linalg::RationalMatrix star_;                 // ambient x ambient
    linalg::Subspace cuspidal_{0};
    linalg::Subspace plus_cuspidal_{0};
    std::map<long, linalg::RationalMatrix> hecke_cache_;
};

}  // namespace qchab::ms

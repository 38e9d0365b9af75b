#include <vector>

#include "doctest.h"
#include "qchab/rational_matrix.hpp"
#include "support/oracles.hpp"

using namespace qchab;
using namespace qchab::linalg;

namespace {

RationalMatrix from_longs(std::size_t r, std::size_t c, std::vector<long> v) {
    RationalMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m.at(i, j) = Rat(v[i * c + j]);
    return m;
}

RationalMatrix random_matrix(oracle::Rng& rng, std::size_t r, std::size_t c, long lo = -9,
                             long hi = 9) {
    RationalMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m.at(i, j) = Rat(rng.pick(lo, hi));
    return m;
}

// Inverse via rref of [m | I]; requires m square invertible.
RationalMatrix inverse(const RationalMatrix& m) {
    const std::size_t n = m.rows();
    RationalMatrix aug(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug.at(i, j) = m.at(i, j);
        aug.at(i, n + i) = 1;
    }
    RrefResult r = rref(aug);
    REQUIRE(r.rank == n);
    RationalMatrix inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv.at(i, j) = r.echelon.at(i, n + j);
    return inv;
}

}  // namespace

TEST_CASE("rref of a rank-1 matrix") {
    RationalMatrix m = from_longs(2, 2, {2, 4, 1, 2});
    RrefResult r = rref(m);
    CHECK(r.rank == 1);
    REQUIRE(r.pivots == std::vector<std::size_t>{0});
    // Zero rows are trimmed: the echelon form is rank x cols.
    REQUIRE(r.echelon.rows() == 1);
    CHECK(r.echelon.at(0, 0) == Rat(1));
    CHECK(r.echelon.at(0, 1) == Rat(2));
}

TEST_CASE("rref is idempotent on random matrices") {
    oracle::Rng rng(20260301);
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t r = static_cast<std::size_t>(rng.pick(1, 6));
        std::size_t c = static_cast<std::size_t>(rng.pick(1, 6));
        RationalMatrix m = random_matrix(rng, r, c);
        RrefResult first = rref(m);
        RrefResult again = rref(first.echelon);
        CHECK(first.echelon == again.echelon);
        CHECK(first.rank == again.rank);
    }
}

TEST_CASE("rref rank matches fraction-free determinant on random 5x5 integer matrices") {
    oracle::Rng rng(77001);
    int nonzero_seen = 0, zero_seen = 0;
    for (int trial = 0; trial < 60; ++trial) {
        std::vector<std::vector<Int>> im(5, std::vector<Int>(5));
        RationalMatrix m(5, 5);
        for (std::size_t i = 0; i < 5; ++i)
            for (std::size_t j = 0; j < 5; ++j) {
                long v = rng.pick(-4, 4);
                im[i][j] = v;
                m.at(i, j) = Rat(v);
            }
        if (trial % 5 == 4) {
            // Force a singular instance: duplicate a row.
            for (std::size_t j = 0; j < 5; ++j) {
                im[4][j] = im[0][j];
                m.at(4, j) = m.at(0, j);
            }
        }
        Int det = oracle::bareiss_det(im);
        std::size_t rank = rref(m).rank;
        if (det != 0) {
            ++nonzero_seen;
            CHECK(rank == 5);
        } else {
            ++zero_seen;
            CHECK(rank < 5);
        }
    }
    CHECK(nonzero_seen > 0);
    CHECK(zero_seen > 0);
}

TEST_CASE("kernel vectors are annihilated and dimensions add up") {
    oracle::Rng rng(5150);
    for (int trial = 0; trial < 30; ++trial) {
        std::size_t r = static_cast<std::size_t>(rng.pick(1, 5));
        std::size_t c = static_cast<std::size_t>(rng.pick(1, 5));
        RationalMatrix m = random_matrix(rng, r, c);
        Subspace k = kernel(m);
        CHECK(k.dim() + rref(m).rank == c);
        for (std::size_t b = 0; b < k.dim(); ++b) {
            std::vector<Rat> v(c);
            for (std::size_t j = 0; j < c; ++j) v[j] = k.basis().at(b, j);
            std::vector<Rat> mv = matvec(m, v);
            for (const Rat& x : mv) CHECK(x == Rat(0));
        }
    }
}

TEST_CASE("kernel of a rank-1 matrix contains the expected direction") {
    RationalMatrix m = from_longs(2, 2, {1, 2, 2, 4});
    Subspace k = kernel(m);
    REQUIRE(k.dim() == 1);
    // Basis vector must be proportional to (2, -1).
    Rat x = k.basis().at(0, 0), y = k.basis().at(0, 1);
    CHECK(x * Rat(-1) == y * Rat(2));
    CHECK(!(x == 0 && y == 0));
}

TEST_CASE("subspace canonical form is independent of the spanning set") {
    // Same plane in Q^3 described two ways.
    RationalMatrix a = from_longs(2, 3, {1, 1, 0, 0, 1, 1});
    RationalMatrix b = from_longs(3, 3, {2, 2, 0, 1, 2, 1, 3, 4, 1});
    Subspace sa(a), sb(b);
    CHECK(sa.dim() == 2);
    CHECK(sa == sb);
}

TEST_CASE("intersect computes the common subspace") {
    // span{(1,0,0),(0,1,0)} meet span{(0,1,0),(0,0,1)} = span{(0,1,0)}.
    Subspace u(from_longs(2, 3, {1, 0, 0, 0, 1, 0}));
    Subspace v(from_longs(2, 3, {0, 1, 0, 0, 0, 1}));
    Subspace w = intersect(u, v);
    REQUIRE(w.dim() == 1);
    CHECK(w.basis().at(0, 0) == Rat(0));
    CHECK(w.basis().at(0, 1) == Rat(1));
    CHECK(w.basis().at(0, 2) == Rat(0));

    // Random sanity: intersect(S, S) == S.
    oracle::Rng rng(424242);
    for (int trial = 0; trial < 10; ++trial) {
        RationalMatrix m = random_matrix(rng, 3, 5);
        Subspace s(m);
        CHECK(intersect(s, s) == s);
    }
}

TEST_CASE("charpoly on frozen 2x2 examples") {
    RationalPoly p = charpoly(from_longs(2, 2, {2, 1, 0, 2}));
    // (x-2)^2 = x^2 - 4x + 4
    REQUIRE(p.degree() == 2);
    CHECK(p.coeffs[0] == Rat(4));
    CHECK(p.coeffs[1] == Rat(-4));
    CHECK(p.coeffs[2] == Rat(1));

    RationalPoly q = charpoly(from_longs(2, 2, {0, 1, 1, 0}));
    // x^2 - 1
    REQUIRE(q.degree() == 2);
    CHECK(q.coeffs[0] == Rat(-1));
    CHECK(q.coeffs[1] == Rat(0));
    CHECK(q.coeffs[2] == Rat(1));
}

TEST_CASE("charpoly of a companion matrix recovers the polynomial") {
    oracle::Rng rng(90210);
    for (int trial = 0; trial < 12; ++trial) {
        std::size_t n = static_cast<std::size_t>(rng.pick(1, 7));
        std::vector<Rat> monic(n + 1);
        monic[n] = 1;
        for (std::size_t i = 0; i < n; ++i) monic[i] = Rat(rng.pick(-6, 6));
        RationalMatrix comp(n, n);
        for (std::size_t i = 0; i + 1 < n; ++i) comp.at(i + 1, i) = 1;
        for (std::size_t i = 0; i < n; ++i) comp.at(i, n - 1) = -monic[i];
        RationalPoly p = charpoly(comp);
        REQUIRE(p.coeffs.size() == monic.size());
        for (std::size_t i = 0; i <= n; ++i) CHECK(p.coeffs[i] == monic[i]);
    }
}

TEST_CASE("charpoly is invariant under similarity") {
    oracle::Rng rng(31337);
    int done = 0;
    while (done < 8) {
        std::size_t n = static_cast<std::size_t>(rng.pick(2, 5));
        RationalMatrix a = random_matrix(rng, n, n, -5, 5);
        RationalMatrix p = random_matrix(rng, n, n, -3, 3);
        if (rref(p).rank != n) continue;
        RationalMatrix conj = inverse(p) * a * p;
        CHECK(charpoly(a) == charpoly(conj));
        ++done;
    }
}

TEST_CASE("charpoly handles rational entries") {
    RationalMatrix m(2, 2);
    m.at(0, 0) = Rat(1, 2);
    m.at(0, 1) = Rat(1, 3);
    m.at(1, 0) = Rat(1, 5);
    m.at(1, 1) = Rat(-1, 2);
    RationalPoly p = charpoly(m);
    // x^2 - tr x + det, tr = 0, det = -1/4 - 1/15 = -19/60.
    REQUIRE(p.degree() == 2);
    CHECK(p.coeffs[1] == Rat(0));
    CHECK(p.coeffs[0] == Rat(-19, 60));
}

TEST_CASE("restricting to an invariant subspace yields a charpoly divisor") {
    oracle::Rng rng(1123581321);
    int done = 0;
    while (done < 8) {
        std::size_t n = static_cast<std::size_t>(rng.pick(3, 5));
        std::size_t k = static_cast<std::size_t>(rng.pick(1, static_cast<long>(n - 1)));
        // Block upper-triangular in the standard basis: span{e_1..e_k} invariant.
        RationalMatrix a(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i < k || j >= k) a.at(i, j) = Rat(rng.pick(-4, 4));
        RationalMatrix p = random_matrix(rng, n, n, -3, 3);
        if (rref(p).rank != n) continue;
        RationalMatrix pinv = inverse(p);
        RationalMatrix conj = pinv * a * p;
        // Columns of p^{-1} restricted... the invariant subspace of conj is
        // {p^{-1} v : v in span(e_1..e_k)}, i.e. the span of the first k
        // columns of p^{-1}, written as rows.
        RationalMatrix gens(k, n);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < n; ++j) gens.at(i, j) = pinv.at(j, i);
        Subspace s(gens);
        REQUIRE(s.dim() == k);
        RationalMatrix b = restrict_operator(conj, s);
        RationalPoly pb = charpoly(b);
        RationalPoly pa = charpoly(conj);
        CHECK(oracle::rational_poly_divides(pb.coeffs, pa.coeffs));
        // The restriction matches the top-left block of a in the original basis.
        RationalMatrix block(k, k);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) block.at(i, j) = a.at(i, j);
        CHECK(charpoly(block) == pb);
        ++done;
    }
}

TEST_CASE("restricting to a non-invariant subspace fails loudly") {
    RationalMatrix a = from_longs(2, 2, {0, 1, 0, 0});
    // a maps e2 to e1, so span{e2} is not invariant.
    Subspace s(from_longs(1, 2, {0, 1}));
    CHECK_THROWS_AS(restrict_operator(a, s), NonInvariantSubspace);
}

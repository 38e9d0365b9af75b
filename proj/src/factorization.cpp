// Factorization over Q: reduce a squarefree primitive polynomial modulo the
// smallest good prime (not dividing leading coefficient or discriminant),
// Berlekamp-factor there, Hensel-lift the modular factors to a Landau-Mignotte
// coefficient bound, and recombine subsets.  Fully deterministic.

#include <algorithm>
#include <cstdint>
#include <numeric>

#include "qchab/int_polynomial.hpp"

namespace qchab::poly {

namespace {

using u64 = std::uint64_t;

// ---------------------------------------------------------------------------
// Arithmetic in F_p[x], p a small prime (fits comfortably in 32 bits).
// Polynomials as coefficient vectors, ascending, no trailing zeros.
// ---------------------------------------------------------------------------

using FpPoly = std::vector<u64>;

void fp_trim(FpPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

u64 fp_pow(u64 a, u64 e, u64 p) {
    u64 r = 1;
    a %= p;
    while (e) {
        if (e & 1) r = r * a % p;
        a = a * a % p;
        e >>= 1;
    }
    return r;
}

u64 fp_inv(u64 a, u64 p) { return fp_pow(a, p - 2, p); }

FpPoly fp_mul(const FpPoly& a, const FpPoly& b, u64 p) {
    if (a.empty() || b.empty()) return {};
    FpPoly c(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % p;
    }
    fp_trim(c);
    return c;
}

// a mod b (b nonzero, not necessarily monic)
FpPoly fp_rem(FpPoly a, const FpPoly& b, u64 p) {
    fp_trim(a);
    u64 binv = fp_inv(b.back(), p);
    while (a.size() >= b.size()) {
        u64 f = a.back() * binv % p;
        std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i)
            a[shift + i] = (a[shift + i] + (p - f * b[i] % p)) % p;
        fp_trim(a);
    }
    return a;
}

FpPoly fp_gcd(FpPoly a, FpPoly b, u64 p) {
    fp_trim(a);
    fp_trim(b);
    while (!b.empty()) {
        FpPoly r = fp_rem(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty() && a.back() != 1) {
        u64 inv = fp_inv(a.back(), p);
        for (u64& x : a) x = x * inv % p;
    }
    return a;
}

FpPoly fp_derivative(const FpPoly& a, u64 p) {
    if (a.size() <= 1) return {};
    FpPoly d(a.size() - 1);
    for (std::size_t i = 1; i < a.size(); ++i) d[i - 1] = a[i] * (i % p) % p;
    fp_trim(d);
    return d;
}

FpPoly fp_reduce(const IntPolynomial& f, u64 p) {
    FpPoly a(f.coeffs().size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        Int r = f.coeff(i) % Int((unsigned long)p);
        if (r < 0) r += Int((unsigned long)p);
        a[i] = r.get_ui();
    }
    fp_trim(a);
    return a;
}

// Berlekamp factorization of a monic squarefree polynomial mod p.
// Deterministic: kernel basis comes from systematic Gaussian elimination and
// splitting constants are tried in increasing order.
std::vector<FpPoly> berlekamp(const FpPoly& g, u64 p) {
    const std::size_t n = g.size() - 1;
    if (n == 1) return {g};
    // Frobenius matrix: column i holds x^(i*p) mod g.
    FpPoly xp = {0, 1};
    xp = [&] {  // x^p mod g by square and multiply
        FpPoly base = {0, 1}, acc = {1};
        u64 e = p;
        while (e) {
            if (e & 1) acc = fp_rem(fp_mul(acc, base, p), g, p);
            base = fp_rem(fp_mul(base, base, p), g, p);
            e >>= 1;
        }
        return acc;
    }();
    std::vector<FpPoly> cols(n);
    cols[0] = {1};
    for (std::size_t i = 1; i < n; ++i) cols[i] = fp_rem(fp_mul(cols[i - 1], xp, p), g, p);
    // M - I, column-kernel by row reduction on the n x n system.
    std::vector<std::vector<u64>> m(n, std::vector<u64>(n, 0));
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < cols[j].size(); ++i) m[i][j] = cols[j][i];
        m[j][j] = (m[j][j] + p - 1) % p;
    }
    std::vector<std::size_t> pivot_cols;
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < n; ++c) {
        std::size_t sel = n;
        for (std::size_t i = r; i < n; ++i)
            if (m[i][c] != 0) { sel = i; break; }
        if (sel == n) continue;
        std::swap(m[sel], m[r]);
        u64 inv = fp_inv(m[r][c], p);
        for (std::size_t j = c; j < n; ++j) m[r][j] = m[r][j] * inv % p;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == r || m[i][c] == 0) continue;
            u64 f = m[i][c];
            for (std::size_t j = c; j < n; ++j)
                m[i][j] = (m[i][j] + (p - f) * m[r][j]) % p;
        }
        pivot_cols.push_back(c);
        ++r;
    }
    std::vector<bool> is_pivot(n, false);
    for (std::size_t c : pivot_cols) is_pivot[c] = true;
    std::vector<FpPoly> kernel_polys;
    for (std::size_t f = 0; f < n; ++f) {
        if (is_pivot[f]) continue;
        FpPoly v(n, 0);
        v[f] = 1;
        for (std::size_t i = 0; i < r; ++i) v[pivot_cols[i]] = (p - m[i][f]) % p;
        fp_trim(v);
        kernel_polys.push_back(std::move(v));
    }
    // The Berlekamp subalgebra contains the constants, so its dimension is
    // exactly the number of irreducible factors.
    const std::size_t num_factors = kernel_polys.size();
    std::vector<FpPoly> factors = {g};
    if (num_factors == 1) return factors;
    for (const FpPoly& v : kernel_polys) {
        if (v.size() <= 1) continue;  // constant kernel elements never split
        if (factors.size() == num_factors) break;
        std::vector<FpPoly> next;
        for (FpPoly& u : factors) {
            if (u.size() - 1 == 1) { next.push_back(std::move(u)); continue; }
            FpPoly rest = u;
            for (u64 c = 0; c < p && rest.size() > 1; ++c) {
                FpPoly shifted = v;
                if (shifted.empty()) shifted = {0};
                shifted[0] = (shifted[0] + p - c) % p;
                fp_trim(shifted);
                FpPoly d = fp_gcd(rest, shifted, p);
                if (d.size() > 1 && d.size() < rest.size()) {
                    next.push_back(d);
                    // rest /= d
                    FpPoly q;
                    {
                        FpPoly num = rest;
                        q.assign(num.size() - d.size() + 1, 0);
                        u64 dinv = fp_inv(d.back(), p);
                        while (num.size() >= d.size() && !num.empty()) {
                            u64 f2 = num.back() * dinv % p;
                            std::size_t sh = num.size() - d.size();
                            q[sh] = f2;
                            for (std::size_t i = 0; i < d.size(); ++i)
                                num[sh + i] = (num[sh + i] + (p - f2 * d[i] % p)) % p;
                            fp_trim(num);
                        }
                    }
                    rest = q;
                    fp_trim(rest);
                }
            }
            if (rest.size() > 1) next.push_back(rest);
        }
        factors = std::move(next);
    }
    QCHAB_CHECK(factors.size() == num_factors, "Berlekamp: factor count mismatch");
    std::sort(factors.begin(), factors.end());
    return factors;
}

// ---------------------------------------------------------------------------
// Arithmetic in (Z/m)[x] with m = p^k, coefficients as non-negative mpz < m.
// ---------------------------------------------------------------------------

using ZmPoly = std::vector<Int>;

void zm_trim(ZmPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

ZmPoly zm_from_fp(const FpPoly& a) {
    ZmPoly r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = Int((unsigned long)a[i]);
    return r;
}

Int zm_mod(const Int& x, const Int& m) {
    Int r = x % m;
    if (r < 0) r += m;
    return r;
}

ZmPoly zm_reduce(const IntPolynomial& f, const Int& m) {
    ZmPoly a(f.coeffs().size());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = zm_mod(f.coeff(i), m);
    zm_trim(a);
    return a;
}

ZmPoly zm_mul(const ZmPoly& a, const ZmPoly& b, const Int& m) {
    if (a.empty() || b.empty()) return {};
    ZmPoly c(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    }
    for (Int& x : c) x = zm_mod(x, m);
    zm_trim(c);
    return c;
}

ZmPoly zm_add(const ZmPoly& a, const ZmPoly& b, const Int& m) {
    ZmPoly c(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < c.size(); ++i) {
        Int s = (i < a.size() ? a[i] : Int(0)) + (i < b.size() ? b[i] : Int(0));
        c[i] = zm_mod(s, m);
    }
    zm_trim(c);
    return c;
}

ZmPoly zm_sub(const ZmPoly& a, const ZmPoly& b, const Int& m) {
    ZmPoly c(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < c.size(); ++i) {
        Int s = (i < a.size() ? a[i] : Int(0)) - (i < b.size() ? b[i] : Int(0));
        c[i] = zm_mod(s, m);
    }
    zm_trim(c);
    return c;
}

// Division by a monic polynomial: a = q*b + r with deg r < deg b.
void zm_divmod_monic(const ZmPoly& a, const ZmPoly& b, const Int& m, ZmPoly& q, ZmPoly& r) {
    QCHAB_CHECK(!b.empty() && b.back() == 1, "zm division requires a monic divisor");
    r = a;
    zm_trim(r);
    if (r.size() < b.size()) { q.clear(); return; }
    q.assign(r.size() - b.size() + 1, 0);
    while (r.size() >= b.size() && !r.empty()) {
        Int f = r.back();
        std::size_t sh = r.size() - b.size();
        q[sh] = f;
        for (std::size_t i = 0; i < b.size(); ++i) r[sh + i] = zm_mod(r[sh + i] - f * b[i], m);
        zm_trim(r);
    }
    zm_trim(q);
}

// One quadratic Hensel step (Z/m -> Z/m^2), following the classical
// correction formulas: given f = u v (mod m), s u + t v = 1 (mod m) with
// u, v monic, produces the unique lift with u', v' monic.
struct HenselPair {
    ZmPoly u, v, s, t;
};

HenselPair hensel_step(const ZmPoly& f, const HenselPair& in, const Int& m) {
    Int m2 = m * m;
    const ZmPoly &u = in.u, &v = in.v, &s = in.s, &t = in.t;
    ZmPoly e = zm_sub(f, zm_mul(u, v, m2), m2);
    ZmPoly q, r;
    zm_divmod_monic(zm_mul(s, e, m2), v, m2, q, r);
    ZmPoly u1 = zm_add(u, zm_add(zm_mul(t, e, m2), zm_mul(q, u, m2), m2), m2);
    ZmPoly v1 = zm_add(v, r, m2);
    // refresh the Bezout pair
    ZmPoly b = zm_sub(zm_add(zm_mul(s, u1, m2), zm_mul(t, v1, m2), m2), ZmPoly{Int(1)}, m2);
    ZmPoly c, d;
    zm_divmod_monic(zm_mul(s, b, m2), v1, m2, c, d);
    ZmPoly s1 = zm_sub(s, d, m2);
    ZmPoly t1 = zm_sub(zm_sub(t, zm_mul(t, b, m2), m2), zm_mul(c, u1, m2), m2);
    QCHAB_CHECK(u1.size() == u.size() && u1.back() == 1 && v1.size() == v.size() &&
                    v1.back() == 1,
                "Hensel step disturbed factor degrees");
    return HenselPair{u1, v1, s1, t1};
}

// Extended Euclid in F_p[x]: s*a + t*b = 1 for coprime a, b.
void fp_bezout(const FpPoly& a, const FpPoly& b, u64 p, FpPoly& s, FpPoly& t) {
    FpPoly r0 = a, r1 = b;
    FpPoly s0 = {1}, s1 = {};
    FpPoly t0 = {}, t1 = {1};
    while (!r1.empty()) {
        // divide r0 by r1
        FpPoly q(r0.size() >= r1.size() ? r0.size() - r1.size() + 1 : 0, 0);
        FpPoly rem = r0;
        u64 inv = fp_inv(r1.back(), p);
        while (rem.size() >= r1.size() && !rem.empty()) {
            u64 f = rem.back() * inv % p;
            std::size_t sh = rem.size() - r1.size();
            q[sh] = f;
            for (std::size_t i = 0; i < r1.size(); ++i)
                rem[sh + i] = (rem[sh + i] + (p - f * r1[i] % p)) % p;
            fp_trim(rem);
        }
        fp_trim(q);
        auto combine = [&](const FpPoly& x0, const FpPoly& x1) {
            FpPoly qx = fp_mul(q, x1, p);
            FpPoly res(std::max(x0.size(), qx.size()), 0);
            for (std::size_t i = 0; i < res.size(); ++i) {
                u64 lhs = i < x0.size() ? x0[i] : 0;
                u64 rhs = i < qx.size() ? qx[i] : 0;
                res[i] = (lhs + p - rhs) % p;
            }
            fp_trim(res);
            return res;
        };
        FpPoly s2 = combine(s0, s1);
        FpPoly t2 = combine(t0, t1);
        r0 = std::move(r1);
        r1 = std::move(rem);
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    QCHAB_CHECK(r0.size() == 1, "fp_bezout: inputs not coprime");
    u64 inv = fp_inv(r0[0], p);
    for (u64& x : s0) x = x * inv % p;
    for (u64& x : t0) x = x * inv % p;
    s = s0;
    t = t0;
}

// Lift the factorization f = prod(factors) (mod p) to mod p^2^ceil(log2 K)
// >= p^K, recursively splitting the factor list in two.
std::vector<ZmPoly> hensel_lift_tree(const IntPolynomial& f, const std::vector<FpPoly>& factors,
                                     u64 p, const Int& target_modulus) {
    if (factors.size() == 1) {
        return {zm_reduce(f, target_modulus)};
    }
    const std::size_t half = factors.size() / 2;
    FpPoly u0 = {1}, v0 = {1};
    for (std::size_t i = 0; i < half; ++i) u0 = fp_mul(u0, factors[i], p);
    for (std::size_t i = half; i < factors.size(); ++i) v0 = fp_mul(v0, factors[i], p);
    FpPoly s0, t0;
    fp_bezout(u0, v0, p, s0, t0);
    HenselPair pair{zm_from_fp(u0), zm_from_fp(v0), zm_from_fp(s0), zm_from_fp(t0)};
    Int m((unsigned long)p);
    ZmPoly fm = zm_reduce(f, m);
    while (m < target_modulus) {
        ZmPoly f2 = zm_reduce(f, m * m);
        pair = hensel_step(f2, pair, m);
        m = m * m;
    }
    // sanity: f = u*v mod m
    QCHAB_CHECK(zm_sub(zm_reduce(f, m), zm_mul(pair.u, pair.v, m), m).empty(),
                "Hensel lift failed to reproduce the polynomial");
    IntPolynomial fu{std::vector<Int>(pair.u)};
    IntPolynomial fv{std::vector<Int>(pair.v)};
    std::vector<FpPoly> left(factors.begin(), factors.begin() + half);
    std::vector<FpPoly> right(factors.begin() + half, factors.end());
    std::vector<ZmPoly> a = hensel_lift_tree(fu, left, p, target_modulus);
    std::vector<ZmPoly> b = hensel_lift_tree(fv, right, p, target_modulus);
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

bool try_exact_div(const IntPolynomial& a, const IntPolynomial& b, IntPolynomial* quot) {
    if (b.is_zero() || a.is_zero() || a.degree() < b.degree()) return false;
    std::vector<Rat> r(a.coeffs().size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = Rat(a.coeff(i));
    long dr = a.degree();
    const long db = b.degree();
    Rat lb(b.leading());
    std::vector<Rat> q(dr - db + 1);
    while (dr >= db) {
        Rat t = r[dr] / lb;
        q[dr - db] = t;
        if (t != 0)
            for (long i = 0; i <= db; ++i) r[dr - db + i] -= t * Rat(b.coeff(i));
        --dr;
        while (dr >= 0 && r[dr] == 0) --dr;
    }
    if (dr >= 0) return false;
    std::vector<Int> qi(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (q[i].get_den() != 1) return false;
        qi[i] = q[i].get_num();
    }
    *quot = IntPolynomial(std::move(qi));
    return true;
}

Int balanced(const Int& x, const Int& m) {
    Int r = zm_mod(x, m);
    if (2 * r > m) r -= m;
    return r;
}

// Factor a primitive squarefree polynomial of degree >= 1 into primitive
// irreducibles with positive leading coefficients.
std::vector<IntPolynomial> factor_squarefree(const IntPolynomial& g) {
    const long n = g.degree();
    if (n == 1) return {g};

    // Work with the monic transform ghat(x) = lc^(n-1) g(x/lc), whose x^k
    // coefficient is g_k * lc^(n-1-k); its integer monic factors map back to
    // the primitive factors of g.
    const Int lc = g.leading();
    std::vector<Int> hc(n + 1);
    Int pw = 1;
    for (long k = n; k >= 0; --k) {
        if (k == n) {
            hc[k] = 1;
        } else {
            hc[k] = g.coeff(k) * pw;
            pw *= lc;
        }
    }
    IntPolynomial ghat{std::move(hc)};

    // Smallest good prime: p does not divide lc and g stays squarefree mod p.
    u64 p = 2;
    auto next_prime = [](u64 q) {
        while (true) {
            ++q;
            bool prime = q >= 2;
            for (u64 d = 2; d * d <= q; ++d)
                if (q % d == 0) { prime = false; break; }
            if (prime) return q;
        }
    };
    while (true) {
        if (lc % Int((unsigned long)p) != 0) {
            FpPoly gp = fp_reduce(g, p);
            if (gp.size() == static_cast<std::size_t>(n + 1)) {
                FpPoly d = fp_gcd(gp, fp_derivative(gp, p), p);
                if (d.size() == 1) break;
            }
        }
        p = next_prime(p);
    }

    FpPoly ghat_p = fp_reduce(ghat, p);
    std::vector<FpPoly> modular = berlekamp(ghat_p, p);
    if (modular.size() == 1) return {g};

    // Landau-Mignotte style bound for monic integer factors of ghat:
    // every coefficient of a factor is bounded by 2^n * ||ghat||_2.
    Int norm2sq = 0;
    for (const Int& c : ghat.coeffs()) norm2sq += c * c;
    Int norm2;
    mpz_sqrt(norm2.get_mpz_t(), norm2sq.get_mpz_t());
    norm2 += 1;
    Int bound;
    mpz_ui_pow_ui(bound.get_mpz_t(), 2, static_cast<unsigned long>(n));
    bound *= norm2;
    Int target = 2 * bound + 1;
    Int modulus((unsigned long)p);
    while (modulus < target) modulus *= modulus;  // quadratic lifting reaches p^(2^j)

    std::vector<ZmPoly> lifted = hensel_lift_tree(ghat, modular, p, modulus);

    // Zassenhaus recombination over subsets of the lifted factors.
    std::vector<int> active(lifted.size());
    std::iota(active.begin(), active.end(), 0);
    std::vector<IntPolynomial> monic_factors;
    IntPolynomial rem = ghat;
    std::size_t s = 1;
    while (2 * s <= active.size()) {
        // lexicographic size-s index combinations of `active`
        std::vector<std::size_t> idx(s);
        std::iota(idx.begin(), idx.end(), 0);
        bool found = false;
        while (true) {
            ZmPoly prod = {Int(1)};
            for (std::size_t i : idx) prod = zm_mul(prod, lifted[active[i]], modulus);
            std::vector<Int> cand(prod.size());
            for (std::size_t i = 0; i < prod.size(); ++i) cand[i] = balanced(prod[i], modulus);
            IntPolynomial candidate{std::move(cand)};
            IntPolynomial quot;
            if (candidate.degree() >= 1 && try_exact_div(rem, candidate, &quot)) {
                monic_factors.push_back(candidate);
                rem = quot;
                std::vector<int> keep;
                for (std::size_t i = 0, k = 0; i < active.size(); ++i) {
                    if (k < idx.size() && idx[k] == i) { ++k; continue; }
                    keep.push_back(active[i]);
                }
                active = std::move(keep);
                found = true;
                break;
            }
            // advance combination
            long pos = static_cast<long>(s) - 1;
            while (pos >= 0 && idx[pos] == active.size() - s + pos) --pos;
            if (pos < 0) break;
            ++idx[pos];
            for (std::size_t i = pos + 1; i < s; ++i) idx[i] = idx[i - 1] + 1;
        }
        if (!found) ++s;
    }
    if (rem.degree() >= 1) monic_factors.push_back(rem);
    else
        QCHAB_CHECK(rem.degree() == 0 && rem.leading() == 1,
                    "recombination left a non-trivial residue");

    // Map monic factors of ghat back to primitive factors of g: h(x) -> pp(h(lc x)).
    std::vector<IntPolynomial> out;
    for (const IntPolynomial& h : monic_factors) {
        std::vector<Int> c(h.coeffs());
        Int q = 1;
        for (std::size_t k = 0; k < c.size(); ++k) {
            c[k] *= q;
            q *= lc;
        }
        out.push_back(IntPolynomial(std::move(c)).primitive_part());
    }
    return out;
}

}  // namespace

std::vector<std::pair<IntPolynomial, int>> factor_over_rationals(const IntPolynomial& f) {
    QCHAB_CHECK(!f.is_zero(), "factor_over_rationals of the zero polynomial");
    std::vector<std::pair<IntPolynomial, int>> out;
    if (f.degree() == 0) return out;
    for (const auto& [sf, mult] : squarefree_decomposition(f)) {
        for (const IntPolynomial& irr : factor_squarefree(sf)) out.emplace_back(irr, mult);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.first.degree() != b.first.degree()) return a.first.degree() < b.first.degree();
        if (!(a.first == b.first)) return a.first < b.first;
        return a.second < b.second;
    });
    // The product of the factors must reproduce f up to a rational unit.
    IntPolynomial prod = IntPolynomial::constant(1);
    for (const auto& [g, m] : out)
        for (int i = 0; i < m; ++i) prod = prod * g;
    QCHAB_CHECK(prod == f.primitive_part(), "factorization does not reproduce its input");
    return out;
}

}  // namespace qchab::poly

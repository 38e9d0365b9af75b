#include "qchab/rational_matrix.hpp"

#include <algorithm>
#include <cstdint>
#include <mutex>

namespace qchab::linalg {

RationalMatrix RationalMatrix::identity(std::size_t n) {
    RationalMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

RationalMatrix RationalMatrix::transpose() const {
    RationalMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
    return t;
}

RationalMatrix operator+(const RationalMatrix& a, const RationalMatrix& b) {
    QCHAB_CHECK(a.rows_ == b.rows_ && a.cols_ == b.cols_, "matrix add: shape mismatch");
    RationalMatrix r(a.rows_, a.cols_);
    for (std::size_t i = 0; i < a.data_.size(); ++i) r.data_[i] = a.data_[i] + b.data_[i];
    return r;
}

RationalMatrix operator-(const RationalMatrix& a, const RationalMatrix& b) {
    QCHAB_CHECK(a.rows_ == b.rows_ && a.cols_ == b.cols_, "matrix sub: shape mismatch");
    RationalMatrix r(a.rows_, a.cols_);
    for (std::size_t i = 0; i < a.data_.size(); ++i) r.data_[i] = a.data_[i] - b.data_[i];
    return r;
}

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
    QCHAB_CHECK(a.cols_ == b.rows_, "matrix mul: shape mismatch");
    RationalMatrix r(a.rows_, b.cols_);
    Rat t;
    for (std::size_t i = 0; i < a.rows_; ++i)
        for (std::size_t k = 0; k < a.cols_; ++k) {
            const Rat& aik = a.at(i, k);
            if (aik == 0) continue;
            for (std::size_t j = 0; j < b.cols_; ++j) {
                const Rat& bkj = b.at(k, j);
                if (bkj == 0) continue;
                t = aik * bkj;
                r.at(i, j) += t;
            }
        }
    return r;
}

RationalMatrix RationalMatrix::operator*(const Rat& c) const {
    RationalMatrix r(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] * c;
    return r;
}

bool RationalMatrix::is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const Rat& x) { return x == 0; });
}

RrefResult rref(const RationalMatrix& m) {
    RationalMatrix a = m;
    const std::size_t rows = a.rows(), cols = a.cols();
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t sel = rows;
        for (std::size_t i = r; i < rows; ++i)
            if (a.at(i, c) != 0) { sel = i; break; }
        if (sel == rows) continue;
        if (sel != r)
            for (std::size_t j = c; j < cols; ++j) swap(a.at(sel, j), a.at(r, j));
        Rat inv = 1 / a.at(r, c);
        for (std::size_t j = c; j < cols; ++j) a.at(r, j) *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r) continue;
            Rat f = a.at(i, c);
            if (f == 0) continue;
            for (std::size_t j = c; j < cols; ++j) a.at(i, j) -= f * a.at(r, j);
        }
        pivots.push_back(c);
        ++r;
    }
    RationalMatrix ech(r, cols);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < cols; ++j) ech.at(i, j) = a.at(i, j);
    return RrefResult{std::move(ech), std::move(pivots), r};
}

Subspace::Subspace(std::size_t ambient_dim)
    : ambient_dim_(ambient_dim), basis_(0, ambient_dim) {}

Subspace::Subspace(const RationalMatrix& spanning) : ambient_dim_(spanning.cols()) {
    RrefResult r = rref(spanning);
    basis_ = std::move(r.echelon);
    pivots_ = std::move(r.pivots);
}

Subspace Subspace::full(std::size_t ambient_dim) {
    return Subspace(RationalMatrix::identity(ambient_dim));
}

std::vector<Rat> Subspace::coordinates(const std::vector<Rat>& v) const {
    QCHAB_CHECK(v.size() == ambient_dim_, "coordinates: vector has wrong dimension");
    std::vector<Rat> c(dim());
    for (std::size_t i = 0; i < dim(); ++i) c[i] = v[pivots_[i]];
    // Exact membership check: the pivot-read coordinates must reproduce v.
    for (std::size_t j = 0; j < ambient_dim_; ++j) {
        Rat s;
        for (std::size_t i = 0; i < dim(); ++i)
            if (c[i] != 0 && basis_.at(i, j) != 0) s += c[i] * basis_.at(i, j);
        if (s != v[j])
            throw NonInvariantSubspace("vector does not lie in the subspace");
    }
    return c;
}

bool Subspace::contains(const std::vector<Rat>& v) const {
    try {
        coordinates(v);
        return true;
    } catch (const NonInvariantSubspace&) {
        return false;
    }
}

Subspace kernel(const RationalMatrix& m) {
    RrefResult r = rref(m);
    const std::size_t n = m.cols();
    std::vector<bool> is_pivot(n, false);
    for (std::size_t p : r.pivots) is_pivot[p] = true;
    RationalMatrix span(n - r.rank, n);
    std::size_t row = 0;
    for (std::size_t f = 0; f < n; ++f) {
        if (is_pivot[f]) continue;
        span.at(row, f) = 1;
        for (std::size_t i = 0; i < r.rank; ++i) span.at(row, r.pivots[i]) = -r.echelon.at(i, f);
        ++row;
    }
    return Subspace(span);
}

Subspace intersect(const Subspace& a, const Subspace& b) {
    QCHAB_CHECK(a.ambient_dim() == b.ambient_dim(), "intersect: ambient mismatch");
    const std::size_t n = a.ambient_dim();
    // Zassenhaus: row-reduce [A | A; B | 0]; rows with zero left block have
    // right blocks spanning the intersection.
    RationalMatrix z(a.dim() + b.dim(), 2 * n);
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < n; ++j) {
            z.at(i, j) = a.basis().at(i, j);
            z.at(i, n + j) = a.basis().at(i, j);
        }
    for (std::size_t i = 0; i < b.dim(); ++i)
        for (std::size_t j = 0; j < n; ++j) z.at(a.dim() + i, j) = b.basis().at(i, j);
    RrefResult r = rref(z);
    std::vector<std::size_t> zero_left_rows;
    for (std::size_t i = 0; i < r.rank; ++i)
        if (r.pivots[i] >= n) zero_left_rows.push_back(i);
    RationalMatrix span(zero_left_rows.size(), n);
    for (std::size_t k = 0; k < zero_left_rows.size(); ++k)
        for (std::size_t j = 0; j < n; ++j)
            span.at(k, j) = r.echelon.at(zero_left_rows[k], n + j);
    return Subspace(span);
}

std::vector<Rat> matvec(const RationalMatrix& a, const std::vector<Rat>& v) {
    QCHAB_CHECK(v.size() == a.cols(), "apply: dimension mismatch");
    std::vector<Rat> w(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        Rat s;
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (a.at(i, j) != 0 && v[j] != 0) s += a.at(i, j) * v[j];
        w[i] = s;
    }
    return w;
}

RationalMatrix restrict_operator(const RationalMatrix& a, const Subspace& s) {
    QCHAB_CHECK(a.rows() == a.cols() && a.cols() == s.ambient_dim(),
                "restrict: operator/subspace shape mismatch");
    const std::size_t k = s.dim();
    RationalMatrix r(k, k);
    std::vector<Rat> v(s.ambient_dim());
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t t = 0; t < s.ambient_dim(); ++t) v[t] = s.basis().at(j, t);
        std::vector<Rat> w = matvec(a, v);
        std::vector<Rat> c = s.coordinates(w);  // throws NonInvariantSubspace
        for (std::size_t i = 0; i < k; ++i) r.at(i, j) = c[i];
    }
    return r;
}

// ---------------------------------------------------------------------------
// Characteristic polynomial: multi-modular Hessenberg with a certified
// Hadamard-style coefficient bound, then CRT reconstruction.
// ---------------------------------------------------------------------------

namespace {

using u64 = std::uint64_t;

u64 mulmod(u64 a, u64 b, u64 p) { return a * b % p; }  // a, b < 2^31

u64 powmod(u64 a, u64 e, u64 p) {
    u64 r = 1;
    a %= p;
    while (e) {
        if (e & 1) r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

bool is_prime_u32(u64 n) {
    if (n < 2) return false;
    for (u64 q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % q == 0) return n == q;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

u64 nth_modular_prime(std::size_t idx) {
    static std::mutex mu;
    static std::vector<u64> primes;
    static u64 next_candidate = (1ull << 31) - 1;
    std::lock_guard<std::mutex> lock(mu);
    while (primes.size() <= idx) {
        while (!is_prime_u32(next_candidate)) next_candidate -= 2;
        primes.push_back(next_candidate);
        next_candidate -= 2;
    }
    return primes[idx];
}

// charpoly of an n x n matrix mod p via Hessenberg form (similarity
// transformations) and the standard last-column expansion recurrence.
std::vector<u64> charpoly_mod_p(std::vector<u64> h, std::size_t n, u64 p) {
    auto H = [&](std::size_t i, std::size_t j) -> u64& { return h[i * n + j]; };
    for (std::size_t j = 0; j + 2 < n; ++j) {
        std::size_t sel = n;
        for (std::size_t i = j + 1; i < n; ++i)
            if (H(i, j) != 0) { sel = i; break; }
        if (sel == n) continue;
        if (sel != j + 1) {
            for (std::size_t c = 0; c < n; ++c) std::swap(H(sel, c), H(j + 1, c));
            for (std::size_t r = 0; r < n; ++r) std::swap(H(r, sel), H(r, j + 1));
        }
        u64 inv = powmod(H(j + 1, j), p - 2, p);
        for (std::size_t i = j + 2; i < n; ++i) {
            if (H(i, j) == 0) continue;
            u64 t = mulmod(H(i, j), inv, p);
            u64 neg = p - t;
            for (std::size_t c = j; c < n; ++c)
                H(i, c) = (H(i, c) + mulmod(neg, H(j + 1, c), p)) % p;
            for (std::size_t r = 0; r < n; ++r)
                H(r, j + 1) = (H(r, j + 1) + mulmod(t, H(r, i), p)) % p;
        }
    }
    // p_m = (x - H[m-1][m-1]) p_{m-1} - sum_i H[i-1][m-1] (prod_j H[j+1][j]) p_{i-1}
    std::vector<std::vector<u64>> P(n + 1);
    P[0] = {1};
    for (std::size_t m = 1; m <= n; ++m) {
        std::vector<u64> pm(m + 1, 0);
        u64 d = H(m - 1, m - 1);
        for (std::size_t t = 0; t < m; ++t) {
            pm[t + 1] = (pm[t + 1] + P[m - 1][t]) % p;
            pm[t] = (pm[t] + mulmod(p - d % p, P[m - 1][t], p)) % p;
        }
        u64 prod = 1;
        for (std::size_t i = m - 1; i >= 1; --i) {
            // prod = H[i][i-1] * H[i+1][i] * ... * H[m-1][m-2]
            prod = mulmod(prod, H(i, i - 1), p);
            u64 c = mulmod(H(i - 1, m - 1), prod, p);
            if (c != 0) {
                u64 neg = p - c;
                for (std::size_t t = 0; t < i; ++t)
                    pm[t] = (pm[t] + mulmod(neg, P[i - 1][t], p)) % p;
            }
            if (prod == 0) break;
        }
        P[m] = std::move(pm);
    }
    return P[n];
}

}  // namespace

RationalPoly charpoly(const RationalMatrix& m) {
    QCHAB_CHECK(m.rows() == m.cols(), "charpoly: matrix not square");
    const std::size_t n = m.rows();
    if (n == 0) return RationalPoly{{Rat(1)}};

    // Clear denominators: B = D * m is integral; charpoly coefficients map back
    // as c_k(m) = c_k(B) / D^(n-k).
    Int D = 1;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            D = lcm(D, m.at(i, j).get_den());
    std::vector<Int> B(n * n);
    Int maxabs = 1;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Rat scaled = m.at(i, j) * Rat(D);
            QCHAB_CHECK(scaled.get_den() == 1, "charpoly: denominator clearing failed");
            B[i * n + j] = scaled.get_num();
            Int a = abs(B[i * n + j]);
            if (a > maxabs) maxabs = a;
        }

    // |c_{n-k}| <= C(n,k) * k^(k/2) * maxabs^k  (sum of principal k-minors,
    // each bounded by Hadamard).  Take the max over k as a single bound.
    Int bound = 1;
    Int binom = 1;
    for (std::size_t k = 1; k <= n; ++k) {
        binom = binom * Int(n - k + 1) / Int(k);
        Int term = binom;
        Int kk;
        mpz_ui_pow_ui(kk.get_mpz_t(), k, (k + 1) / 2);
        term *= kk;
        Int mk;
        mpz_pow_ui(mk.get_mpz_t(), maxabs.get_mpz_t(), k);
        term *= mk;
        if (term > bound) bound = term;
    }

    // Collect residues until the CRT modulus exceeds 2*bound.
    std::vector<Int> crt_coeff(n + 1, 0);
    Int modulus = 1;
    std::size_t prime_index = 0;
    while (modulus <= 2 * bound) {
        u64 p = nth_modular_prime(prime_index);
        ++prime_index;
        std::vector<u64> hp(n * n);
        for (std::size_t i = 0; i < n * n; ++i) {
            Int r = B[i] % Int((unsigned long)p);
            if (r < 0) r += Int((unsigned long)p);
            hp[i] = r.get_ui();
        }
        std::vector<u64> cp = charpoly_mod_p(std::move(hp), n, p);
        // Incremental CRT with balanced representatives.
        Int pz((unsigned long)p);
        Int minv;
        QCHAB_CHECK(mpz_invert(minv.get_mpz_t(), modulus.get_mpz_t(), pz.get_mpz_t()) != 0,
                    "charpoly: CRT modulus inversion failed");
        Int new_modulus = modulus * pz;
        for (std::size_t k = 0; k <= n; ++k) {
            Int rk((unsigned long)cp[k]);
            Int t = ((rk - crt_coeff[k]) * minv) % pz;
            if (t < 0) t += pz;
            Int x = crt_coeff[k] + modulus * t;
            if (2 * x > new_modulus) x -= new_modulus;
            crt_coeff[k] = x;
        }
        modulus = new_modulus;
    }

    RationalPoly out;
    out.coeffs.resize(n + 1);
    Int dpow = 1;  // D^(n-k), built from k = n downwards
    for (std::size_t k = n + 1; k-- > 0;) {
        out.coeffs[k] = Rat(crt_coeff[k], dpow);
        out.coeffs[k].canonicalize();
        if (k > 0) dpow *= D;
    }
    QCHAB_CHECK(out.coeffs[n] == 1, "charpoly: result not monic");
    return out;
}

}  // namespace qchab::linalg

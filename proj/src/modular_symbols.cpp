#include "qchab/modular_symbols.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "qchab/heilbronn.hpp"

namespace qchab::ms {

namespace {

struct ExtGcd {
    long g, u, v;  // u*a + v*b == g
};

ExtGcd ext_gcd(long a, long b) {
    long old_r = a, r = b;
    long old_u = 1, u = 0;
    long old_v = 0, v = 1;
    while (r != 0) {
        long q = old_r / r;
        long t = old_r - q * r;
        old_r = r;
        r = t;
        t = old_u - q * u;
        old_u = u;
        u = t;
        t = old_v - q * v;
        old_v = v;
        v = t;
    }
    if (old_r < 0) {
        old_r = -old_r;
        old_u = -old_u;
        old_v = -old_v;
    }
    return {old_r, old_u, old_v};
}

// Inverse of a modulo m (m >= 2, gcd(a, m) == 1), in [0, m).
long mod_inverse(long a, long m) {
    a %= m;
    if (a < 0) a += m;
    ExtGcd e = ext_gcd(a, m);
    QCHAB_CHECK(e.g == 1, "mod_inverse of a non-unit");
    long r = e.u % m;
    if (r < 0) r += m;
    return r;
}

std::vector<std::pair<long, int>> factorize(long n) {
    std::vector<std::pair<long, int>> out;
    for (long p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.push_back({p, e});
    }
    if (n > 1) out.push_back({n, 1});
    return out;
}

long euler_phi(long n) {
    long r = n;
    for (const auto& [p, e] : factorize(n)) r = r / p * (p - 1);
    return r;
}

// Sparse row over Q, sorted by column.
using SRow = std::vector<std::pair<std::uint32_t, Rat>>;

// r - f * p, merged; exact zeros dropped.
SRow axpy(const SRow& r, const Rat& f, const SRow& p) {
    SRow out;
    out.reserve(r.size() + p.size());
    std::size_t i = 0, j = 0;
    while (i < r.size() || j < p.size()) {
        if (j == p.size() || (i < r.size() && r[i].first < p[j].first)) {
            out.push_back(r[i++]);
        } else if (i == r.size() || p[j].first < r[i].first) {
            out.push_back({p[j].first, -f * p[j].second});
            ++j;
        } else {
            Rat v = r[i].second - f * p[j].second;
            if (v != 0) out.push_back({r[i].first, std::move(v)});
            ++i;
            ++j;
        }
    }
    return out;
}

// Normalized cusp: q >= 0; infinity is (1, 0); integers are (0, 1); otherwise
// numerator reduced into [0, q) (the translation z -> z + 1 lies in Gamma_0(N),
// so this stays within the cusp's class).
Cusp make_cusp(long p, long q) {
    if (q < 0) {
        p = -p;
        q = -q;
    }
    long g = std::gcd(std::labs(p), q);
    if (g > 1) {
        p /= g;
        q /= g;
    }
    if (q == 0) return {1, 0};
    if (q == 1) return {0, 1};
    p %= q;
    if (p < 0) p += q;
    return {p, q};
}

// s with p*s == 1 (mod q), under the conventions s = 1 for infinity (q = 0)
// and s = 0 for integer cusps (q = 1).
long cusp_s(const Cusp& c) {
    if (c.q == 0) return 1;
    if (c.q == 1) return 0;
    return mod_inverse(c.p, c.q);
}

struct Sl2Lift {
    long a, b, c, d;  // [[a, b], [c, d]], determinant 1
};

// Lift a projective point (c : d) mod N to an SL2(Z) matrix whose bottom row
// is congruent to (c, d) mod N.
Sl2Lift lift_to_sl2(long c, long d, long N) {
    c %= N;
    if (c < 0) c += N;
    d %= N;
    if (d < 0) d += N;
    if (c == 0 && d == 0) {
        QCHAB_CHECK(N == 1, "degenerate projective point at level > 1");
        return {1, 0, 0, 1};
    }
    if (c == 0) c = N;
    if (d == 0) d = N;
    long k = 0;
    while (std::gcd(c, d) != 1) {
        d += N;
        QCHAB_CHECK(++k <= N + 1, "SL2 lift search exceeded its bound");
    }
    ExtGcd e = ext_gcd(d, c);
    QCHAB_CHECK(e.g == 1, "SL2 lift: bottom row not coprime");
    // e.u * d + e.v * c == 1, so [[e.u, -e.v], [c, d]] has determinant 1.
    return {e.u, -e.v, c, d};
}

bool is_prime_small(long p) {
    if (p < 2) return false;
    for (long q = 2; q * q <= p; ++q)
        if (p % q == 0) return false;
    return true;
}

}  // namespace

P1::P1(long N) : N_(N) {
    QCHAB_CHECK(N >= 1, "projective line needs a positive level");
    if (N == 1) {
        reps_ = {{0, 0}};
        table_ = {0};
        return;
    }
    table_.assign(static_cast<std::size_t>(N) * N, -1);
    std::vector<long> units;
    for (long u = 1; u < N; ++u)
        if (std::gcd(u, N) == 1) units.push_back(u);
    for (long c = 0; c < N; ++c)
        for (long d = 0; d < N; ++d) {
            if (table_[static_cast<std::size_t>(c) * N + d] != -1) continue;
            if (std::gcd(std::gcd(c, d), N) != 1) continue;
            // Lexicographically first point of a fresh orbit: canonical rep.
            auto idx = static_cast<std::int32_t>(reps_.size());
            reps_.push_back({c, d});
            for (long u : units) {
                long cc = (u * c) % N, dd = (u * d) % N;
                table_[static_cast<std::size_t>(cc) * N + dd] = idx;
            }
        }
}

long P1::index(long c, long d) const {
    if (N_ == 1) return 0;
    c %= N_;
    if (c < 0) c += N_;
    d %= N_;
    if (d < 0) d += N_;
    return table_[static_cast<std::size_t>(c) * N_ + d];
}

GenusData genus_formula(long N) {
    QCHAB_CHECK(N >= 1, "genus formula needs a positive level");
    GenusData g;
    auto fact = factorize(N);
    long mu = N;
    for (const auto& [p, e] : fact) mu = mu / p * (p + 1);
    g.mu = mu;

    if (N % 4 == 0) {
        g.nu2 = 0;
    } else {
        long nu2 = 1;
        for (const auto& [p, e] : fact) {
            if (p == 2) continue;  // 2 || N contributes a factor 1
            if (p % 4 == 1)
                nu2 *= 2;
            else
                nu2 = 0;
        }
        g.nu2 = nu2;
    }
    if (N % 9 == 0) {
        g.nu3 = 0;
    } else {
        long nu3 = 1;
        for (const auto& [p, e] : fact) {
            if (p == 3) continue;  // 3 || N contributes a factor 1
            if (p % 3 == 1)
                nu3 *= 2;
            else
                nu3 = 0;
        }
        g.nu3 = nu3;
    }
    long nu_inf = 0;
    for (long d = 1; d <= N; ++d)
        if (N % d == 0) nu_inf += euler_phi(std::gcd(d, N / d));
    g.nu_inf = nu_inf;

    Rat genus = Rat(1) + Rat(g.mu, 12) - Rat(g.nu2, 4) - Rat(g.nu3, 3) - Rat(g.nu_inf, 2);
    genus.canonicalize();
    QCHAB_CHECK(genus.get_den() == 1 && genus >= 0, "genus formula must give a nonnegative integer");
    g.genus = static_cast<long>(genus.get_num().get_si());
    return g;
}

long sturm_bound(long N) { return (genus_formula(N).mu + 5) / 6; }

std::vector<long> primes_up_to(long bound) {
    std::vector<long> out;
    if (bound < 2) return out;
    std::vector<char> sieve(static_cast<std::size_t>(bound) + 1, 1);
    for (long p = 2; p <= bound; ++p) {
        if (!sieve[p]) continue;
        out.push_back(p);
        for (long k = p * p; k <= bound; k += p) sieve[k] = 0;
    }
    return out;
}

bool cusps_equivalent(const Cusp& a, const Cusp& b, long N) {
    const long s1 = cusp_s(a), s2 = cusp_s(b);
    const long g = std::gcd(a.q * b.q, N);
    long diff = (s1 * b.q - s2 * a.q) % g;
    return diff == 0;
}

Space::Space(long level) : N_(level), p1_(level) {
    QCHAB_CHECK(level >= 1, "level must be positive");
    build();
}

void Space::build() {
    const std::size_t mu = p1_.size();
    inv_ = genus_formula(N_);
    QCHAB_CHECK(static_cast<long>(mu) == inv_.mu,
                "projective line size disagrees with the index formula");

    // sigma: (c:d) -> (d:-c); tau: (c:d) -> (d:-c-d), of orders 2 and 3.
    std::vector<long> sigma(mu), tau(mu);
    for (std::size_t i = 0; i < mu; ++i) {
        auto [c, d] = p1_.rep(i);
        sigma[i] = p1_.index(d, -c);
        tau[i] = p1_.index(d, -c - d);
        QCHAB_CHECK(sigma[i] >= 0 && tau[i] >= 0, "projective action left the projective line");
    }
    for (std::size_t i = 0; i < mu; ++i) {
        QCHAB_CHECK(sigma[static_cast<std::size_t>(sigma[i])] == static_cast<long>(i),
                    "sigma is not an involution");
        QCHAB_CHECK(tau[static_cast<std::size_t>(tau[static_cast<std::size_t>(tau[i])])] ==
                        static_cast<long>(i),
                    "tau does not have order 3");
    }

    // Stage 1: two-term relations x_i + x_{sigma(i)} = 0.  A sigma-fixed
    // generator is forced to zero; otherwise the pair collapses to one
    // survivor with signs +1 / -1.
    std::vector<long> surv_of(mu, -1);
    std::vector<int> sign_of(mu, 0);
    std::vector<std::size_t> survivors;
    {
        std::vector<char> seen(mu, 0);
        for (std::size_t i = 0; i < mu; ++i) {
            if (seen[i]) continue;
            seen[i] = 1;
            long j = sigma[i];
            if (j == static_cast<long>(i)) continue;  // dead: 2x = 0
            seen[static_cast<std::size_t>(j)] = 1;
            surv_of[i] = static_cast<long>(survivors.size());
            sign_of[i] = 1;
            surv_of[static_cast<std::size_t>(j)] = static_cast<long>(survivors.size());
            sign_of[static_cast<std::size_t>(j)] = -1;
            survivors.push_back(i);
        }
    }
    const std::size_t n1 = survivors.size();

    // Stage 2: three-term relations x_i + x_{tau(i)} + x_{tau^2(i)} = 0,
    // expressed over the survivors and reduced by incremental sparse
    // elimination (row echelon, then back substitution).
    std::vector<SRow> pivot_rows;
    std::vector<long> pivot_of_col(n1, -1);
    {
        std::vector<char> done(mu, 0);
        for (std::size_t i = 0; i < mu; ++i) {
            if (done[i]) continue;
            const long a = static_cast<long>(i);
            const long b = tau[i];
            const long c = tau[static_cast<std::size_t>(b)];
            done[static_cast<std::size_t>(a)] = 1;
            done[static_cast<std::size_t>(b)] = 1;
            done[static_cast<std::size_t>(c)] = 1;
            std::map<long, long> coeff;
            for (long t : {a, b, c})
                if (surv_of[static_cast<std::size_t>(t)] >= 0)
                    coeff[surv_of[static_cast<std::size_t>(t)]] += sign_of[static_cast<std::size_t>(t)];
            SRow row;
            for (const auto& [col, v] : coeff)
                if (v != 0) row.push_back({static_cast<std::uint32_t>(col), Rat(v)});
            while (!row.empty()) {
                const std::uint32_t lead = row.front().first;
                const long pr = pivot_of_col[lead];
                if (pr < 0) {
                    Rat inv = row.front().second;
                    if (inv != 1)
                        for (auto& e : row) e.second /= inv;
                    pivot_of_col[lead] = static_cast<long>(pivot_rows.size());
                    pivot_rows.push_back(std::move(row));
                    break;
                }
                row = axpy(row, row.front().second, pivot_rows[static_cast<std::size_t>(pr)]);
            }
        }
        // Back substitution in decreasing pivot order.  Reduced pivot rows
        // contain no other pivot columns, so a single pass per row suffices.
        std::vector<std::uint32_t> pivot_cols;
        for (std::size_t c = 0; c < n1; ++c)
            if (pivot_of_col[c] >= 0) pivot_cols.push_back(static_cast<std::uint32_t>(c));
        for (auto it = pivot_cols.rbegin(); it != pivot_cols.rend(); ++it) {
            SRow& row = pivot_rows[static_cast<std::size_t>(pivot_of_col[*it])];
            SRow cleaned = row;
            for (std::size_t k = 1; k < row.size(); ++k) {
                const auto [col, v] = row[k];
                if (pivot_of_col[col] >= 0)
                    cleaned = axpy(cleaned, v, pivot_rows[static_cast<std::size_t>(pivot_of_col[col])]);
            }
            row = std::move(cleaned);
        }
    }

    // Quotient basis: the free survivor columns, ascending.
    std::vector<long> free_pos(n1, -1);
    for (std::size_t c = 0; c < n1; ++c) {
        if (pivot_of_col[c] >= 0) continue;
        free_pos[c] = static_cast<long>(section_gen_.size());
        section_gen_.push_back(survivors[c]);
    }
    ambient_ = section_gen_.size();
    QCHAB_CHECK(static_cast<long>(ambient_) == 2 * inv_.genus + inv_.nu_inf - 1,
                "ambient dimension disagrees with 2g + #cusps - 1");

    // Quotient map Q: class of each generator.
    q_ = linalg::RationalMatrix(ambient_, mu);
    for (std::size_t i = 0; i < mu; ++i) {
        if (surv_of[i] < 0) continue;
        const int s = sign_of[i];
        const auto k = static_cast<std::size_t>(surv_of[i]);
        if (pivot_of_col[k] < 0) {
            q_.at(static_cast<std::size_t>(free_pos[k]), i) = s;
        } else {
            const SRow& row = pivot_rows[static_cast<std::size_t>(pivot_of_col[k])];
            QCHAB_CHECK(!row.empty() && row.front().first == k && row.front().second == 1,
                        "malformed reduced pivot row");
            for (std::size_t t = 1; t < row.size(); ++t) {
                const auto& [col, v] = row[t];
                QCHAB_CHECK(free_pos[col] >= 0, "pivot row not fully reduced");
                q_.at(static_cast<std::size_t>(free_pos[col]), i) = Rat(-s) * v;
            }
        }
    }

    // The section is exact: Q at a basis generator is the standard basis vector.
    for (std::size_t j = 0; j < ambient_; ++j)
        for (std::size_t r = 0; r < ambient_; ++r)
            QCHAB_CHECK(q_.at(r, section_gen_[j]) == (r == j ? 1 : 0),
                        "quotient map does not split the section");

    // Full relation check on the quotient map: both defining relations must
    // map to zero, column by column.
    for (std::size_t i = 0; i < mu; ++i) {
        const auto si = static_cast<std::size_t>(sigma[i]);
        const auto ti = static_cast<std::size_t>(tau[i]);
        const auto tti = static_cast<std::size_t>(tau[ti]);
        for (std::size_t r = 0; r < ambient_; ++r) {
            QCHAB_CHECK(q_.at(r, i) + q_.at(r, si) == 0, "two-term relation violated in quotient");
            QCHAB_CHECK(q_.at(r, i) + q_.at(r, ti) + q_.at(r, tti) == 0,
                        "three-term relation violated in quotient");
        }
    }

    // Boundary: generator (c:d) lifts to g in SL2(Z); its symbol spans the
    // geodesic from g(0) to g(infinity), so the boundary is [a/c] - [b/d].
    std::vector<std::pair<long, long>> gen_cusps(mu);  // (class of a/c, class of b/d)
    auto class_of = [&](const Cusp& c) -> long {
        for (std::size_t k = 0; k < cusp_classes_.size(); ++k)
            if (cusps_equivalent(cusp_classes_[k], c, N_)) return static_cast<long>(k);
        cusp_classes_.push_back(c);
        return static_cast<long>(cusp_classes_.size()) - 1;
    };
    for (std::size_t i = 0; i < mu; ++i) {
        auto [c, d] = p1_.rep(i);
        Sl2Lift g = lift_to_sl2(c, d, N_);
        QCHAB_CHECK(g.a * g.d - g.b * g.c == 1, "SL2 lift determinant drift");
        gen_cusps[i] = {class_of(make_cusp(g.a, g.c)), class_of(make_cusp(g.b, g.d))};
    }
    QCHAB_CHECK(static_cast<long>(cusp_classes_.size()) == inv_.nu_inf,
                "cusp class count disagrees with the cusp-number formula");
    const std::size_t ncusp = cusp_classes_.size();
    linalg::RationalMatrix bnd_gen(ncusp, mu);
    for (std::size_t i = 0; i < mu; ++i) {
        bnd_gen.at(static_cast<std::size_t>(gen_cusps[i].first), i) += 1;
        bnd_gen.at(static_cast<std::size_t>(gen_cusps[i].second), i) -= 1;
    }
    boundary_ = linalg::RationalMatrix(ncusp, ambient_);
    for (std::size_t j = 0; j < ambient_; ++j)
        for (std::size_t r = 0; r < ncusp; ++r) boundary_.at(r, j) = bnd_gen.at(r, section_gen_[j]);
    // Well-definedness: the boundary of every generator must factor through
    // the quotient map.
    for (std::size_t i = 0; i < mu; ++i) {
        for (std::size_t r = 0; r < ncusp; ++r) {
            Rat s;
            for (std::size_t j = 0; j < ambient_; ++j)
                if (q_.at(j, i) != 0 && boundary_.at(r, j) != 0) s += boundary_.at(r, j) * q_.at(j, i);
            QCHAB_CHECK(s == bnd_gen.at(r, i), "boundary map does not respect the relations");
        }
    }

    // Star involution from (c:d) -> (-c:d).
    star_ = linalg::RationalMatrix(ambient_, ambient_);
    for (std::size_t j = 0; j < ambient_; ++j) {
        auto [c, d] = p1_.rep(section_gen_[j]);
        long img = p1_.index(-c, d);
        QCHAB_CHECK(img >= 0, "star image left the projective line");
        for (std::size_t r = 0; r < ambient_; ++r) star_.at(r, j) = q_.at(r, static_cast<std::size_t>(img));
    }
    {
        linalg::RationalMatrix sq = star_ * star_;
        QCHAB_CHECK(sq == linalg::RationalMatrix::identity(ambient_), "star is not an involution");
    }
    if (N_ <= 150) {
        // Redundant exact cross-check (cheap at small levels): the star of
        // every generator class agrees with the generator-level star map.
        for (std::size_t i = 0; i < mu; ++i) {
            auto [c, d] = p1_.rep(i);
            const auto img = static_cast<std::size_t>(p1_.index(-c, d));
            for (std::size_t r = 0; r < ambient_; ++r) {
                Rat s;
                for (std::size_t j = 0; j < ambient_; ++j)
                    if (q_.at(j, i) != 0 && star_.at(r, j) != 0) s += star_.at(r, j) * q_.at(j, i);
                QCHAB_CHECK(s == q_.at(r, img), "star does not respect the relations");
            }
        }
    }

    // Cuspidal subspace and its star-fixed part.
    cuspidal_ = linalg::kernel(boundary_);
    QCHAB_CHECK(cuspidal_.dim() % 2 == 0, "cuspidal dimension must be even");
    QCHAB_CHECK(static_cast<long>(cuspidal_.dim()) == 2 * inv_.genus,
                "cuspidal dimension disagrees with twice the genus");
    {
        linalg::RationalMatrix stacked(ncusp + ambient_, ambient_);
        for (std::size_t r = 0; r < ncusp; ++r)
            for (std::size_t j = 0; j < ambient_; ++j) stacked.at(r, j) = boundary_.at(r, j);
        for (std::size_t r = 0; r < ambient_; ++r)
            for (std::size_t j = 0; j < ambient_; ++j)
                stacked.at(ncusp + r, j) = star_.at(r, j) - (r == j ? 1 : 0);
        plus_cuspidal_ = linalg::kernel(stacked);
    }
    QCHAB_CHECK(static_cast<long>(plus_cuspidal_.dim()) == inv_.genus,
                "star-fixed cuspidal dimension disagrees with the genus");

    // Integer-scaled columns of the quotient map for the Hecke fast path:
    // row r of Q times row_den_[r] is integral.
    row_den_.assign(ambient_, 1);
    for (std::size_t r = 0; r < ambient_; ++r) {
        Int l = 1;
        for (std::size_t i = 0; i < mu; ++i) {
            const Int& den = q_.at(r, i).get_den();
            if (den != 1) l = lcm(l, den);
        }
        row_den_[r] = l;
    }
    col_entries_.assign(mu, {});
    for (std::size_t i = 0; i < mu; ++i) {
        for (std::size_t r = 0; r < ambient_; ++r) {
            const Rat& v = q_.at(r, i);
            if (v == 0) continue;
            Int scaled = v.get_num() * (row_den_[r] / v.get_den());
            col_entries_[i].push_back({static_cast<std::uint32_t>(r), std::move(scaled)});
        }
    }
}

const linalg::RationalMatrix& Space::hecke_matrix(long p) {
    auto it = hecke_cache_.find(p);
    if (it != hecke_cache_.end()) return it->second;
    QCHAB_CHECK(is_prime_small(p), "Hecke operators are built at primes only");
    const std::vector<Mat22> family = heilbronn(p);
    linalg::RationalMatrix t(ambient_, ambient_);
    std::vector<Int> acc(ambient_);
    for (std::size_t j = 0; j < ambient_; ++j) {
        for (Int& x : acc) x = 0;
        auto [c, d] = p1_.rep(section_gen_[j]);
        for (const Mat22& h : family) {
            const long cc = c * h.x + d * h.z;
            const long dd = c * h.y + d * h.w;
            const long idx = p1_.index(cc, dd);
            if (idx < 0) {
                // Dropped image: legitimate only for p dividing the level
                // (where the family computes U_p).
                QCHAB_CHECK(N_ % p == 0, "good-prime Hecke image left the projective line");
                continue;
            }
            for (const auto& [r, v] : col_entries_[static_cast<std::size_t>(idx)]) acc[r] += v;
        }
        for (std::size_t r = 0; r < ambient_; ++r) {
            if (acc[r] == 0) continue;
            Rat v(acc[r], row_den_[r]);
            v.canonicalize();
            t.at(r, j) = std::move(v);
        }
    }
    return hecke_cache_.emplace(p, std::move(t)).first->second;
}

linalg::RationalMatrix Space::hecke_on(const linalg::Subspace& w, long p) {
    return linalg::restrict_operator(hecke_matrix(p), w);
}

}  // namespace qchab::ms

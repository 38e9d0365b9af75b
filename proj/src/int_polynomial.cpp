#include "qchab/int_polynomial.hpp"

#include <sstream>

namespace qchab::poly {

void IntPolynomial::normalize() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

IntPolynomial IntPolynomial::monomial(std::size_t k) {
    std::vector<Int> c(k + 1, 0);
    c[k] = 1;
    return IntPolynomial(std::move(c));
}

const Int& IntPolynomial::coeff(std::size_t i) const {
    static const Int zero = 0;
    return i < c_.size() ? c_[i] : zero;
}

const Int& IntPolynomial::leading() const {
    QCHAB_CHECK(!c_.empty(), "leading coefficient of the zero polynomial");
    return c_.back();
}

bool IntPolynomial::operator<(const IntPolynomial& o) const {
    if (c_.size() != o.c_.size()) return c_.size() < o.c_.size();
    for (std::size_t i = c_.size(); i-- > 0;)
        if (c_[i] != o.c_[i]) return c_[i] < o.c_[i];
    return false;
}

IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b) {
    std::vector<Int> c(std::max(a.c_.size(), b.c_.size()), 0);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) + b.coeff(i);
    return IntPolynomial(std::move(c));
}

IntPolynomial operator-(const IntPolynomial& a, const IntPolynomial& b) {
    std::vector<Int> c(std::max(a.c_.size(), b.c_.size()), 0);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) - b.coeff(i);
    return IntPolynomial(std::move(c));
}

IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b) {
    if (a.is_zero() || b.is_zero()) return IntPolynomial();
    std::vector<Int> c(a.c_.size() + b.c_.size() - 1, 0);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
        if (a.c_[i] == 0) continue;
        for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    }
    return IntPolynomial(std::move(c));
}

IntPolynomial IntPolynomial::operator-() const {
    std::vector<Int> c(c_);
    for (Int& x : c) x = -x;
    return IntPolynomial(std::move(c));
}

IntPolynomial IntPolynomial::derivative() const {
    if (c_.size() <= 1) return IntPolynomial();
    std::vector<Int> c(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) c[i - 1] = c_[i] * Int(static_cast<long>(i));
    return IntPolynomial(std::move(c));
}

Int IntPolynomial::content() const {
    Int g = 0;
    for (const Int& x : c_) g = gcd(g, x);
    return g;
}

IntPolynomial IntPolynomial::primitive_part() const {
    if (is_zero()) return IntPolynomial();
    Int g = content();
    if (c_.back() < 0) g = -g;
    std::vector<Int> c(c_);
    for (Int& x : c) x /= g;
    return IntPolynomial(std::move(c));
}

Int IntPolynomial::evaluate(const Int& x) const {
    Int r = 0;
    for (std::size_t i = c_.size(); i-- > 0;) r = r * x + c_[i];
    return r;
}

Rat IntPolynomial::evaluate(const Rat& x) const {
    Rat r = 0;
    for (std::size_t i = c_.size(); i-- > 0;) r = r * x + Rat(c_[i]);
    return r;
}

std::string IntPolynomial::to_string() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = c_.size(); i-- > 0;) {
        if (c_[i] == 0) continue;
        Int a = c_[i];
        if (first) {
            if (a < 0) os << "-";
        } else {
            os << (a < 0 ? " - " : " + ");
        }
        Int m = abs(a);
        if (i == 0 || m != 1) os << m.get_str();
        if (i >= 1) {
            if (m != 1) os << "*";
            os << "x";
            if (i >= 2) os << "^" << i;
        }
        first = false;
    }
    return os.str();
}

IntPolynomial pseudo_rem(const IntPolynomial& a, const IntPolynomial& b) {
    QCHAB_CHECK(!b.is_zero(), "pseudo_rem: division by zero polynomial");
    if (a.degree() < b.degree()) {
        // multiplier is lc(b)^0 = 1 when no reduction happens
        return a;
    }
    const Int& lb = b.leading();
    long e = a.degree() - b.degree() + 1;
    std::vector<Int> r(a.coeffs());
    long dr = a.degree();
    while (dr >= b.degree() && !(dr == -1)) {
        // r = lb*r - lc(r)*x^(dr-db)*b
        Int lr = r[dr];
        for (Int& x : r) x *= lb;
        long shift = dr - b.degree();
        for (long i = 0; i <= b.degree(); ++i) r[shift + i] -= lr * b.coeff(i);
        --e;
        while (dr >= 0 && r[dr] == 0) --dr;
        if (dr < 0) break;
    }
    std::vector<Int> rv;
    if (dr >= 0) rv.assign(r.begin(), r.begin() + dr + 1);
    IntPolynomial rem{std::move(rv)};
    // pad multiplier so the relation is exactly lc(b)^(dega-degb+1) * a = q*b + rem
    if (e > 0 && !rem.is_zero()) {
        Int f;
        mpz_pow_ui(f.get_mpz_t(), lb.get_mpz_t(), static_cast<unsigned long>(e));
        std::vector<Int> c(rem.coeffs());
        for (Int& x : c) x *= f;
        rem = IntPolynomial(std::move(c));
    }
    return rem;
}

IntPolynomial exact_div(const IntPolynomial& a, const IntPolynomial& b) {
    QCHAB_CHECK(!b.is_zero(), "exact_div: division by zero polynomial");
    if (a.is_zero()) return IntPolynomial();
    QCHAB_CHECK(a.degree() >= b.degree(), "exact_div: quotient degree negative");
    // Divide over Q, then demand integrality and zero remainder.
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
    QCHAB_CHECK(dr < 0, "exact_div: nonzero remainder");
    std::vector<Int> qi(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) {
        QCHAB_CHECK(q[i].get_den() == 1, "exact_div: non-integral quotient");
        qi[i] = q[i].get_num();
    }
    return IntPolynomial(std::move(qi));
}

IntPolynomial gcd(const IntPolynomial& a, const IntPolynomial& b) {
    if (a.is_zero()) return b.is_zero() ? IntPolynomial() : b.primitive_part() * IntPolynomial::constant(b.content());
    if (b.is_zero()) return a.primitive_part() * IntPolynomial::constant(a.content());
    Int cg = gcd(a.content(), b.content());
    IntPolynomial g = a.primitive_part();
    IntPolynomial h = b.primitive_part();
    if (g.degree() < h.degree()) std::swap(g, h);
    // primitive polynomial remainder sequence
    while (true) {
        IntPolynomial r = pseudo_rem(g, h);
        if (r.is_zero()) break;
        g = h;
        h = r.primitive_part();
        if (h.degree() == 0) { h = IntPolynomial::constant(1); break; }
    }
    return h * IntPolynomial::constant(cg);
}

IntPolynomial squarefree_part(const IntPolynomial& f) {
    QCHAB_CHECK(!f.is_zero(), "squarefree_part of the zero polynomial");
    if (f.degree() == 0) return IntPolynomial::constant(1);
    IntPolynomial g = gcd(f, f.derivative());
    return exact_div(f.primitive_part(), g.primitive_part()).primitive_part();
}

std::vector<std::pair<IntPolynomial, int>> squarefree_decomposition(const IntPolynomial& f) {
    QCHAB_CHECK(!f.is_zero(), "squarefree decomposition of the zero polynomial");
    std::vector<std::pair<IntPolynomial, int>> out;
    IntPolynomial p = f.primitive_part();
    if (p.degree() == 0) return out;
    // Yun's algorithm
    IntPolynomial dp = p.derivative();
    IntPolynomial a = gcd(p, dp).primitive_part();
    IntPolynomial b = exact_div(p, a);
    IntPolynomial c = exact_div(dp, a);
    IntPolynomial d = c - b.derivative();
    int i = 1;
    while (b.degree() > 0) {
        IntPolynomial s = gcd(b, d).primitive_part();
        if (s.degree() > 0) out.emplace_back(s, i);
        b = exact_div(b, s);
        c = exact_div(d, s);
        d = c - b.derivative();
        ++i;
    }
    return out;
}

namespace {

int sign_of(const Int& x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

}  // namespace

int count_real_roots(const IntPolynomial& f) {
    QCHAB_CHECK(!f.is_zero(), "count_real_roots of the zero polynomial");
    if (f.degree() == 0) return 0;
    {
        IntPolynomial g = gcd(f, f.derivative());
        if (g.degree() > 0)
            throw NonSquarefreeError("count_real_roots requires a squarefree polynomial");
    }
    // Generalized Sturm chain: each remainder is scaled by a positive rational,
    // which preserves all sign variation counts.  Content removal must keep the
    // sign of the polynomial (primitive_part would not: it forces the leading
    // coefficient positive).
    auto shrink = [](const IntPolynomial& p) {
        Int c = p.content();
        if (c <= 1) return p;
        std::vector<Int> v(p.coeffs());
        for (Int& x : v) x /= c;
        return IntPolynomial(std::move(v));
    };
    std::vector<IntPolynomial> chain;
    chain.push_back(shrink(f));
    chain.push_back(shrink(f.derivative()));
    while (chain.back().degree() >= 0 && !chain.back().is_zero()) {
        const IntPolynomial& s0 = chain[chain.size() - 2];
        const IntPolynomial& s1 = chain.back();
        if (s1.degree() == 0) break;
        IntPolynomial r = pseudo_rem(s0, s1);
        if (r.is_zero()) break;
        // pseudo_rem used multiplier lc(s1)^(deg s0 - deg s1 + 1); if that is
        // negative the true remainder has the opposite sign of r.
        long e = s0.degree() - s1.degree() + 1;
        bool mult_negative = (s1.leading() < 0) && (e % 2 == 1);
        IntPolynomial next = mult_negative ? r : -r;
        chain.push_back(shrink(next));
    }
    auto variations = [&](bool at_plus_infinity) {
        int count = 0, prev = 0;
        for (const IntPolynomial& s : chain) {
            if (s.is_zero()) continue;
            int sg = sign_of(s.leading());
            if (!at_plus_infinity && s.degree() % 2 == 1) sg = -sg;
            if (prev != 0 && sg != 0 && sg != prev) ++count;
            if (sg != 0) prev = sg;
        }
        return count;
    };
    return variations(false) - variations(true);
}

FieldClass classify_hecke_field(const IntPolynomial& f) {
    QCHAB_CHECK(f.degree() >= 1, "classify_hecke_field requires degree >= 1");
    const int real = count_real_roots(f);
    const long deg = f.degree();
    if (real == deg) return FieldClass{FieldClass::Kind::TotallyReal, 0};
    if (real == 0) {
        QCHAB_CHECK(deg % 2 == 0, "polynomial with no real root has even degree");
        return FieldClass{FieldClass::Kind::CM, static_cast<int>(deg / 2)};
    }
    throw MixedSignatureError("field has both real and complex places: " + f.to_string());
}

IntPolynomial from_rational_poly(const linalg::RationalPoly& p) {
    std::vector<Int> c(p.coeffs.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        QCHAB_CHECK(p.coeffs[i].get_den() == 1,
                    "expected integer coefficients in rational polynomial");
        c[i] = p.coeffs[i].get_num();
    }
    return IntPolynomial(std::move(c));
}

}  // namespace qchab::poly

#include "qchab/heilbronn.hpp"

#include <cstdlib>

namespace qchab::ms {

namespace {

// Nearest integer to a/b (b != 0), ties rounded away from zero.
long round_nearest(long a, long b) {
    long q = a / b;
    long r = a % b;
    if (r == 0) return q;
    if (2 * std::labs(r) >= std::labs(b)) q += ((a > 0) == (b > 0)) ? 1 : -1;
    return q;
}

}  // namespace

std::vector<Mat22> heilbronn(long p) {
    QCHAB_CHECK(p >= 2, "heilbronn requires p >= 2");
    std::vector<Mat22> out;
    out.push_back({1, 0, 0, p});
    if (p == 2) {
        // The balanced-residue loop below would cover the class of 1 mod 2
        // twice (as r = 1 and r = -1); the determinant-2 family is fixed.
        out.push_back({2, 0, 0, 1});
        out.push_back({2, 1, 0, 1});
        out.push_back({1, 0, 1, 2});
        return out;
    }
    for (long r = -(p - 1) / 2; r <= (p - 1) / 2; ++r) {
        long x1 = p, x2 = -r, y1 = 0, y2 = 1;
        long a = -p, b = r;
        out.push_back({x1, x2, y1, y2});
        while (b != 0) {
            long q = round_nearest(a, b);
            long c = a - b * q;
            a = -b;
            b = c;
            long x3 = q * x2 - x1;
            x1 = x2;
            x2 = x3;
            long y3 = q * y2 - y1;
            y1 = y2;
            y2 = y3;
            out.push_back({x1, x2, y1, y2});
        }
    }
    for (const Mat22& m : out) QCHAB_CHECK(m.det() == p, "heilbronn matrix determinant drift");
    return out;
}

}  // namespace qchab::ms

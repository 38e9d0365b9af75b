#pragma once

#include <vector>

#include "qchab/common.hpp"

namespace qchab::ms {

// 2x2 integer matrix [[x, y], [z, w]].
struct Mat22 {
    long x, y, z, w;
    long det() const { return x * w - y * z; }
    bool operator==(const Mat22&) const = default;
};

// Heilbronn matrices of determinant p (p prime), in Cremona's form: acting on
// Manin symbols on the right, summing a symbol over this family computes the
// Hecke operator T_p (for p not dividing the level) or U_p (for p dividing the
// level, where images that leave the projective line are dropped).
std::vector<Mat22> heilbronn(long p);

}  // namespace qchab::ms

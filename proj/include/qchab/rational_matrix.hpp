#pragma once

#include <cstddef>
#include <vector>

#include "qchab/common.hpp"

namespace qchab::linalg {

// Dense matrix over Q.  Entries are kept canonical (lowest terms, positive
// denominator) by mpq_class arithmetic.
class RationalMatrix {
  public:
    RationalMatrix() : rows_(0), cols_(0) {}
    RationalMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}

    static RationalMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rat& at(std::size_t i, std::size_t j) {
        QCHAB_CHECK(i < rows_ && j < cols_, "matrix index out of range");
        return data_[i * cols_ + j];
    }
    const Rat& at(std::size_t i, std::size_t j) const {
        QCHAB_CHECK(i < rows_ && j < cols_, "matrix index out of range");
        return data_[i * cols_ + j];
    }

    RationalMatrix transpose() const;

    bool operator==(const RationalMatrix& o) const = default;

    friend RationalMatrix operator+(const RationalMatrix& a, const RationalMatrix& b);
    friend RationalMatrix operator-(const RationalMatrix& a, const RationalMatrix& b);
    friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b);
    RationalMatrix operator*(const Rat& c) const;

    bool is_zero() const;

  private:
    std::size_t rows_, cols_;
    std::vector<Rat> data_;
};

struct RrefResult {
    RationalMatrix echelon;          // reduced row echelon form, zero rows trimmed
    std::vector<std::size_t> pivots; // pivot column of each nonzero row, increasing
    std::size_t rank = 0;
};

// Gauss-Jordan over Q.  The reduced echelon form is the canonical representative
// of the row space: rref(rref(m)) == rref(m) for all m.
RrefResult rref(const RationalMatrix& m);

// Subspace of Q^ambient_dim presented by its canonical (reduced-echelon) basis,
// one basis vector per row.  Two Subspace values are equal iff they are the
// same subspace, because the basis is canonical.
class Subspace {
  public:
    // The zero subspace of Q^ambient_dim.
    explicit Subspace(std::size_t ambient_dim);
    // Span of the rows of `spanning` (rows need not be independent).
    explicit Subspace(const RationalMatrix& spanning);

    static Subspace full(std::size_t ambient_dim);

    std::size_t ambient_dim() const { return ambient_dim_; }
    std::size_t dim() const { return basis_.rows(); }
    const RationalMatrix& basis() const { return basis_; }
    const std::vector<std::size_t>& pivots() const { return pivots_; }

    bool operator==(const Subspace& o) const = default;

    // Coordinates of v (a length-ambient_dim column vector, given as a flat
    // vector) with respect to the basis rows; throws NonInvariantSubspace if v
    // does not lie in the subspace.
    std::vector<Rat> coordinates(const std::vector<Rat>& v) const;

    bool contains(const std::vector<Rat>& v) const;

  private:
    std::size_t ambient_dim_;
    RationalMatrix basis_;
    std::vector<std::size_t> pivots_;
};

// Kernel {v : m v = 0} of m acting on column vectors, as a canonical Subspace
// of Q^cols.
Subspace kernel(const RationalMatrix& m);

// Intersection of two subspaces of the same ambient space (Zassenhaus trick).
Subspace intersect(const Subspace& a, const Subspace& b);

// Monic polynomial with rational coefficients, ascending degree order.
struct RationalPoly {
    std::vector<Rat> coeffs;  // coeffs[i] is the coefficient of x^i

    std::size_t degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
    bool operator==(const RationalPoly& o) const = default;
};

// Characteristic polynomial det(x I - m) of a square matrix, computed exactly
// by a multi-modular method: scale to an integer matrix, take Hessenberg-form
// characteristic polynomials modulo enough machine primes to cover a Hadamard
// coefficient bound, then CRT-reconstruct.  Exact for every rational input.
RationalPoly charpoly(const RationalMatrix& m);

// Matrix of the operator a (on column vectors of the ambient space) restricted
// to s, in the coordinates of s's basis.  Column j holds the coordinates of
// a * basis_row_j.  Invariance of s under a is verified exactly; a
// NonInvariantSubspace error is thrown if it fails.
RationalMatrix restrict_operator(const RationalMatrix& a, const Subspace& s);

// a * v for a column vector v given as a flat vector.
std::vector<Rat> matvec(const RationalMatrix& a, const std::vector<Rat>& v);

}  // namespace qchab::linalg

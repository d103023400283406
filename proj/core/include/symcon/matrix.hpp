#pragma once

#include "symcon/expr.hpp"

#include <cstddef>
#include <vector>

namespace symcon {

/// Dense matrix of exact rational-function entries.
class ExprMatrix {
public:
    ExprMatrix() = default;
    ExprMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, Expr::zero()) {}

    static ExprMatrix identity(std::size_t n) {
        ExprMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = Expr::one();
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Expr& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Expr& at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    ExprMatrix operator*(const ExprMatrix& o) const;
    ExprMatrix transpose() const;
    ExprMatrix operator-() const;

    bool operator==(const ExprMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }
    bool operator!=(const ExprMatrix& o) const { return !(*this == o); }

    bool is_identity() const;
    bool is_antisymmetric() const;

    std::vector<Expr> apply(const std::vector<Expr>& v) const; // this * v

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Expr> data_;
};

/// Exact determinant by fraction-free (Bareiss) elimination; divisions along
/// the way are exact in the function field.
Expr determinant(const ExprMatrix& m);

/// Basis of the right null space { v : m v = 0 } over the function field.
/// Forward elimination pivots, per column, on the candidate entry of least
/// total degree; each basis vector has one free component normalized to 1
/// (its pivot index is returned alongside).
struct KernelVector {
    std::vector<Expr> components;
    std::size_t pivot; // index of the component normalized to 1
};
std::vector<KernelVector> kernel_basis(const ExprMatrix& m);

/// Inverse of a nonsingular square matrix; throws std::invalid_argument on a
/// singular input.
ExprMatrix inverse(const ExprMatrix& m);

/// v and w proportional by a nonzero element of the full function field
/// (all cross products v_i w_j - v_j w_i vanish, neither vector zero).
bool proportional_vectors(const std::vector<Expr>& v, const std::vector<Expr>& w);

} // namespace symcon

#include "symcon/matrix.hpp"

#include <optional>
#include <stdexcept>

namespace symcon {

ExprMatrix ExprMatrix::operator*(const ExprMatrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("matrix product shape mismatch");
    ExprMatrix out(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < o.cols_; ++j) {
            Expr acc = Expr::zero();
            for (std::size_t k = 0; k < cols_; ++k) acc += at(i, k) * o.at(k, j);
            out.at(i, j) = acc;
        }
    return out;
}

ExprMatrix ExprMatrix::transpose() const {
    ExprMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out.at(j, i) = at(i, j);
    return out;
}

ExprMatrix ExprMatrix::operator-() const {
    ExprMatrix out(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out.at(i, j) = -at(i, j);
    return out;
}

bool ExprMatrix::is_identity() const {
    if (rows_ != cols_) return false;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) {
            const Expr& e = at(i, j);
            if (i == j ? !e.is_one() : !e.is_zero()) return false;
        }
    return true;
}

bool ExprMatrix::is_antisymmetric() const {
    if (rows_ != cols_) return false;
    for (std::size_t i = 0; i < rows_; ++i) {
        if (!at(i, i).is_zero()) return false;
        for (std::size_t j = i + 1; j < cols_; ++j)
            if (at(i, j) != -at(j, i)) return false;
    }
    return true;
}

std::vector<Expr> ExprMatrix::apply(const std::vector<Expr>& v) const {
    if (v.size() != cols_) throw std::invalid_argument("matrix-vector shape mismatch");
    std::vector<Expr> out(rows_, Expr::zero());
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) out[i] += at(i, k) * v[k];
    return out;
}

Expr determinant(const ExprMatrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("determinant of non-square matrix");
    std::size_t n = m.rows();
    if (n == 0) return Expr::one();
    ExprMatrix w = m;
    Expr prev = Expr::one();
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (w.at(k, k).is_zero()) {
            std::size_t pivot = k;
            for (std::size_t i = k + 1; i < n; ++i)
                if (!w.at(i, k).is_zero()) {
                    pivot = i;
                    break;
                }
            if (pivot == k) return Expr::zero();
            for (std::size_t j = 0; j < n; ++j) std::swap(w.at(k, j), w.at(pivot, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                w.at(i, j) = (w.at(i, j) * w.at(k, k) - w.at(i, k) * w.at(k, j)) / prev;
        prev = w.at(k, k);
    }
    Expr det = w.at(n - 1, n - 1);
    return sign < 0 ? -det : det;
}

namespace {

int entry_weight(const Expr& e) { return e.total_degree(); }

} // namespace

std::vector<KernelVector> kernel_basis(const ExprMatrix& m) {
    std::size_t rows = m.rows(), cols = m.cols();
    ExprMatrix w = m;
    std::vector<std::optional<std::size_t>> pivot_row_of_col(cols);
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        // pivot by least total degree among nonzero candidates
        std::optional<std::size_t> best;
        for (std::size_t r = rank; r < rows; ++r) {
            if (w.at(r, col).is_zero()) continue;
            if (!best || entry_weight(w.at(r, col)) < entry_weight(w.at(*best, col))) best = r;
        }
        if (!best) continue;
        if (*best != rank)
            for (std::size_t j = 0; j < cols; ++j) std::swap(w.at(rank, j), w.at(*best, j));
        Expr inv = Expr::one() / w.at(rank, col);
        for (std::size_t j = col; j < cols; ++j) w.at(rank, j) = w.at(rank, j) * inv;
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == rank || w.at(r, col).is_zero()) continue;
            Expr factor = w.at(r, col);
            for (std::size_t j = col; j < cols; ++j)
                w.at(r, j) = w.at(r, j) - factor * w.at(rank, j);
        }
        pivot_row_of_col[col] = rank;
        ++rank;
    }

    std::vector<KernelVector> basis;
    for (std::size_t free_col = 0; free_col < cols; ++free_col) {
        if (pivot_row_of_col[free_col]) continue;
        KernelVector v{std::vector<Expr>(cols, Expr::zero()), free_col};
        v.components[free_col] = Expr::one();
        for (std::size_t col = 0; col < cols; ++col)
            if (pivot_row_of_col[col])
                v.components[col] = -w.at(*pivot_row_of_col[col], free_col);
        basis.push_back(std::move(v));
    }
    return basis;
}

ExprMatrix inverse(const ExprMatrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("inverse of non-square matrix");
    std::size_t n = m.rows();
    ExprMatrix w = m;
    ExprMatrix inv = ExprMatrix::identity(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::optional<std::size_t> best;
        for (std::size_t r = col; r < n; ++r) {
            if (w.at(r, col).is_zero()) continue;
            if (!best || entry_weight(w.at(r, col)) < entry_weight(w.at(*best, col))) best = r;
        }
        if (!best) throw std::invalid_argument("matrix is singular");
        if (*best != col)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(w.at(col, j), w.at(*best, j));
                std::swap(inv.at(col, j), inv.at(*best, j));
            }
        Expr scale = Expr::one() / w.at(col, col);
        for (std::size_t j = 0; j < n; ++j) {
            w.at(col, j) = w.at(col, j) * scale;
            inv.at(col, j) = inv.at(col, j) * scale;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || w.at(r, col).is_zero()) continue;
            Expr factor = w.at(r, col);
            for (std::size_t j = 0; j < n; ++j) {
                w.at(r, j) = w.at(r, j) - factor * w.at(col, j);
                inv.at(r, j) = inv.at(r, j) - factor * inv.at(col, j);
            }
        }
    }
    return inv;
}

bool proportional_vectors(const std::vector<Expr>& v, const std::vector<Expr>& w) {
    if (v.size() != w.size()) return false;
    bool v_zero = true, w_zero = true;
    for (auto& e : v) v_zero = v_zero && e.is_zero();
    for (auto& e : w) w_zero = w_zero && e.is_zero();
    if (v_zero || w_zero) return false;
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = i + 1; j < v.size(); ++j)
            if (v[i] * w[j] != v[j] * w[i]) return false;
    return true;
}

} // namespace symcon

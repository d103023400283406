#pragma once

#include "symcon/matrix.hpp"

#include <stdexcept>
#include <vector>

namespace symcon {

/// Pairwise brackets {z_i, z_j} over an ordered basis of phase symbols.
struct BracketTable {
    std::vector<Symbol> basis;
    ExprMatrix entries; // antisymmetric

    std::optional<std::size_t> index_of(Symbol s) const {
        for (std::size_t i = 0; i < basis.size(); ++i)
            if (basis[i] == s) return i;
        return std::nullopt;
    }

    const Expr& at(Symbol a, Symbol b) const {
        auto i = index_of(a), j = index_of(b);
        if (!i || !j) throw std::invalid_argument("symbol not in bracket basis");
        return entries.at(*i, *j);
    }

    /// Bilinear extension: {A, B} = sum_ij dA/dz_i {z_i, z_j} dB/dz_j.
    Expr bracket(const Expr& a, const Expr& b) const {
        Expr acc = Expr::zero();
        for (std::size_t i = 0; i < basis.size(); ++i) {
            Expr da = a.derivative(basis[i]);
            if (da.is_zero()) continue;
            for (std::size_t j = 0; j < basis.size(); ++j) {
                const Expr& gij = entries.at(i, j);
                if (gij.is_zero()) continue;
                acc += da * gij * b.derivative(basis[j]);
            }
        }
        return acc;
    }
};

} // namespace symcon

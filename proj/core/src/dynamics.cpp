#include "symcon/dynamics.hpp"

#include <algorithm>
#include <sstream>

namespace symcon {

MotionSystem hamilton_equations(const BracketTable& table, const Expr& hamiltonian) {
    MotionSystem ms{table, hamiltonian, {}};
    std::vector<Expr> grad;
    grad.reserve(table.basis.size());
    for (Symbol s : table.basis) grad.push_back(hamiltonian.derivative(s));
    for (std::size_t i = 0; i < table.basis.size(); ++i) {
        Expr dz = Expr::zero();
        for (std::size_t j = 0; j < table.basis.size(); ++j) {
            const Expr& gij = table.entries.at(i, j);
            if (!gij.is_zero() && !grad[j].is_zero()) dz += gij * grad[j];
        }
        ms.rhs.push_back(dz);
    }
    return ms;
}

namespace {

void enumerate_monomials(const std::vector<Symbol>& symbols, int degree,
                         std::vector<Monomial>& out, std::vector<std::pair<Symbol, int>>& current,
                         std::size_t from, int remaining) {
    if (!current.empty()) out.push_back(Monomial(current));
    if (remaining == 0) return;
    for (std::size_t i = from; i < symbols.size(); ++i) {
        for (int e = 1; e <= remaining; ++e) {
            current.push_back({symbols[i], e});
            enumerate_monomials(symbols, degree, out, current, i + 1, remaining - e);
            current.pop_back();
        }
    }
}

std::vector<Monomial> monomials_up_to(const std::vector<Symbol>& symbols, int degree) {
    std::vector<Monomial> out;
    std::vector<std::pair<Symbol, int>> current;
    enumerate_monomials(symbols, degree, out, current, 0, degree);
    std::sort(out.begin(), out.end(),
              [](const Monomial& a, const Monomial& b) { return Monomial::compare(a, b) > 0; });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool is_variable_symbol(Symbol s, const std::vector<Symbol>& variables) {
    return std::find(variables.begin(), variables.end(), s) != variables.end();
}

/// Split a polynomial into (variable-monomial -> parameter-coefficient) rows.
std::vector<std::pair<Monomial, Expr>> collect_by_variables(const Polynomial& p,
                                                            const std::vector<Symbol>& variables) {
    std::vector<std::pair<Monomial, Expr>> rows;
    for (auto& [mono, coeff] : p.terms()) {
        std::vector<std::pair<Symbol, int>> var_part, par_part;
        for (auto& [s, e] : mono.factors())
            (is_variable_symbol(s, variables) ? var_part : par_part).push_back({s, e});
        Monomial vm(var_part);
        Expr contribution = Expr::from_poly(
            Polynomial::from_terms({{Monomial(par_part), coeff}}));
        bool found = false;
        for (auto& [m, c] : rows)
            if (m == vm) {
                c += contribution;
                found = true;
            }
        if (!found) rows.push_back({vm, contribution});
    }
    return rows;
}

} // namespace

std::vector<Expr> conserved_search(const MotionSystem& ms, int degree, int coefficient_cap) {
    if (degree < 1) return {};
    const std::vector<Symbol>& vars = ms.table.basis;
    std::vector<Monomial> ansatz = monomials_up_to(vars, degree);
    if (static_cast<int>(ansatz.size()) > coefficient_cap)
        throw std::invalid_argument("conserved_search ansatz exceeds the coefficient cap (" +
                                    std::to_string(ansatz.size()) + " > " +
                                    std::to_string(coefficient_cap) + ")");

    // time derivative of each ansatz monomial under the motion system
    std::vector<Expr> derivatives;
    derivatives.reserve(ansatz.size());
    for (const Monomial& mono : ansatz) {
        Expr q = Expr::from_poly(Polynomial::from_terms({{mono, Rational(1)}}));
        Expr dq = Expr::zero();
        for (std::size_t i = 0; i < vars.size(); ++i) {
            Expr d = q.derivative(vars[i]);
            if (!d.is_zero() && !ms.rhs[i].is_zero()) dq += d * ms.rhs[i];
        }
        derivatives.push_back(dq);
    }

    // clear denominators with a common multiple
    Polynomial common_den = Polynomial::constant(1);
    for (const Expr& d : derivatives) {
        Polynomial g = poly_gcd(common_den, d.den());
        common_den = common_den * d.den().exact_div(g);
    }
    std::vector<Polynomial> numerators;
    numerators.reserve(derivatives.size());
    for (const Expr& d : derivatives)
        numerators.push_back(d.num() * common_den.exact_div(d.den()));

    // linear system over the parameter field: one row per variable-monomial
    std::vector<Monomial> row_keys;
    std::vector<std::vector<Expr>> row_entries; // aligned with row_keys; cols = ansatz
    for (std::size_t m = 0; m < numerators.size(); ++m) {
        for (auto& [vm, coeff] : collect_by_variables(numerators[m], vars)) {
            std::size_t row = 0;
            for (; row < row_keys.size(); ++row)
                if (row_keys[row] == vm) break;
            if (row == row_keys.size()) {
                row_keys.push_back(vm);
                row_entries.push_back(std::vector<Expr>(ansatz.size(), Expr::zero()));
            }
            row_entries[row][m] += coeff;
        }
    }

    ExprMatrix system(row_keys.size(), ansatz.size());
    for (std::size_t r = 0; r < row_keys.size(); ++r)
        for (std::size_t c = 0; c < ansatz.size(); ++c) system.at(r, c) = row_entries[r][c];

    std::vector<Expr> conserved;
    for (auto& v : kernel_basis(system)) {
        Expr q = Expr::zero();
        for (std::size_t m = 0; m < ansatz.size(); ++m)
            if (!v.components[m].is_zero())
                q += v.components[m] *
                     Expr::from_poly(Polynomial::from_terms({{ansatz[m], Rational(1)}}));
        conserved.push_back(q);
    }
    return conserved;
}

std::optional<std::vector<Expr>> in_span(const Expr& target, const std::vector<Expr>& basis,
                                         const std::vector<Symbol>& variable_symbols) {
    if (basis.empty()) return std::nullopt;
    // kernel of [basis | -target] with a nonzero last component
    std::vector<Expr> columns(basis.begin(), basis.end());
    columns.push_back(-target);

    std::vector<Monomial> row_keys;
    std::vector<std::vector<Expr>> rows;
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (!columns[c].is_polynomial())
            throw std::invalid_argument("in_span expects polynomial expressions");
        for (auto& [vm, coeff] : collect_by_variables(columns[c].num(), variable_symbols)) {
            std::size_t row = 0;
            for (; row < row_keys.size(); ++row)
                if (row_keys[row] == vm) break;
            if (row == row_keys.size()) {
                row_keys.push_back(vm);
                rows.push_back(std::vector<Expr>(columns.size(), Expr::zero()));
            }
            rows[row][c] += coeff;
        }
    }
    ExprMatrix system(row_keys.size(), columns.size());
    for (std::size_t r = 0; r < row_keys.size(); ++r)
        for (std::size_t c = 0; c < columns.size(); ++c) system.at(r, c) = rows[r][c];

    for (auto& v : kernel_basis(system)) {
        const Expr& last = v.components.back();
        if (last.is_zero()) continue;
        std::vector<Expr> coords;
        for (std::size_t c = 0; c + 1 < v.components.size(); ++c)
            coords.push_back(v.components[c] / last);
        return coords;
    }
    return std::nullopt;
}

ConstraintDecl promote_to_constraint(const Expr& conserved, SymbolTable& table,
                                     const std::string& label) {
    if (conserved.is_zero())
        throw std::invalid_argument("cannot promote the zero expression to a constraint");
    Symbol kappa = table.declare(table.fresh_name("c"), SymbolKind::IntegrationConstant);
    ConstraintDecl decl;
    decl.label = label.empty() ? "gamma_" + kappa.name() : label;
    decl.expr = conserved - Expr::var(kappa);
    decl.origin = ConstraintOrigin::EomDerived;
    return decl;
}

SymmetryTransform symmetry_report(const ZeroMode& nu, const Model& m) {
    SymmetryTransform out;
    Expr contraction = Expr::zero();
    std::vector<Expr> grad = m.potential_gradient();
    for (std::size_t i = 0; i < m.variables.size(); ++i) {
        out.transformation.push_back({m.variables[i], nu.components[i]});
        contraction += nu.components[i] * grad[i];
    }
    out.delta_potential = reduce_mod_chain(contraction, m.chain, m.rewrites);
    return out;
}

// --- oracles -----------------------------------------------------------------

namespace {

std::vector<Symbol> matrix_symbols(const ExprMatrix& m) {
    std::vector<Symbol> out;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            for (Symbol s : m.at(i, j).symbols())
                if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
    std::sort(out.begin(), out.end());
    return out;
}

/// Evaluate every entry at the point; throws PoleError when any entry poles.
std::vector<std::vector<Rational>> eval_matrix(const ExprMatrix& m,
                                               const std::map<Symbol, Rational>& point) {
    std::vector<std::vector<Rational>> out(m.rows(), std::vector<Rational>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m.at(i, j).eval(point);
    return out;
}

std::string describe_point(const std::map<Symbol, Rational>& point) {
    std::ostringstream out;
    bool first = true;
    for (auto& [s, v] : point) {
        out << (first ? "" : ", ") << s.name() << "=" << to_string(v);
        first = false;
    }
    return out.str();
}

template <typename Body>
OracleResult run_trials(const std::string& check, const std::vector<Symbol>& symbols,
                        const OracleOptions& opts, Body body) {
    OracleResult result{check, true, opts.trials, opts.seed, ""};
    RationalSampler sampler(opts.seed, opts.magnitude);
    int budget = opts.pole_budget;
    for (int t = 0; t < opts.trials; ++t) {
        while (true) {
            if (budget-- <= 0)
                throw OracleError("oracle '" + check + "': resample budget exhausted (all points are poles)");
            auto point = sampler.point(symbols);
            try {
                if (!body(point)) {
                    result.passed = false;
                    result.witness = describe_point(point);
                    return result;
                }
                break;
            } catch (const PoleError&) {
                continue; // pole, resample
            }
        }
    }
    return result;
}

} // namespace

OracleResult oracle_inverse(const ExprMatrix& f, const ExprMatrix& finv,
                            const OracleOptions& opts) {
    if (opts.trials < 1) throw std::invalid_argument("oracle needs at least one trial");
    std::vector<Symbol> symbols = matrix_symbols(f);
    for (Symbol s : matrix_symbols(finv))
        if (std::find(symbols.begin(), symbols.end(), s) == symbols.end()) symbols.push_back(s);
    return run_trials("inverse", symbols, opts, [&](const std::map<Symbol, Rational>& point) {
        auto a = eval_matrix(f, point);
        auto b = eval_matrix(finv, point);
        std::size_t n = f.rows();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                Rational acc = 0;
                for (std::size_t k = 0; k < n; ++k) acc += a[i][k] * b[k][j];
                if (acc != (i == j ? Rational(1) : Rational(0))) return false;
            }
        return true;
    });
}

OracleResult oracle_antisymmetry(const ExprMatrix& f, const OracleOptions& opts) {
    if (opts.trials < 1) throw std::invalid_argument("oracle needs at least one trial");
    return run_trials("antisymmetry", matrix_symbols(f), opts,
                      [&](const std::map<Symbol, Rational>& point) {
                          auto a = eval_matrix(f, point);
                          for (std::size_t i = 0; i < f.rows(); ++i)
                              for (std::size_t j = 0; j < f.cols(); ++j)
                                  if (a[i][j] + a[j][i] != 0) return false;
                          return true;
                      });
}

OracleResult oracle_jacobi(const BracketTable& table, const OracleOptions& opts) {
    if (opts.trials < 1) throw std::invalid_argument("oracle needs at least one trial");
    std::size_t n = table.basis.size();
    // d g_jk / d z_l, computed once
    std::vector<ExprMatrix> dg(n, ExprMatrix(n, n));
    for (std::size_t l = 0; l < n; ++l)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                dg[l].at(j, k) = table.entries.at(j, k).derivative(table.basis[l]);

    std::vector<Symbol> symbols = matrix_symbols(table.entries);
    for (Symbol s : table.basis)
        if (std::find(symbols.begin(), symbols.end(), s) == symbols.end()) symbols.push_back(s);

    return run_trials("jacobi", symbols, opts, [&](const std::map<Symbol, Rational>& point) {
        auto g = eval_matrix(table.entries, point);
        std::vector<std::vector<std::vector<Rational>>> d(n);
        for (std::size_t l = 0; l < n; ++l) d[l] = eval_matrix(dg[l], point);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                for (std::size_t k = j + 1; k < n; ++k) {
                    Rational acc = 0;
                    for (std::size_t l = 0; l < n; ++l)
                        acc += g[i][l] * d[l][j][k] + g[j][l] * d[l][k][i] + g[k][l] * d[l][i][j];
                    if (acc != 0) return false;
                }
        return true;
    });
}

OracleResult oracle_determinant(const ExprMatrix& f, const Expr& det, const OracleOptions& opts) {
    if (opts.trials < 1) throw std::invalid_argument("oracle needs at least one trial");
    std::vector<Symbol> symbols = matrix_symbols(f);
    for (Symbol s : det.symbols())
        if (std::find(symbols.begin(), symbols.end(), s) == symbols.end()) symbols.push_back(s);
    return run_trials("determinant", symbols, opts, [&](const std::map<Symbol, Rational>& point) {
        auto a = eval_matrix(f, point);
        std::size_t n = f.rows();
        // plain fraction elimination on rationals
        Rational det_num = 1;
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t pivot = k;
            while (pivot < n && a[pivot][k] == 0) ++pivot;
            if (pivot == n) {
                det_num = 0;
                break;
            }
            if (pivot != k) {
                std::swap(a[pivot], a[k]);
                det_num = -det_num;
            }
            det_num *= a[k][k];
            for (std::size_t i = k + 1; i < n; ++i) {
                Rational factor = a[i][k] / a[k][k];
                for (std::size_t j = k; j < n; ++j) a[i][j] -= factor * a[k][j];
            }
        }
        return det_num == det.eval(point);
    });
}

} // namespace symcon

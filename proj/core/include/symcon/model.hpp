#pragma once

#include "symcon/expr.hpp"
#include "symcon/parser.hpp"
#include "symcon/rewrite.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace symcon {

enum class ConstraintOrigin { Primary, AdHoc, ZeroMode, EomDerived, GaugeFixing };

std::string to_string(ConstraintOrigin origin);

struct ConstraintDecl {
    std::string label;
    Expr expr;
    ConstraintOrigin origin = ConstraintOrigin::AdHoc;
    int level = -1;                      // iteration that produced a zero-mode constraint
    std::optional<Symbol> solved_for;    // variable used when strongly imposing
    std::optional<Symbol> multiplier;    // velocity multiplier once injected
};

/// Second-order-Lagrangian input for the Dirac engine; velocities are the
/// auto-declared `<coordinate>_dot` symbols.
struct LagrangianSpec {
    std::vector<std::pair<Symbol, Symbol>> pairs; // (coordinate, momentum)
    std::vector<Symbol> velocities;               // aligned with pairs
    Expr lagrangian;
};

/// Direct Hamiltonian input for the Dirac engine (used where the Legendre
/// scan does not apply, e.g. a square-root Lagrangian handled by hand).
struct DiracSpec {
    std::vector<std::pair<Symbol, Symbol>> pairs;
    Expr hamiltonian;
    std::vector<std::string> primary_labels; // labels into declared constraints
};

struct ModelOptions {
    int max_level = 10;
    int conserved_degree = 2;
    std::optional<Symbol> time; // explicit-time parameter for gauge fixings
};

struct Diagnostic {
    std::string message;
    std::string where;
};

struct ModelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A first-order model: ordered symplectic variables xi, one-form A, and
/// potential V, i.e. L = sum_a A_a(xi) xi_a' - V(xi). Declared primary and
/// ad-hoc constraints are already injected into the kinetic sector (each
/// through a fresh velocity multiplier); gauge fixings stay pending until an
/// engine decides to apply them. Immutable after validation; extension
/// returns a new value.
struct Model {
    std::string name;
    std::shared_ptr<SymbolTable> table;

    std::vector<Symbol> variables; // current xi, multipliers included
    std::vector<Expr> one_form;    // A, aligned with variables
    Expr potential;                // V

    std::vector<Symbol> declared_variables; // [variables] as written
    std::vector<Symbol> parameters;

    std::vector<ConstraintDecl> chain;              // injected, in order
    std::vector<ConstraintDecl> pending_gauge;      // declared gauge fixings, not yet injected
    std::vector<ConstraintDecl> declared_constraints; // everything from [constraints]

    RewriteSystem rewrites;
    ModelOptions options;

    std::optional<LagrangianSpec> lagrangian;
    std::optional<DiracSpec> dirac_input;

    std::size_t dim() const { return variables.size(); }
    std::optional<std::size_t> index_of(Symbol s) const {
        for (std::size_t i = 0; i < variables.size(); ++i)
            if (variables[i] == s) return i;
        return std::nullopt;
    }
    std::vector<Expr> potential_gradient() const {
        std::vector<Expr> g;
        g.reserve(variables.size());
        for (Symbol s : variables) g.push_back(potential.derivative(s));
        return g;
    }
};

Model parse_model(const std::string& text, const std::string& name = "model");
Model parse_model_file(const std::string& path);

std::vector<Diagnostic> validate_model(const Model& m);

/// New model with one fresh velocity multiplier appended to xi and the
/// one-form extended by the constraint expression; the potential is
/// untouched. Throws ModelError for a zero constraint or one proportional
/// (parameter-field scale) to an existing chain member.
Model extend_with_constraint(const Model& m, ConstraintDecl c);

/// Canonical model-file text; parse(pretty_print(parse(text))) == parse(text).
std::string pretty_print(const Model& m);

/// Stable structural fingerprint used to compare models across tables.
std::string model_signature(const Model& m);

// --- shared constraint-reduction helpers -----------------------------------

/// Solution of a constraint that is linear in s: c = b*s + g with b free of
/// s, giving s = -g/b. Empty when c is not linear in s.
std::optional<Expr> solve_linear(const Expr& c, Symbol s);

/// Elimination variable for a constraint without a declared solved_for:
/// prefers coordinate kind, then momentum, later xi positions first, and
/// requires a linear occurrence with a parameter-only nonzero coefficient.
std::optional<Symbol> pick_solve_symbol(const Expr& c, const std::vector<Symbol>& order);

/// True when e vanishes weakly: zero after rewriting, after substituting
/// every chain member with a declared solved_for, or a polynomial multiple
/// of a single chain member.
bool reduces_to_zero_mod_chain(const Expr& e, const std::vector<ConstraintDecl>& chain,
                               const RewriteSystem& rewrites);

/// e rewritten and with all solved chain members substituted (the reduction
/// half of reduces_to_zero_mod_chain, kept for reporting).
Expr reduce_mod_chain(const Expr& e, const std::vector<ConstraintDecl>& chain,
                      const RewriteSystem& rewrites);

} // namespace symcon

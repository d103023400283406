#pragma once

#include "symcon/bracket.hpp"
#include "symcon/symplectic.hpp"

#include <optional>
#include <random>
#include <string>
#include <vector>

namespace symcon {

struct MotionSystem {
    BracketTable table;
    Expr hamiltonian;
    std::vector<Expr> rhs; // dz_i/dt, aligned with table.basis
};

/// dz/dt = {z, H} under the table's bilinear extension.
MotionSystem hamilton_equations(const BracketTable& table, const Expr& hamiltonian);

/// Basis of polynomial conserved quantities of total degree <= degree over
/// the system's basis symbols, with coefficients in the parameter field;
/// constants are excluded. Throws when the ansatz exceeds coefficient_cap.
std::vector<Expr> conserved_search(const MotionSystem& ms, int degree, int coefficient_cap = 200);

/// Coordinates of target in the span of the basis over the parameter field,
/// or nullopt when it is not a member.
std::optional<std::vector<Expr>> in_span(const Expr& target, const std::vector<Expr>& basis,
                                         const std::vector<Symbol>& variable_symbols);

/// Gamma = Q - kappa with kappa a fresh integration constant.
ConstraintDecl promote_to_constraint(const Expr& conserved, SymbolTable& table,
                                     const std::string& label = "");

struct SymmetryTransform {
    std::vector<std::pair<Symbol, Expr>> transformation; // delta xi = eps * nu
    Expr delta_potential;                                // weakly reduced
};

/// delta xi = eps nu for a symmetry zero-mode, plus the potential variation.
SymmetryTransform symmetry_report(const ZeroMode& nu, const Model& m);

// --- seeded rational sampling and numeric oracles ---------------------------

/// Reproducible rational points with numerators and denominators drawn from
/// [-magnitude, magnitude] (denominators positive).
class RationalSampler {
public:
    explicit RationalSampler(unsigned seed, int magnitude = 97)
        : rng_(seed), magnitude_(magnitude) {}

    Rational next() {
        std::uniform_int_distribution<int> num(-magnitude_, magnitude_);
        std::uniform_int_distribution<int> den(1, magnitude_);
        return Rational(num(rng_), den(rng_));
    }

    std::map<Symbol, Rational> point(const std::vector<Symbol>& symbols) {
        std::map<Symbol, Rational> out;
        for (Symbol s : symbols) out[s] = next();
        return out;
    }

private:
    std::mt19937_64 rng_;
    int magnitude_;
};

struct OracleOptions {
    int trials = 10;
    unsigned seed = 1;
    int magnitude = 97;
    int pole_budget = 200; // resamples allowed before giving up
};

struct OracleResult {
    std::string check;
    bool passed = false;
    int trials = 0;
    unsigned seed = 0;
    std::string witness; // failing point, empty on success
};

struct OracleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Exact evaluation of f * finv = identity at seeded rational points.
OracleResult oracle_inverse(const ExprMatrix& f, const ExprMatrix& finv,
                            const OracleOptions& opts = {});
/// f(x) + f(x)^T = 0 at seeded rational points.
OracleResult oracle_antisymmetry(const ExprMatrix& f, const OracleOptions& opts = {});
/// Jacobi identity of a bracket table at seeded rational points.
OracleResult oracle_jacobi(const BracketTable& table, const OracleOptions& opts = {});
/// Symbolic determinant against fraction-free numeric elimination of the
/// evaluated matrix.
OracleResult oracle_determinant(const ExprMatrix& f, const Expr& det,
                                const OracleOptions& opts = {});

} // namespace symcon

#pragma once

#include "symcon/bracket.hpp"
#include "symcon/symplectic.hpp"

#include <optional>
#include <string>
#include <vector>

namespace symcon {

/// Canonical pairs (coordinate, momentum); multipliers ride along as
/// coordinates with their own conjugate momenta.
struct PhaseSpace {
    std::vector<std::pair<Symbol, Symbol>> pairs;

    /// Coordinates in pair order, then momenta in pair order.
    std::vector<Symbol> basis() const {
        std::vector<Symbol> out;
        for (auto& [q, p] : pairs) out.push_back(q);
        for (auto& [q, p] : pairs) out.push_back(p);
        return out;
    }
};

/// sum over pairs of dA/dq dB/dp - dA/dp dB/dq.
Expr poisson(const Expr& a, const Expr& b, const PhaseSpace& ps);

/// Canonical Poisson table over the phase-space basis.
BracketTable poisson_table(const PhaseSpace& ps);

struct LegendreResult {
    Expr canonical_hamiltonian;
    std::vector<ConstraintDecl> primaries;                // origin Primary
    std::vector<std::pair<Symbol, Expr>> velocity_solutions;
    std::vector<std::pair<Symbol, Expr>> momentum_bindings; // momentum -> solved value
};

/// Momenta and primary constraints of a second-order Lagrangian: velocities
/// solvable from p = dL/dv are eliminated from H = sum p v - L; velocity-free
/// momentum relations become primary constraints.
LegendreResult legendre_scan(const Expr& lagrangian, const PhaseSpace& ps,
                             const std::vector<Symbol>& velocities);

struct ConsistencyStep {
    std::string member;
    Expr reduced_derivative;
    std::string disposition; // "closes" | "secondary <label>" | "fixes multiplier" | "inconsistent"
};

struct ConsistencyResult {
    std::vector<ConstraintDecl> chain; // primaries first, then secondaries in order
    std::vector<ConsistencyStep> trace;
    bool inconsistent = false;
    bool hit_level_limit = false;
};

/// Iterate dphi/dt = dphi/dt_explicit + {phi, H_c} reduced modulo the chain;
/// nonzero results append secondaries, u-dependent conditions are recorded as
/// multiplier relations.
ConsistencyResult consistency_chain(const Expr& hamiltonian,
                                    const std::vector<ConstraintDecl>& primaries,
                                    const PhaseSpace& ps, const RewriteSystem& rewrites,
                                    int max_level, std::optional<Symbol> time = std::nullopt);

struct Classification {
    ExprMatrix c_matrix;                 // {phi_i, phi_j} over the chain
    std::vector<std::size_t> second_class;
    std::vector<std::size_t> first_class;
};

/// Split the chain by pairing off a maximal nonsingular antisymmetric block
/// of the constraint-bracket matrix (Schur-complement sweep); what cannot be
/// paired is first class.
Classification classify(const std::vector<ConstraintDecl>& chain, const PhaseSpace& ps);

/// {A,B}_D = {A,B} - {A,phi_i} (C^-1)_ij {phi_j,B} over the second-class
/// subset, tabulated for all basis pairs. An empty subset returns the
/// Poisson table unchanged. Throws on a singular restricted matrix.
BracketTable dirac_bracket_table(const std::vector<ConstraintDecl>& second_class,
                                 const PhaseSpace& ps, const std::vector<Symbol>& basis);

/// Dirac bracket of two expressions with respect to a second-class subset.
Expr dirac_bracket(const Expr& a, const Expr& b, const std::vector<ConstraintDecl>& second_class,
                   const PhaseSpace& ps);

struct GeneratorReport {
    std::vector<std::pair<Symbol, Expr>> transformation; // delta z = eps {z, c}_D
    Expr delta_hamiltonian;
};

/// Infinitesimal transformation generated by a first-class constraint,
/// computed with Dirac brackets so the second-class surface is respected.
GeneratorReport first_class_generator(const Expr& c, const PhaseSpace& ps,
                                      const std::vector<ConstraintDecl>& second_class,
                                      const std::vector<Symbol>& variables, const Expr& hamiltonian);

/// Full Dirac analysis of a model (needs a [lagrangian] or [dirac] section);
/// declared gauge fixings join the chain after the consistency sweep.
AnalysisReport run_dirac(const Model& m, const RunOptions& opts = {});

/// Momentum bindings of the run (primary constraints solved for their
/// momenta), used to map Dirac-side constraints into the symplectic space.
std::vector<std::pair<Symbol, Expr>> dirac_momentum_bindings(const Model& m);

} // namespace symcon

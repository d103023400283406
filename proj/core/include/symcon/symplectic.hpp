#pragma once

#include "symcon/bracket.hpp"
#include "symcon/matrix.hpp"
#include "symcon/model.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace symcon {

/// Antisymmetric two-form f_ab = dA_b/dxi_a - dA_a/dxi_b over the model's
/// symplectic variables.
struct SymplecticMatrix {
    std::vector<Symbol> basis;
    ExprMatrix entries;

    std::size_t dim() const { return basis.size(); }
};

SymplecticMatrix build_f(const Model& m);

struct ZeroMode {
    std::vector<Expr> components;
    std::size_t pivot; // component normalized to 1
};

std::vector<ZeroMode> zero_modes(const SymplecticMatrix& f);

/// Contraction of a kernel mode with the potential gradient, sign-normalized;
/// nullopt when the contraction vanishes weakly (modulo chain and rewrites),
/// the symmetry signal.
std::optional<Expr> generate_constraint(const ZeroMode& nu, const Model& m);

bool is_new_constraint(const Expr& c, const std::vector<ConstraintDecl>& chain,
                       const RewriteSystem& rewrites);

/// Sign convention for generated constraints: the graded-lex leading
/// momentum-bearing monomial (falling back to the overall leading term)
/// gets a positive coefficient.
Expr normalize_constraint_sign(const Expr& c);

struct ImposedRelation {
    std::string label;
    Expr expr;
    std::string how; // substitution / rewrite / reduction / side relation
};

struct ImposeResult {
    Model reduced;
    Expr hamiltonian;
    std::vector<ImposedRelation> imposed;
    RewriteSystem rewrites; // active rules, including ones derived here
};

/// Set every chain constraint strongly to zero in the first-order Lagrangian:
/// kinetic multiplier terms are dropped, solvable constraints eliminate their
/// variable from the potential (quadratic ones through a rewrite rule plus a
/// chosen branch sign), and the reduced potential is the Hamiltonian.
ImposeResult strongly_impose(const Model& m, const std::vector<ConstraintDecl>& chain,
                             bool check_nonsingular = true);

enum class VerdictKind { Brackets, Symmetry, LevelLimit, Inconsistent };

std::string to_string(VerdictKind kind);

struct SymmetryInfo {
    ZeroMode generator;
    std::vector<std::pair<Symbol, Expr>> transformation; // delta xi = eps * component
    Expr delta_potential;
};

struct Verdict {
    VerdictKind kind;
    std::optional<BracketTable> brackets;
    std::optional<Expr> hamiltonian;
    std::vector<ImposedRelation> imposed;
    std::vector<RewriteRule> rewrites;
    std::map<std::string, int> branch_signs;
    std::optional<SymmetryInfo> symmetry;
    std::string note;
};

struct CandidateRecord {
    std::vector<Expr> mode;
    Expr contraction;         // reduced form for display
    std::optional<Expr> kept; // normalized constraint when new
    std::string disposition;  // "new" | "known" | "zero"
};

struct LevelRecord {
    int level;  // iteration index, contiguous from 0
    int stage;  // constraints currently in the kinetic sector
    std::vector<Symbol> variables;
    std::vector<Expr> one_form;
    Expr potential;
    SymplecticMatrix f;
    Expr det;
    bool singular;
    bool parity_odd;
    std::vector<ZeroMode> modes;
    std::vector<CandidateRecord> candidates;
    std::string action;
};

struct AnalysisReport {
    std::string algorithm; // "bw" | "mbw" | "dirac"
    std::string model_name;
    std::vector<LevelRecord> levels;
    Verdict verdict;
    std::vector<ConstraintDecl> chain;
    std::vector<std::string> warnings;
    Model final_model; // state at the terminal level (keeps the table alive)

    // filled by the Dirac engine only
    std::optional<ExprMatrix> dirac_matrix;
    std::vector<std::pair<std::string, std::string>> classification;

    bool terminal_ok() const {
        return verdict.kind == VerdictKind::Brackets || verdict.kind == VerdictKind::Symmetry;
    }
};

struct RunOptions {
    std::optional<int> max_level; // overrides the model option
};

/// Modified iteration: every constraint enters the kinetic sector through a
/// velocity multiplier and the potential is never reduced between levels;
/// at a nonsingular level the constraints are strongly set to zero and the
/// inverse two-form supplies the generalized brackets.
AnalysisReport run_modified_bw(const Model& m, const RunOptions& opts = {});

/// Original iteration: identical loop, but each constraint is set strongly
/// to zero in the symplectic potential as soon as it is generated, and
/// variables that drop out entirely are pruned.
AnalysisReport run_classic_bw(const Model& m, const RunOptions& opts = {});

} // namespace symcon

#include "symcon/symplectic.hpp"

#include <algorithm>
#include <sstream>

namespace symcon {

std::string to_string(VerdictKind kind) {
    switch (kind) {
        case VerdictKind::Brackets: return "brackets";
        case VerdictKind::Symmetry: return "symmetry";
        case VerdictKind::LevelLimit: return "level-limit";
        case VerdictKind::Inconsistent: return "inconsistent";
    }
    return "?";
}

SymplecticMatrix build_f(const Model& m) {
    std::size_t n = m.dim();
    SymplecticMatrix f{m.variables, ExprMatrix(n, n)};
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b) {
            Expr e = m.one_form[b].derivative(m.variables[a]) -
                     m.one_form[a].derivative(m.variables[b]);
            f.entries.at(a, b) = e;
            f.entries.at(b, a) = -e;
        }
    return f;
}

std::vector<ZeroMode> zero_modes(const SymplecticMatrix& f) {
    std::vector<ZeroMode> out;
    for (auto& v : kernel_basis(f.entries)) out.push_back({v.components, v.pivot});
    return out;
}

Expr normalize_constraint_sign(const Expr& c) {
    if (c.is_zero()) return c;
    for (auto& [m, coeff] : c.num().terms()) {
        bool has_momentum = false;
        for (auto& [s, e] : m.factors()) has_momentum = has_momentum || s.kind() == SymbolKind::Momentum;
        if (has_momentum) return coeff < 0 ? -c : c;
    }
    return c.num().leading_coefficient() < 0 ? -c : c;
}

std::optional<Expr> generate_constraint(const ZeroMode& nu, const Model& m) {
    Expr contraction = Expr::zero();
    std::vector<Expr> grad = m.potential_gradient();
    for (std::size_t i = 0; i < grad.size(); ++i) contraction += nu.components[i] * grad[i];
    if (reduces_to_zero_mod_chain(contraction, m.chain, m.rewrites)) return std::nullopt;
    return normalize_constraint_sign(contraction);
}

bool is_new_constraint(const Expr& c, const std::vector<ConstraintDecl>& chain,
                       const RewriteSystem& rewrites) {
    return !reduces_to_zero_mod_chain(c, chain, rewrites);
}

namespace {

bool parameter_only(const Expr& e) {
    for (Symbol s : e.symbols())
        if (s.kind() != SymbolKind::Parameter && s.kind() != SymbolKind::IntegrationConstant)
            return false;
    return true;
}

/// Reduce the potential by one constraint: substitution when a solve symbol
/// exists, otherwise a graded-lex remainder when that is meaningful. Returns
/// a description of what happened and commits an auto-picked solve symbol
/// into the declaration.
std::string reduce_potential_by(Model& m, ConstraintDecl& decl) {
    std::optional<Symbol> s = decl.solved_for;
    if (!s) {
        s = pick_solve_symbol(decl.expr, m.variables);
        if (s) decl.solved_for = s;
    }
    if (s && decl.expr.num().degree_in(*s) == 1) {
        auto sol = solve_linear(decl.expr, *s);
        if (sol) {
            m.potential = m.potential.substitute(*s, *sol);
            return "substituted " + s->name() + " = " + sol->str();
        }
    }
    if (s && decl.expr.num().degree_in(*s) == 2 &&
        decl.expr.num().coefficient_of(*s, 1).is_zero()) {
        Polynomial alpha = decl.expr.num().coefficient_of(*s, 2);
        Polynomial gamma = decl.expr.num().coefficient_of(*s, 0);
        RewriteSystem local;
        local.add_rule(*s, 2, Expr::from_poly(-gamma) / Expr::from_poly(alpha));
        m.potential = local.reduce(m.potential);
        return "reduced by " + s->name() + "^2 rewrite";
    }
    if (decl.expr.is_polynomial() && parameter_only(Expr::from_poly(m.potential.den()))) {
        Polynomial reduced = m.potential.num().reduce_by(decl.expr.num());
        m.potential = Expr::from_poly(reduced) / Expr::from_poly(m.potential.den());
        return "reduced potential modulo " + decl.label;
    }
    return "kept as side relation";
}

/// Drop variables that occur nowhere: zero one-form entry, absent from the
/// potential and from every other one-form entry. The classic iteration
/// needs this after a substitution removes a variable's last occurrence.
void prune_inert_variables(Model& m) {
    for (std::size_t i = m.variables.size(); i-- > 0;) {
        Symbol s = m.variables[i];
        bool is_chain_multiplier = false;
        for (auto& c : m.chain) is_chain_multiplier = is_chain_multiplier || c.multiplier == s;
        if (is_chain_multiplier) continue;
        if (!m.one_form[i].is_zero()) continue;
        if (m.potential.contains(s)) continue;
        bool appears = false;
        for (std::size_t j = 0; j < m.one_form.size(); ++j)
            if (j != i && m.one_form[j].contains(s)) appears = true;
        if (appears) continue;
        m.variables.erase(m.variables.begin() + i);
        m.one_form.erase(m.one_form.begin() + i);
    }
}

} // namespace

ImposeResult strongly_impose(const Model& m, const std::vector<ConstraintDecl>& chain,
                             bool check_nonsingular) {
    if (check_nonsingular && determinant(build_f(m).entries).is_zero())
        throw ModelError("strong imposition requires a nonsingular symplectic matrix");

    ImposeResult result{m, Expr::zero(), {}, m.rewrites};
    Model& work = result.reduced;
    std::vector<ConstraintDecl> pending(chain.begin(), chain.end());

    for (std::size_t k = 0; k < pending.size(); ++k) {
        ConstraintDecl& member = pending[k];
        std::optional<Symbol> s = member.solved_for;
        if (!s) s = pick_solve_symbol(member.expr, work.variables);

        if (s && member.expr.num().degree_in(*s) == 1 && !member.expr.den().contains(*s)) {
            auto sol = solve_linear(member.expr, *s);
            if (!sol)
                throw ModelError("constraint '" + member.label + "' not solvable for " + s->name());
            auto idx = work.index_of(*s);
            if (idx) {
                Expr a_s = work.one_form[*idx].substitute(*s, *sol);
                if (!a_s.is_zero()) {
                    for (std::size_t b = 0; b < work.variables.size(); ++b) {
                        if (b == *idx) continue;
                        Expr dgdb = sol->derivative(work.variables[b]);
                        if (!dgdb.is_zero()) work.one_form[b] += a_s * dgdb;
                    }
                    if (work.options.time) {
                        Expr dgdt = sol->derivative(*work.options.time);
                        if (!dgdt.is_zero()) work.potential -= a_s * dgdt;
                    }
                }
                work.variables.erase(work.variables.begin() + *idx);
                work.one_form.erase(work.one_form.begin() + *idx);
            }
            work.potential = work.potential.substitute(*s, *sol);
            for (std::size_t b = 0; b < work.one_form.size(); ++b)
                work.one_form[b] = work.one_form[b].substitute(*s, *sol);
            for (std::size_t j = k + 1; j < pending.size(); ++j)
                pending[j].expr = pending[j].expr.substitute(*s, *sol);
            result.imposed.push_back(
                {member.label, member.expr, "substituted " + s->name() + " = " + sol->str()});
            continue;
        }

        if (s && member.expr.num().degree_in(*s) == 2 &&
            member.expr.num().coefficient_of(*s, 1).is_zero() &&
            !member.expr.den().contains(*s)) {
            if (!result.rewrites.branch(*s))
                throw ModelError("branch sign required for '" + s->name() +
                                 "' but not chosen (set branch." + s->name() + " in [options])");
            Polynomial alpha = member.expr.num().coefficient_of(*s, 2);
            Polynomial gamma = member.expr.num().coefficient_of(*s, 0);
            Expr replacement = Expr::from_poly(-gamma) / Expr::from_poly(alpha);
            result.rewrites.add_rule(*s, 2, replacement);
            result.imposed.push_back({member.label, member.expr,
                                      "rewrite " + s->name() + "^2 -> " + replacement.str() +
                                          ", branch " +
                                          (*result.rewrites.branch(*s) > 0 ? "+" : "-")});
            continue;
        }

        if (member.solved_for)
            throw ModelError("constraint '" + member.label + "' declared solved_for=" +
                             member.solved_for->name() + " is not linearly or quadratically solvable");

        // no solve symbol: polynomial remainder when meaningful, else a side relation
        if (member.expr.is_polynomial() &&
            parameter_only(Expr::from_poly(work.potential.den()))) {
            Polynomial reduced = work.potential.num().reduce_by(member.expr.num());
            bool changed = reduced != work.potential.num();
            work.potential = Expr::from_poly(reduced) / Expr::from_poly(work.potential.den());
            result.imposed.push_back({member.label, member.expr,
                                      changed ? "reduced potential modulo " + member.label
                                              : "side relation (potential untouched)"});
        } else {
            result.imposed.push_back({member.label, member.expr, "side relation"});
        }
    }

    // kinetic constraint terms are dropped with their multipliers
    for (std::size_t i = work.variables.size(); i-- > 0;) {
        Symbol s = work.variables[i];
        bool is_multiplier = false;
        for (auto& c : chain) is_multiplier = is_multiplier || c.multiplier == s;
        if (is_multiplier) {
            work.variables.erase(work.variables.begin() + i);
            work.one_form.erase(work.one_form.begin() + i);
        }
    }
    work.chain.clear();
    work.potential = result.rewrites.reduce(work.potential);
    work.rewrites = result.rewrites;
    result.hamiltonian = work.potential;
    return result;
}

namespace {

struct EngineConfig {
    bool reduce_potential; // classic BW reduces V as constraints arrive
    std::string algorithm;
};

AnalysisReport run_engine(const Model& model, const RunOptions& opts, const EngineConfig& cfg) {
    {
        auto diagnostics = validate_model(model);
        if (!diagnostics.empty())
            throw ModelError("model failed validation: " + diagnostics.front().message);
    }

    AnalysisReport report;
    report.algorithm = cfg.algorithm;
    report.model_name = model.name;

    Model cur = model;
    int max_level = opts.max_level.value_or(model.options.max_level);
    int generated = 0;

    if (cfg.reduce_potential)
        for (auto& member : cur.chain) {
            reduce_potential_by(cur, member);
            prune_inert_variables(cur);
        }

    for (int level = 0;; ++level) {
        if (level > max_level) {
            report.verdict.kind = VerdictKind::LevelLimit;
            report.verdict.note = "level limit " + std::to_string(max_level) + " exceeded";
            report.warnings.push_back(report.verdict.note);
            break;
        }

        LevelRecord rec;
        rec.level = level;
        rec.stage = static_cast<int>(cur.chain.size());
        rec.variables = cur.variables;
        rec.one_form = cur.one_form;
        rec.potential = cur.potential;
        rec.f = build_f(cur);
        rec.parity_odd = cur.dim() % 2 == 1;
        rec.det = determinant(rec.f.entries);
        rec.singular = rec.det.is_zero();

        if (!rec.singular) {
            auto impose = strongly_impose(cur, cur.chain, /*check_nonsingular=*/false);
            report.verdict.kind = VerdictKind::Brackets;
            report.verdict.brackets = BracketTable{cur.variables, inverse(rec.f.entries)};
            report.verdict.hamiltonian = impose.hamiltonian;
            report.verdict.imposed = impose.imposed;
            report.verdict.rewrites = impose.rewrites.rules();
            for (auto& [sym, sign] : impose.rewrites.branch_signs())
                report.verdict.branch_signs[sym.name()] = sign;
            // parameter specializations that would defeat invertibility
            if (!rec.det.is_constant() && parameter_only(rec.det))
                report.warnings.push_back("det(f) = " + rec.det.str() +
                                          " vanishes for special parameter values");
            rec.action = "terminal: nonsingular, brackets from the inverse two-form";
            report.levels.push_back(std::move(rec));
            break;
        }

        rec.modes = zero_modes(rec.f);
        std::vector<ConstraintDecl> fresh;
        bool inconsistent = false;
        std::optional<std::size_t> symmetry_mode;
        for (std::size_t mi = 0; mi < rec.modes.size(); ++mi) {
            const ZeroMode& nu = rec.modes[mi];
            Expr contraction = Expr::zero();
            std::vector<Expr> grad = cur.potential_gradient();
            for (std::size_t i = 0; i < grad.size(); ++i)
                contraction += nu.components[i] * grad[i];
            Expr reduced = reduce_mod_chain(contraction, cur.chain, cur.rewrites);

            CandidateRecord cand;
            cand.mode = nu.components;
            cand.contraction = reduced;
            if (reduces_to_zero_mod_chain(contraction, cur.chain, cur.rewrites)) {
                cand.disposition = reduced.is_zero() ? "zero" : "known";
                if (!symmetry_mode) symmetry_mode = mi;
            } else if (parameter_only(reduced)) {
                cand.disposition = "inconsistent";
                inconsistent = true;
                report.warnings.push_back("zero-mode contraction demands the nonzero constant " +
                                          reduced.str() + " = 0");
            } else {
                Expr candidate = normalize_constraint_sign(contraction);
                bool duplicate = false;
                for (auto& f : fresh) duplicate = duplicate || f.expr.proportional_to(candidate);
                if (duplicate) {
                    cand.disposition = "known";
                } else {
                    cand.disposition = "new";
                    cand.kept = candidate;
                    ConstraintDecl decl;
                    decl.label = "sigma" + std::to_string(++generated);
                    decl.expr = candidate;
                    decl.origin = ConstraintOrigin::ZeroMode;
                    decl.level = level;
                    fresh.push_back(std::move(decl));
                }
            }
            rec.candidates.push_back(std::move(cand));
        }

        if (inconsistent) {
            report.verdict.kind = VerdictKind::Inconsistent;
            report.verdict.note = "a zero-mode contraction reduced to a nonzero constant";
            rec.action = "terminal: inconsistent";
            report.levels.push_back(std::move(rec));
            break;
        }

        if (!fresh.empty()) {
            rec.action = "inject";
            for (auto& decl : fresh) {
                rec.action += " " + decl.label;
                cur = extend_with_constraint(cur, decl);
                if (cfg.reduce_potential) {
                    reduce_potential_by(cur, cur.chain.back());
                    prune_inert_variables(cur);
                }
            }
            report.levels.push_back(std::move(rec));
            continue;
        }

        // every mode is a symmetry signal
        if (!cur.pending_gauge.empty()) {
            rec.action = "symmetry; injecting gauge fixing";
            for (auto& decl : cur.pending_gauge) {
                rec.action += " " + decl.label;
                cur = extend_with_constraint(cur, decl);
                if (cfg.reduce_potential) {
                    reduce_potential_by(cur, cur.chain.back());
                    prune_inert_variables(cur);
                }
            }
            cur.pending_gauge.clear();
            report.levels.push_back(std::move(rec));
            continue;
        }

        report.verdict.kind = VerdictKind::Symmetry;
        const ZeroMode& nu = rec.modes[*symmetry_mode];
        SymmetryInfo info;
        info.generator = nu;
        for (std::size_t i = 0; i < cur.variables.size(); ++i)
            info.transformation.push_back({cur.variables[i], nu.components[i]});
        info.delta_potential = rec.candidates[*symmetry_mode].contraction;
        report.verdict.symmetry = std::move(info);
        report.verdict.hamiltonian = cur.potential;
        report.verdict.note = "zero-mode generates no new constraint; infinitesimal symmetry";
        rec.action = "terminal: symmetry";
        report.levels.push_back(std::move(rec));
        break;
    }

    report.chain = cur.chain;
    report.final_model = cur;
    return report;
}

} // namespace

AnalysisReport run_modified_bw(const Model& m, const RunOptions& opts) {
    return run_engine(m, opts, {/*reduce_potential=*/false, "mbw"});
}

AnalysisReport run_classic_bw(const Model& m, const RunOptions& opts) {
    return run_engine(m, opts, {/*reduce_potential=*/true, "bw"});
}

} // namespace symcon

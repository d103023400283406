#include "symcon/dirac.hpp"

#include <algorithm>
#include <sstream>

namespace symcon {

Expr poisson(const Expr& a, const Expr& b, const PhaseSpace& ps) {
    Expr acc = Expr::zero();
    for (auto& [q, p] : ps.pairs)
        acc += a.derivative(q) * b.derivative(p) - a.derivative(p) * b.derivative(q);
    return acc;
}

BracketTable poisson_table(const PhaseSpace& ps) {
    std::vector<Symbol> basis = ps.basis();
    std::size_t n = ps.pairs.size();
    BracketTable t{basis, ExprMatrix(2 * n, 2 * n)};
    for (std::size_t i = 0; i < n; ++i) {
        t.entries.at(i, n + i) = Expr::one();
        t.entries.at(n + i, i) = -Expr::one();
    }
    return t;
}

LegendreResult legendre_scan(const Expr& lagrangian, const PhaseSpace& ps,
                             const std::vector<Symbol>& velocities) {
    if (velocities.size() != ps.pairs.size())
        throw ModelError("legendre_scan: one velocity per canonical pair expected");

    for (Symbol v : velocities)
        if (lagrangian.den().contains(v))
            throw ModelError("velocity " + v.name() + " appears non-polynomially in the Lagrangian");

    // H = sum p v - L, then eliminate every velocity that is linearly solvable
    // from dH/dv = 0 (the momentum definition)
    Expr h = Expr::zero();
    for (std::size_t i = 0; i < ps.pairs.size(); ++i)
        h += Expr::var(ps.pairs[i].second) * Expr::var(velocities[i]);
    h -= lagrangian;

    auto contains_velocity = [&](const Expr& e) {
        for (Symbol v : velocities)
            if (e.contains(v)) return true;
        return false;
    };

    LegendreResult result;
    std::vector<bool> solved(velocities.size(), false);
    bool progress = true;
    while (progress) {
        progress = false;
        for (std::size_t i = 0; i < velocities.size(); ++i) {
            Symbol v = velocities[i];
            if (solved[i] || !h.contains(v)) continue;
            if (h.num().degree_in(v) > 2 || h.den().contains(v))
                throw ModelError("velocity " + v.name() + " appears non-polynomially");
            Expr stationarity = h.derivative(v);
            if (stationarity.num().degree_in(v) != 1) continue; // momentum relation is v-free
            Expr coeff = Expr::from_poly(stationarity.num().coefficient_of(v, 1));
            if (contains_velocity(coeff))
                throw ModelError("mixed velocity couplings beyond declared branches at " + v.name());
            auto sol = solve_linear(stationarity, v);
            if (!sol) continue;
            h = h.substitute(v, *sol);
            result.velocity_solutions.push_back({v, *sol});
            solved[i] = true;
            progress = true;
        }
    }

    int primary_index = 0;
    for (std::size_t i = 0; i < velocities.size(); ++i) {
        Symbol v = velocities[i];
        if (solved[i] || !h.contains(v)) continue;
        if (h.num().degree_in(v) != 1)
            throw ModelError("velocity " + v.name() + " is not solvable or linear");
        Expr coeff = h.derivative(v);
        if (contains_velocity(coeff))
            throw ModelError("mixed velocity couplings beyond declared branches at " + v.name());
        ConstraintDecl primary;
        primary.label = "phi" + std::to_string(++primary_index);
        primary.expr = coeff;
        primary.origin = ConstraintOrigin::Primary;
        Symbol momentum = ps.pairs[i].second;
        if (auto sol = solve_linear(coeff, momentum)) {
            primary.solved_for = momentum;
            result.momentum_bindings.push_back({momentum, *sol});
        }
        result.primaries.push_back(std::move(primary));
        h = h.substitute(v, Expr::zero());
    }

    result.canonical_hamiltonian = h;
    return result;
}

ConsistencyResult consistency_chain(const Expr& hamiltonian,
                                    const std::vector<ConstraintDecl>& primaries,
                                    const PhaseSpace& ps, const RewriteSystem& rewrites,
                                    int max_level, std::optional<Symbol> time) {
    ConsistencyResult result;
    result.chain = primaries;

    int secondary_index = 0;
    std::size_t next = 0;
    while (next < result.chain.size()) {
        const ConstraintDecl member = result.chain[next];
        ++next;

        Expr d = poisson(member.expr, hamiltonian, ps);
        if (time) d += member.expr.derivative(*time);
        Expr reduced = reduce_mod_chain(d, result.chain, rewrites);

        ConsistencyStep step;
        step.member = member.label;
        step.reduced_derivative = reduced;

        if (reduces_to_zero_mod_chain(d, result.chain, rewrites)) {
            // the demand may still involve the primaries' multipliers
            bool involves_u = false;
            for (auto& primary : result.chain) {
                if (primary.origin != ConstraintOrigin::Primary) continue;
                Expr u_coefficient = poisson(member.expr, primary.expr, ps);
                if (!reduces_to_zero_mod_chain(u_coefficient, result.chain, rewrites))
                    involves_u = true;
            }
            step.disposition = involves_u ? "fixes multiplier" : "closes";
            result.trace.push_back(std::move(step));
            continue;
        }

        bool parameters_only = true;
        for (Symbol s : reduced.symbols())
            parameters_only = parameters_only && (s.kind() == SymbolKind::Parameter ||
                                                  s.kind() == SymbolKind::IntegrationConstant);
        if (parameters_only) {
            step.disposition = "inconsistent";
            result.inconsistent = true;
            result.trace.push_back(std::move(step));
            break;
        }

        if (static_cast<int>(result.chain.size() - primaries.size()) >= max_level) {
            result.hit_level_limit = true;
            step.disposition = "level limit";
            result.trace.push_back(std::move(step));
            break;
        }

        ConstraintDecl secondary;
        secondary.label = "chi" + std::to_string(++secondary_index);
        secondary.expr = reduced;
        secondary.origin = ConstraintOrigin::ZeroMode; // consistency-generated
        secondary.level = static_cast<int>(next - 1);
        step.disposition = "secondary " + secondary.label;
        result.trace.push_back(std::move(step));
        result.chain.push_back(std::move(secondary));
    }
    return result;
}

Classification classify(const std::vector<ConstraintDecl>& chain, const PhaseSpace& ps) {
    std::size_t n = chain.size();
    Classification out;
    out.c_matrix = ExprMatrix(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            Expr e = poisson(chain[i].expr, chain[j].expr, ps);
            out.c_matrix.at(i, j) = e;
            out.c_matrix.at(j, i) = -e;
        }

    ExprMatrix work = out.c_matrix;
    std::vector<bool> remaining(n, true);
    while (true) {
        std::optional<std::pair<std::size_t, std::size_t>> pivot;
        for (std::size_t i = 0; i < n && !pivot; ++i) {
            if (!remaining[i]) continue;
            for (std::size_t j = i + 1; j < n && !pivot; ++j)
                if (remaining[j] && !work.at(i, j).is_zero()) pivot = {{i, j}};
        }
        if (!pivot) break;
        auto [pi, pj] = *pivot;
        Expr w = work.at(pi, pj);
        for (std::size_t k = 0; k < n; ++k) {
            if (!remaining[k] || k == pi || k == pj) continue;
            for (std::size_t l = k + 1; l < n; ++l) {
                if (!remaining[l] || l == pi || l == pj) continue;
                Expr update = (work.at(k, pj) * work.at(pi, l) - work.at(k, pi) * work.at(pj, l)) / w;
                work.at(k, l) = work.at(k, l) - update;
                work.at(l, k) = -work.at(k, l);
            }
        }
        out.second_class.push_back(pi);
        out.second_class.push_back(pj);
        remaining[pi] = remaining[pj] = false;
    }
    std::sort(out.second_class.begin(), out.second_class.end());
    for (std::size_t i = 0; i < n; ++i)
        if (remaining[i]) out.first_class.push_back(i);
    return out;
}

namespace {

ExprMatrix restricted_inverse(const std::vector<ConstraintDecl>& subset, const PhaseSpace& ps) {
    std::size_t m = subset.size();
    ExprMatrix c(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            Expr e = poisson(subset[i].expr, subset[j].expr, ps);
            c.at(i, j) = e;
            c.at(j, i) = -e;
        }
    try {
        return inverse(c);
    } catch (const std::invalid_argument&) {
        throw ModelError("constraint-bracket matrix is singular: first-class contamination in the "
                         "second-class subset");
    }
}

} // namespace

Expr dirac_bracket(const Expr& a, const Expr& b, const std::vector<ConstraintDecl>& second_class,
                   const PhaseSpace& ps) {
    Expr plain = poisson(a, b, ps);
    if (second_class.empty()) return plain;
    ExprMatrix cinv = restricted_inverse(second_class, ps);
    std::size_t m = second_class.size();
    Expr correction = Expr::zero();
    for (std::size_t i = 0; i < m; ++i) {
        Expr ai = poisson(a, second_class[i].expr, ps);
        if (ai.is_zero()) continue;
        for (std::size_t j = 0; j < m; ++j) {
            if (cinv.at(i, j).is_zero()) continue;
            correction += ai * cinv.at(i, j) * poisson(second_class[j].expr, b, ps);
        }
    }
    return plain - correction;
}

BracketTable dirac_bracket_table(const std::vector<ConstraintDecl>& second_class,
                                 const PhaseSpace& ps, const std::vector<Symbol>& basis) {
    BracketTable table{basis, ExprMatrix(basis.size(), basis.size())};
    std::optional<ExprMatrix> cinv;
    if (!second_class.empty()) cinv = restricted_inverse(second_class, ps);

    std::size_t m = second_class.size();
    // {z, phi_i} for every basis symbol, reused across pairs
    std::vector<std::vector<Expr>> zphi(basis.size(), std::vector<Expr>(m, Expr::zero()));
    for (std::size_t z = 0; z < basis.size(); ++z)
        for (std::size_t i = 0; i < m; ++i)
            zphi[z][i] = poisson(Expr::var(basis[z]), second_class[i].expr, ps);

    for (std::size_t a = 0; a < basis.size(); ++a)
        for (std::size_t b = a + 1; b < basis.size(); ++b) {
            Expr e = poisson(Expr::var(basis[a]), Expr::var(basis[b]), ps);
            for (std::size_t i = 0; i < m; ++i) {
                if (zphi[a][i].is_zero()) continue;
                for (std::size_t j = 0; j < m; ++j) {
                    if (cinv->at(i, j).is_zero() || zphi[b][j].is_zero()) continue;
                    e -= zphi[a][i] * cinv->at(i, j) * (-zphi[b][j]);
                }
            }
            table.entries.at(a, b) = e;
            table.entries.at(b, a) = -e;
        }
    return table;
}

GeneratorReport first_class_generator(const Expr& c, const PhaseSpace& ps,
                                      const std::vector<ConstraintDecl>& second_class,
                                      const std::vector<Symbol>& variables,
                                      const Expr& hamiltonian) {
    GeneratorReport report;
    for (Symbol z : variables)
        report.transformation.push_back({z, dirac_bracket(Expr::var(z), c, second_class, ps)});
    report.delta_hamiltonian = dirac_bracket(hamiltonian, c, second_class, ps);
    return report;
}

std::vector<std::pair<Symbol, Expr>> dirac_momentum_bindings(const Model& m) {
    if (m.lagrangian) {
        PhaseSpace ps{m.lagrangian->pairs};
        return legendre_scan(m.lagrangian->lagrangian, ps, m.lagrangian->velocities)
            .momentum_bindings;
    }
    return {};
}

AnalysisReport run_dirac(const Model& m, const RunOptions& opts) {
    AnalysisReport report;
    report.algorithm = "dirac";
    report.model_name = m.name;
    report.final_model = m;

    PhaseSpace ps;
    Expr hc;
    std::vector<ConstraintDecl> primaries;

    if (m.dirac_input) {
        ps.pairs = m.dirac_input->pairs;
        hc = m.dirac_input->hamiltonian;
        for (const std::string& label : m.dirac_input->primary_labels)
            for (auto& decl : m.declared_constraints)
                if (decl.label == label) {
                    ConstraintDecl primary = decl;
                    primary.origin = ConstraintOrigin::Primary;
                    primaries.push_back(primary);
                }
    } else if (m.lagrangian) {
        ps.pairs = m.lagrangian->pairs;
        auto scan = legendre_scan(m.lagrangian->lagrangian, ps, m.lagrangian->velocities);
        hc = scan.canonical_hamiltonian;
        primaries = scan.primaries;
    } else {
        throw ModelError("model '" + m.name + "' provides no [lagrangian] or [dirac] input");
    }

    int max_level = opts.max_level.value_or(m.options.max_level);
    auto consistency = consistency_chain(hc, primaries, ps, m.rewrites, max_level, m.options.time);

    // declared gauge fixings join the chain by hand, then get their own
    // consistency sweep
    if (!m.pending_gauge.empty()) {
        std::vector<ConstraintDecl> with_gauge = consistency.chain;
        for (auto& g : m.pending_gauge) with_gauge.push_back(g);
        auto again =
            consistency_chain(hc, with_gauge, ps, m.rewrites, max_level, m.options.time);
        consistency.chain = again.chain;
        consistency.trace.insert(consistency.trace.end(), again.trace.begin(), again.trace.end());
        consistency.inconsistent |= again.inconsistent;
        consistency.hit_level_limit |= again.hit_level_limit;
    }

    report.chain = consistency.chain;
    for (auto& step : consistency.trace)
        if (step.disposition == "fixes multiplier")
            report.warnings.push_back("consistency of " + step.member +
                                      " involves a primary multiplier; recorded");

    if (consistency.inconsistent) {
        report.verdict.kind = VerdictKind::Inconsistent;
        report.verdict.note = "a consistency condition demands a nonzero constant";
        return report;
    }
    if (consistency.hit_level_limit) {
        report.verdict.kind = VerdictKind::LevelLimit;
        report.verdict.note = "consistency chain exceeded the level limit";
        return report;
    }

    auto classification = classify(report.chain, ps);
    report.dirac_matrix = classification.c_matrix;
    for (std::size_t i = 0; i < report.chain.size(); ++i) {
        bool second = std::find(classification.second_class.begin(),
                                classification.second_class.end(),
                                i) != classification.second_class.end();
        report.classification.push_back({report.chain[i].label, second ? "second-class" : "first-class"});
    }
    if (classification.second_class.size() % 2 != 0)
        report.warnings.push_back("odd number of second-class constraints: degeneracy");

    std::vector<ConstraintDecl> second_subset;
    for (std::size_t i : classification.second_class) second_subset.push_back(report.chain[i]);

    report.verdict.kind = VerdictKind::Brackets;
    report.verdict.brackets = dirac_bracket_table(second_subset, ps, ps.basis());

    // reduced Hamiltonian: second-class members eliminated in chain order
    {
        Expr h = m.rewrites.reduce(hc);
        std::vector<Symbol> order = ps.basis();
        for (auto& member : second_subset) {
            std::optional<Symbol> s = member.solved_for;
            if (!s) s = pick_solve_symbol(member.expr, order);
            if (s && member.expr.num().degree_in(*s) == 1) {
                if (auto sol = solve_linear(member.expr, *s)) {
                    h = h.substitute(*s, *sol);
                    continue;
                }
            }
            if (s && member.expr.num().degree_in(*s) == 2 &&
                member.expr.num().coefficient_of(*s, 1).is_zero()) {
                RewriteSystem local;
                local.add_rule(*s, 2,
                               Expr::from_poly(-member.expr.num().coefficient_of(*s, 0)) /
                                   Expr::from_poly(member.expr.num().coefficient_of(*s, 2)));
                h = local.reduce(h);
                continue;
            }
            if (member.expr.is_polynomial() && h.den().symbols().empty())
                h = Expr::from_poly(h.num().reduce_by(member.expr.num())) /
                    Expr::from_poly(h.den());
        }
        report.verdict.hamiltonian = m.rewrites.reduce(h);
    }

    // first-class members generate gauge transformations
    for (std::size_t i : classification.first_class) {
        auto gen = first_class_generator(report.chain[i].expr, ps, second_subset, ps.basis(), hc);
        SymmetryInfo info;
        info.generator = ZeroMode{{}, 0};
        info.transformation = gen.transformation;
        info.delta_potential = gen.delta_hamiltonian;
        report.verdict.symmetry = std::move(info); // last one wins; all listed in the note
        report.verdict.note += (report.verdict.note.empty() ? "" : "; ") + report.chain[i].label +
                               " is first class and generates a gauge transformation";
    }
    return report;
}

} // namespace symcon

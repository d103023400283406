#include "symcon/report.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <future>
#include <ostream>
#include <sstream>

namespace symcon {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kSchemaVersion = "1.0";

Json matrix_json(const ExprMatrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m.at(i, j).str());
        rows.push_back(std::move(row));
    }
    return rows;
}

Json symbols_json(const std::vector<Symbol>& symbols) {
    Json out = Json::array();
    for (Symbol s : symbols) out.push_back(s.name());
    return out;
}

Json exprs_json(const std::vector<Expr>& exprs) {
    Json out = Json::array();
    for (auto& e : exprs) out.push_back(e.str());
    return out;
}

Json chain_json(const std::vector<ConstraintDecl>& chain) {
    Json out = Json::array();
    for (auto& c : chain) {
        Json entry;
        entry["label"] = c.label;
        entry["expr"] = c.expr.str();
        entry["origin"] = to_string(c.origin);
        if (c.origin == ConstraintOrigin::ZeroMode && c.level >= 0) entry["level"] = c.level;
        if (c.solved_for) entry["solved_for"] = c.solved_for->name();
        if (c.multiplier) entry["multiplier"] = c.multiplier->name();
        out.push_back(std::move(entry));
    }
    return out;
}

Json oracle_json(const OracleResult& r) {
    Json out;
    out["check"] = r.check;
    out["passed"] = r.passed;
    out["trials"] = r.trials;
    out["seed"] = r.seed;
    if (!r.witness.empty()) out["witness"] = r.witness;
    return out;
}

Json checks_json(const AnalysisReport& report, unsigned seed) {
    Json checks = Json::array();
    if (report.verdict.brackets) {
        const BracketTable& table = *report.verdict.brackets;
        OracleOptions opts;
        opts.seed = seed;
        opts.trials = 10;
        checks.push_back(oracle_json(oracle_antisymmetry(table.entries, opts)));
        checks.push_back(oracle_json(oracle_jacobi(table, opts)));
        if (!report.levels.empty() && !report.levels.back().singular)
            checks.push_back(
                oracle_json(oracle_inverse(report.levels.back().f.entries, table.entries, opts)));
    }
    return checks;
}

Json verdict_json(const Verdict& v) {
    Json out;
    out["kind"] = to_string(v.kind);
    if (!v.note.empty()) out["note"] = v.note;
    if (v.hamiltonian) out["hamiltonian"] = v.hamiltonian->str();
    if (v.brackets) {
        Json table;
        table["basis"] = symbols_json(v.brackets->basis);
        table["entries"] = matrix_json(v.brackets->entries);
        out["bracket_table"] = std::move(table);
    }
    if (!v.rewrites.empty()) {
        Json rules = Json::array();
        for (auto& r : v.rewrites)
            rules.push_back(r.symbol.name() + "^" + std::to_string(r.power) + " -> " +
                            r.replacement.str());
        out["rewrites"] = std::move(rules);
    }
    if (!v.branch_signs.empty()) {
        Json branches;
        for (auto& [name, sign] : v.branch_signs) branches[name] = sign > 0 ? "+" : "-";
        out["branches"] = std::move(branches);
    }
    if (!v.imposed.empty()) {
        Json imposed = Json::array();
        for (auto& rel : v.imposed) {
            Json entry;
            entry["label"] = rel.label;
            entry["expr"] = rel.expr.str();
            entry["how"] = rel.how;
            imposed.push_back(std::move(entry));
        }
        out["imposed"] = std::move(imposed);
    }
    if (v.symmetry) {
        Json sym;
        if (!v.symmetry->generator.components.empty())
            sym["generator"] = exprs_json(v.symmetry->generator.components);
        Json delta;
        for (auto& [s, e] : v.symmetry->transformation)
            if (!e.is_zero()) delta["delta_" + s.name()] = e.str();
        sym["transformation"] = std::move(delta);
        sym["delta_potential"] = v.symmetry->delta_potential.str();
        out["symmetry"] = std::move(sym);
    }
    return out;
}

Json report_body(const AnalysisReport& report, unsigned seed) {
    Json out;
    out["schema_version"] = kSchemaVersion;
    out["model"] = report.model_name;
    out["algorithm"] = report.algorithm;
    out["seed"] = seed;

    Json levels = Json::array();
    for (auto& level : report.levels) {
        Json rec;
        rec["level"] = level.level;
        rec["stage"] = level.stage;
        rec["variables"] = symbols_json(level.variables);
        rec["one_form"] = exprs_json(level.one_form);
        rec["potential"] = level.potential.str();
        rec["matrix"] = matrix_json(level.f.entries);
        rec["determinant"] = level.det.str();
        rec["singular"] = level.singular;
        rec["parity_odd"] = level.parity_odd;
        if (!level.modes.empty()) {
            Json modes = Json::array();
            for (auto& mode : level.modes) modes.push_back(exprs_json(mode.components));
            rec["zero_modes"] = std::move(modes);
        }
        if (!level.candidates.empty()) {
            Json cands = Json::array();
            for (auto& cand : level.candidates) {
                Json c;
                c["contraction"] = cand.contraction.str();
                c["disposition"] = cand.disposition;
                if (cand.kept) c["constraint"] = cand.kept->str();
                cands.push_back(std::move(c));
            }
            rec["candidates"] = std::move(cands);
        }
        rec["action"] = level.action;
        levels.push_back(std::move(rec));
    }
    out["levels"] = std::move(levels);
    out["verdict"] = verdict_json(report.verdict);
    out["chain"] = chain_json(report.chain);
    if (report.dirac_matrix) out["dirac_matrix"] = matrix_json(*report.dirac_matrix);
    if (!report.classification.empty()) {
        Json cls = Json::array();
        for (auto& [label, kind] : report.classification) {
            Json entry;
            entry["label"] = label;
            entry["class"] = kind;
            cls.push_back(std::move(entry));
        }
        out["classification"] = std::move(cls);
    }
    out["checks"] = checks_json(report, seed);
    if (!report.warnings.empty()) out["warnings"] = report.warnings;
    return out;
}

std::string matrix_text(const ExprMatrix& m, const std::string& indent) {
    std::vector<std::vector<std::string>> cells(m.rows());
    std::vector<std::size_t> width(m.cols(), 0);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            cells[i].push_back(m.at(i, j).str());
            width[j] = std::max(width[j], cells[i][j].size());
        }
    std::ostringstream out;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        out << indent << "[ ";
        for (std::size_t j = 0; j < m.cols(); ++j) {
            out << cells[i][j];
            out << std::string(width[j] - cells[i][j].size() + (j + 1 < m.cols() ? 2 : 0), ' ');
        }
        out << "]\n";
    }
    return out.str();
}

std::string join_names(const std::vector<Symbol>& symbols) {
    std::string out;
    for (std::size_t i = 0; i < symbols.size(); ++i)
        out += (i ? ", " : "") + symbols[i].name();
    return out;
}

} // namespace

std::string report_text(const AnalysisReport& report) {
    std::ostringstream out;
    out << "model " << report.model_name << ", algorithm " << report.algorithm << "\n";
    for (auto& level : report.levels) {
        out << "\nlevel " << level.level << " (stage " << level.stage << ")\n";
        out << "  xi = [" << join_names(level.variables) << "]\n";
        out << "  V  = " << level.potential.str() << "\n";
        out << "  f:\n" << matrix_text(level.f.entries, "    ");
        out << "  det(f) = " << level.det.str();
        if (level.parity_odd) out << "  (odd dimension)";
        out << "\n";
        for (std::size_t i = 0; i < level.modes.size(); ++i) {
            out << "  zero-mode: (";
            for (std::size_t j = 0; j < level.modes[i].components.size(); ++j)
                out << (j ? ", " : "") << level.modes[i].components[j].str();
            out << ")\n";
            if (i < level.candidates.size()) {
                const auto& cand = level.candidates[i];
                out << "    contraction -> " << cand.contraction.str() << " ["
                    << cand.disposition << "]";
                if (cand.kept) out << " constraint: " << cand.kept->str();
                out << "\n";
            }
        }
        out << "  action: " << level.action << "\n";
    }
    out << "\nverdict: " << to_string(report.verdict.kind) << "\n";
    if (!report.verdict.note.empty()) out << "  " << report.verdict.note << "\n";
    if (report.verdict.hamiltonian)
        out << "  hamiltonian = " << report.verdict.hamiltonian->str() << "\n";
    if (!report.verdict.rewrites.empty()) {
        for (auto& r : report.verdict.rewrites)
            out << "  with " << r.symbol.name() << "^" << r.power << " -> " << r.replacement.str()
                << "\n";
        for (auto& [name, sign] : report.verdict.branch_signs)
            out << "  branch " << name << ": " << (sign > 0 ? "+" : "-") << "\n";
    }
    if (report.verdict.brackets) {
        out << "  brackets over [" << join_names(report.verdict.brackets->basis) << "]:\n";
        out << matrix_text(report.verdict.brackets->entries, "    ");
    }
    if (report.verdict.symmetry) {
        out << "  symmetry transformation (per unit epsilon):\n";
        for (auto& [s, e] : report.verdict.symmetry->transformation)
            if (!e.is_zero()) out << "    delta " << s.name() << " = " << e.str() << "\n";
        out << "    delta V = " << report.verdict.symmetry->delta_potential.str() << "\n";
    }
    if (!report.verdict.imposed.empty()) {
        out << "  strong imposition:\n";
        for (auto& rel : report.verdict.imposed)
            out << "    " << rel.label << " = 0: " << rel.how << "\n";
    }
    out << "\nconstraint chain:\n";
    for (auto& c : report.chain) {
        out << "  " << c.label << " = " << c.expr.str() << "  [" << to_string(c.origin);
        if (c.origin == ConstraintOrigin::ZeroMode && c.level >= 0) out << " level " << c.level;
        out << "]";
        if (c.solved_for) out << " solved_for=" << c.solved_for->name();
        out << "\n";
    }
    if (!report.classification.empty()) {
        out << "classification:\n";
        for (auto& [label, kind] : report.classification)
            out << "  " << label << ": " << kind << "\n";
    }
    for (auto& w : report.warnings) out << "warning: " << w << "\n";
    return out.str();
}

std::string report_json(const AnalysisReport& report, unsigned seed) {
    return report_body(report, seed).dump(2) + "\n";
}

ChainDiff diff_chains(const AnalysisReport& dirac_report,
                      const std::vector<std::pair<Symbol, Expr>>& momentum_bindings,
                      const AnalysisReport& symplectic_report) {
    ChainDiff diff;
    const Model& bw_model = symplectic_report.final_model;
    std::map<Symbol, Expr> bindings(momentum_bindings.begin(), momentum_bindings.end());

    std::vector<bool> bw_matched(symplectic_report.chain.size(), false);
    for (auto& member : dirac_report.chain) {
        Expr mapped = member.expr;
        bool substituted = true;
        try {
            mapped = mapped.substitute(bindings);
        } catch (const std::exception&) {
            substituted = false; // self-referential binding; compare raw
        }
        mapped = bw_model.rewrites.reduce(mapped);
        (void)substituted;

        if (mapped.is_zero()) {
            diff.absorbed.push_back(
                {member.label, member.expr.str(), "vanishes under the first-order reduction"});
            continue;
        }
        bool matched = false;
        for (std::size_t i = 0; i < symplectic_report.chain.size() && !matched; ++i) {
            if (symplectic_report.chain[i].expr.proportional_to(mapped)) {
                diff.matched.push_back({member.label, member.expr.str(),
                                        "matches " + symplectic_report.chain[i].label});
                bw_matched[i] = true;
                matched = true;
            }
        }
        if (matched) continue;

        std::optional<Symbol> determines;
        for (Symbol s : mapped.symbols()) {
            if (s.kind() == SymbolKind::Parameter || s.kind() == SymbolKind::IntegrationConstant)
                continue;
            bool in_bw = false;
            for (Symbol v : bw_model.variables) in_bw = in_bw || v == s;
            if (!in_bw && mapped.num().degree_in(s) == 1) determines = s;
        }
        if (determines) {
            diff.absorbed.push_back({member.label, member.expr.str(),
                                     "determines " + determines->name() +
                                         ", absent from the symplectic variables"});
            continue;
        }
        diff.dirac_only.push_back({member.label, member.expr.str(), "no symplectic counterpart"});
    }

    for (std::size_t i = 0; i < symplectic_report.chain.size(); ++i)
        if (!bw_matched[i]) {
            // declared constraints appear on both sides by construction
            bool declared = false;
            for (auto& d : dirac_report.final_model.declared_constraints)
                declared = declared || d.label == symplectic_report.chain[i].label;
            if (declared)
                diff.matched.push_back({symplectic_report.chain[i].label,
                                        symplectic_report.chain[i].expr.str(),
                                        "declared on both sides"});
            else
                diff.bw_only.push_back({symplectic_report.chain[i].label,
                                        symplectic_report.chain[i].expr.str(),
                                        "no Dirac counterpart"});
        }
    return diff;
}

std::vector<BracketMismatch> diff_brackets(const AnalysisReport& dirac_report,
                                           const AnalysisReport& symplectic_report) {
    std::vector<BracketMismatch> out;
    if (!dirac_report.verdict.brackets || !symplectic_report.verdict.brackets) return out;
    const BracketTable& d = *dirac_report.verdict.brackets;
    const BracketTable& s = *symplectic_report.verdict.brackets;
    std::vector<Symbol> common;
    for (Symbol sym : s.basis)
        if (d.index_of(sym)) common.push_back(sym);
    for (std::size_t i = 0; i < common.size(); ++i)
        for (std::size_t j = i + 1; j < common.size(); ++j) {
            const Expr& dv = d.at(common[i], common[j]);
            const Expr& sv = s.at(common[i], common[j]);
            if (dv != sv)
                out.push_back({common[i].name(), common[j].name(), dv.str(), sv.str()});
        }
    return out;
}

std::string compare_text(const CompareReport& report) {
    std::ostringstream out;
    out << "compare: dirac vs " << report.symplectic.algorithm << " on model "
        << report.dirac.model_name << "\n\n";
    out << "dirac chain:\n";
    for (auto& c : report.dirac.chain) out << "  " << c.label << " = " << c.expr.str() << "\n";
    out << "symplectic chain:\n";
    for (auto& c : report.symplectic.chain) out << "  " << c.label << " = " << c.expr.str() << "\n";
    out << "\nchain diff:\n";
    auto dump = [&](const char* title, const std::vector<ChainDiffEntry>& entries) {
        out << "  " << title << ": " << entries.size() << "\n";
        for (auto& e : entries) out << "    " << e.label << " = " << e.expr << "  (" << e.note << ")\n";
    };
    dump("matched", report.chains.matched);
    dump("absorbed", report.chains.absorbed);
    dump("dirac-only", report.chains.dirac_only);
    dump("symplectic-only", report.chains.bw_only);
    out << "\nbracket diff over the common basis: " << report.brackets.size() << " mismatches\n";
    for (auto& m : report.brackets)
        out << "  {" << m.a << ", " << m.b << "}: dirac " << m.dirac_value << " vs symplectic "
            << m.symplectic_value << "\n";
    return out.str();
}

std::string compare_json(const CompareReport& report, unsigned seed) {
    Json out;
    out["schema_version"] = kSchemaVersion;
    out["model"] = report.dirac.model_name;
    out["algorithm"] = "compare";
    out["seed"] = seed;
    out["dirac"] = report_body(report.dirac, seed);
    out["symplectic"] = report_body(report.symplectic, seed);
    auto entries = [](const std::vector<ChainDiffEntry>& list) {
        Json arr = Json::array();
        for (auto& e : list) {
            Json entry;
            entry["label"] = e.label;
            entry["expr"] = e.expr;
            entry["note"] = e.note;
            arr.push_back(std::move(entry));
        }
        return arr;
    };
    Json diff;
    diff["matched"] = entries(report.chains.matched);
    diff["absorbed"] = entries(report.chains.absorbed);
    diff["dirac_only"] = entries(report.chains.dirac_only);
    diff["symplectic_only"] = entries(report.chains.bw_only);
    Json mismatches = Json::array();
    for (auto& m : report.brackets) {
        Json entry;
        entry["pair"] = "{" + m.a + ", " + m.b + "}";
        entry["dirac"] = m.dirac_value;
        entry["symplectic"] = m.symplectic_value;
        mismatches.push_back(std::move(entry));
    }
    diff["bracket_mismatches"] = std::move(mismatches);
    out["diff"] = std::move(diff);
    return out.dump(2) + "\n";
}

AnalysisReport run_mbw_with_eom(const Model& m, const RunConfig& config) {
    RunOptions opts;
    opts.max_level = config.max_level;
    AnalysisReport report = run_modified_bw(m, opts);
    if (!config.eom_constraints || report.verdict.kind != VerdictKind::Brackets) return report;
    if (!m.lagrangian && !m.dirac_input) {
        report.warnings.push_back("--eom-constraints needs a Dirac-side input to pick candidates");
        return report;
    }

    AnalysisReport dirac_report = run_dirac(m, opts);
    ChainDiff diff = diff_chains(dirac_report, dirac_momentum_bindings(m), report);
    if (diff.dirac_only.empty()) return report;

    // conserved quantities of the unreduced terminal system
    MotionSystem ms =
        hamilton_equations(*report.verdict.brackets, report.final_model.potential);
    int degree = config.conserved_degree.value_or(m.options.conserved_degree);
    std::vector<Expr> span = conserved_search(ms, degree);
    std::map<Symbol, Expr> bindings;
    for (auto& [p, v] : dirac_momentum_bindings(m)) bindings[p] = v;

    for (auto& entry : diff.dirac_only) {
        if (config.promote && *config.promote != entry.label) continue;
        const ConstraintDecl* source = nullptr;
        for (auto& c : dirac_report.chain)
            if (c.label == entry.label) source = &c;
        if (!source) continue;
        Expr mapped = source->expr.substitute(bindings);
        auto coords = in_span(mapped, span, report.final_model.variables);
        if (!coords) {
            report.warnings.push_back("dirac-only constraint " + entry.label +
                                      " is not conserved at degree " + std::to_string(degree));
            continue;
        }
        ConstraintDecl promoted = promote_to_constraint(mapped, *report.final_model.table);
        report.warnings.push_back("eom: promoted conserved quantity " + mapped.str() + " as " +
                                  promoted.label + " (from Dirac chain entry " + entry.label + ")");
        Model extended = extend_with_constraint(report.final_model, promoted);

        AnalysisReport continued = run_modified_bw(extended, opts);
        int offset = static_cast<int>(report.levels.size());
        if (!report.levels.empty())
            report.levels.back().action = "eom: inject " + promoted.label;
        for (auto& level : continued.levels) {
            level.level += offset;
            report.levels.push_back(level);
        }
        report.verdict = continued.verdict;
        report.chain = continued.chain;
        report.final_model = continued.final_model;
        for (auto& w : continued.warnings) report.warnings.push_back(w);
        break;
    }
    return report;
}

int run_cli(const RunConfig& config, std::ostream& out, std::ostream& err) {
    Model model;
    try {
        model = parse_model_file(config.model_path);
        auto diagnostics = validate_model(model);
        if (!diagnostics.empty()) {
            for (auto& d : diagnostics) err << "error: " << d.message << " [" << d.where << "]\n";
            return 1;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    RunOptions opts;
    opts.max_level = config.max_level;

    auto emit = [&](const std::string& text, const std::string& json) {
        if (config.output != "json") out << text;
        if (config.output == "json") out << json;
        std::optional<std::string> path = config.json_path;
        if (!path && config.output == "both") path = model.name + ".report.json";
        if (path) {
            std::ofstream file(*path);
            file << json;
        }
    };

    try {
        if (config.algorithm == "compare") {
            // both engines are pure; each side gets its own parse of the model
            Model second = parse_model_file(config.model_path);
            auto dirac_future = std::async(std::launch::async,
                                           [&] { return run_dirac(model, opts); });
            AnalysisReport symplectic = config.eom_constraints
                                            ? run_mbw_with_eom(second, config)
                                            : run_modified_bw(second, opts);
            AnalysisReport dirac_report = dirac_future.get();
            CompareReport cmp{std::move(dirac_report), std::move(symplectic), {}, {}};
            cmp.chains = diff_chains(cmp.dirac, dirac_momentum_bindings(model), cmp.symplectic);
            cmp.brackets = diff_brackets(cmp.dirac, cmp.symplectic);
            emit(compare_text(cmp), compare_json(cmp, config.seed));
            return cmp.dirac.terminal_ok() && cmp.symplectic.terminal_ok() ? 0 : 2;
        }

        AnalysisReport report;
        if (config.algorithm == "dirac") {
            report = run_dirac(model, opts);
        } else if (config.algorithm == "bw") {
            report = run_classic_bw(model, opts);
        } else if (config.algorithm == "mbw") {
            report = run_mbw_with_eom(model, config);
        } else {
            err << "error: unknown algorithm '" << config.algorithm << "'\n";
            return 1;
        }

        // cross-check against the Dirac chain when the model carries the input
        if ((config.algorithm == "bw" || config.algorithm == "mbw") &&
            (model.lagrangian || model.dirac_input) && report.terminal_ok()) {
            AnalysisReport dirac_report = run_dirac(model, opts);
            ChainDiff diff = diff_chains(dirac_report, dirac_momentum_bindings(model), report);
            for (auto& entry : diff.dirac_only)
                report.warnings.push_back("constraint present only in the Dirac chain: " +
                                          entry.label + " = " + entry.expr);
        }

        emit(report_text(report), report_json(report, config.seed));
        return report.terminal_ok() ? 0 : 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace symcon

#include "symcon/model.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace symcon {

std::string to_string(ConstraintOrigin origin) {
    switch (origin) {
        case ConstraintOrigin::Primary: return "primary";
        case ConstraintOrigin::AdHoc: return "ad-hoc";
        case ConstraintOrigin::ZeroMode: return "zero-mode";
        case ConstraintOrigin::EomDerived: return "eom-derived";
        case ConstraintOrigin::GaugeFixing: return "gauge-fixing";
    }
    return "?";
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

struct Line {
    std::string text;
    int number;
};

[[noreturn]] void fail(const std::string& msg, int line = 0) {
    if (line > 0)
        throw ModelError(msg + " (line " + std::to_string(line) + ")");
    throw ModelError(msg);
}

SymbolKind parse_kind(const std::string& word, int line) {
    if (word == "coordinate") return SymbolKind::Coordinate;
    if (word == "momentum") return SymbolKind::Momentum;
    if (word == "multiplier") return SymbolKind::Multiplier;
    fail("unknown variable kind '" + word + "'", line);
}

ConstraintOrigin parse_origin(const std::string& word, int line) {
    if (word == "primary") return ConstraintOrigin::Primary;
    if (word == "ad-hoc") return ConstraintOrigin::AdHoc;
    if (word == "gauge-fixing") return ConstraintOrigin::GaugeFixing;
    fail("unknown constraint origin '" + word + "'", line);
}

/// `q[1..3]` -> {q_1, q_2, q_3}; plain names pass through.
std::vector<std::string> expand_range(const std::string& name, int line) {
    auto open = name.find('[');
    if (open == std::string::npos) return {name};
    auto close = name.find(']', open);
    auto dots = name.find("..", open);
    if (close == std::string::npos || dots == std::string::npos || dots > close)
        fail("malformed range declaration '" + name + "'", line);
    std::string stem = name.substr(0, open);
    std::string lo_s = trim(name.substr(open + 1, dots - open - 1));
    std::string hi_s = trim(name.substr(dots + 2, close - dots - 2));
    auto concrete = [&](const std::string& v) {
        if (v.empty() || !std::all_of(v.begin(), v.end(), [](char c) { return std::isdigit(c); }))
            fail("non-concrete range bound '" + v + "' in '" + name + "'", line);
        return std::stoi(v);
    };
    int lo = concrete(lo_s), hi = concrete(hi_s);
    if (lo > hi) fail("empty range in '" + name + "'", line);
    std::vector<std::string> out;
    for (int i = lo; i <= hi; ++i) out.push_back(stem + "_" + std::to_string(i));
    return out;
}

Expr parse_in(const std::string& text, const SymbolTable& table, int line) {
    try {
        return parse_expr(text, table);
    } catch (const ParseError& e) {
        fail(std::string(e.what()) + " (model line " + std::to_string(line) + ")");
    }
}

std::vector<std::pair<Symbol, Symbol>> parse_pairs(const std::string& value, SymbolTable& table,
                                                   int line) {
    std::vector<std::pair<Symbol, Symbol>> pairs;
    for (const std::string& item : split(value, ',')) {
        if (item.empty()) continue;
        auto parts = split(item, ':');
        if (parts.size() != 2) fail("expected coordinate:momentum pair, got '" + item + "'", line);
        Symbol c = table.contains(parts[0]) ? table.at(parts[0])
                                            : table.declare(parts[0], SymbolKind::Coordinate);
        Symbol p = table.contains(parts[1]) ? table.at(parts[1])
                                            : table.declare(parts[1], SymbolKind::Momentum);
        pairs.push_back({c, p});
    }
    if (pairs.empty()) fail("empty pair list", line);
    return pairs;
}

} // namespace

Model parse_model(const std::string& text, const std::string& name) {
    // slice into sections, preserving line numbers and file order
    std::vector<std::pair<std::string, std::vector<Line>>> sections;
    {
        std::istringstream in(text);
        std::string raw;
        int number = 0;
        std::string current;
        for (; std::getline(in, raw); ) {
            ++number;
            auto hash = raw.find('#');
            if (hash != std::string::npos) raw.erase(hash);
            std::string line = trim(raw);
            if (line.empty()) continue;
            if (line.front() == '[' && line.back() == ']' && line.find("..") == std::string::npos &&
                line.find('=') == std::string::npos) {
                current = line.substr(1, line.size() - 2);
                sections.push_back({current, {}});
                continue;
            }
            if (current.empty()) fail("content before first section header", number);
            sections.back().second.push_back({line, number});
        }
    }

    auto section = [&](const std::string& key) -> const std::vector<Line>* {
        for (auto& [k, lines] : sections)
            if (k == key) return &lines;
        return nullptr;
    };
    for (auto& [k, lines] : sections)
        if (k != "variables" && k != "parameters" && k != "one_form" && k != "potential" &&
            k != "constraints" && k != "rewrites" && k != "options" && k != "lagrangian" &&
            k != "dirac")
            fail("unknown section [" + k + "]", lines.empty() ? 0 : lines.front().number);

    Model m;
    m.name = name;
    m.table = std::make_shared<SymbolTable>();
    SymbolTable& table = *m.table;

    if (auto* lines = section("variables"))
        for (auto& line : *lines) {
            auto parts = split(line.text, ':');
            if (parts.size() != 2) fail("expected 'name : kind'", line.number);
            SymbolKind kind = parse_kind(parts[1], line.number);
            for (const std::string& nm : expand_range(parts[0], line.number)) {
                if (table.contains(nm)) fail("duplicate variable '" + nm + "'", line.number);
                m.declared_variables.push_back(table.declare(nm, kind));
            }
        }

    if (auto* lines = section("parameters"))
        for (auto& line : *lines)
            for (const std::string& nm : split(line.text, ',')) {
                if (nm.empty()) continue;
                if (table.contains(nm)) fail("duplicate parameter '" + nm + "'", line.number);
                m.parameters.push_back(table.declare(nm, SymbolKind::Parameter));
            }

    if (auto* lines = section("options"))
        for (auto& line : *lines) {
            auto parts = split(line.text, '=');
            if (parts.size() != 2) fail("expected 'key = value'", line.number);
            const std::string& key = parts[0];
            const std::string& value = parts[1];
            if (key == "max_level") {
                m.options.max_level = std::stoi(value);
            } else if (key == "conserved_degree") {
                m.options.conserved_degree = std::stoi(value);
            } else if (key == "time") {
                m.options.time = table.at(value);
            } else if (key.rfind("branch.", 0) == 0) {
                Symbol s = table.at(key.substr(7));
                if (value != "+" && value != "-") fail("branch sign must be + or -", line.number);
                m.rewrites.set_branch(s, value == "+" ? 1 : -1);
            } else {
                fail("unknown option '" + key + "'", line.number);
            }
        }

    if (auto* lines = section("rewrites"))
        for (auto& line : *lines) {
            auto arrow = line.text.find("->");
            if (arrow == std::string::npos) fail("expected 'symbol^k -> expr'", line.number);
            std::string lhs = trim(line.text.substr(0, arrow));
            std::string rhs = trim(line.text.substr(arrow + 2));
            auto caret = lhs.find('^');
            if (caret == std::string::npos) fail("rewrite pattern needs a power", line.number);
            Symbol s = table.at(trim(lhs.substr(0, caret)));
            int power = std::stoi(trim(lhs.substr(caret + 1)));
            m.rewrites.add_rule(s, power, parse_in(rhs, table, line.number));
        }

    std::vector<Expr> declared_one_form(m.declared_variables.size(), Expr::zero());
    if (auto* lines = section("one_form"))
        for (auto& line : *lines) {
            auto eq = line.text.find('=');
            if (eq == std::string::npos) fail("expected 'variable = expr'", line.number);
            std::string var = trim(line.text.substr(0, eq));
            for (const std::string& nm : expand_range(var, line.number)) {
                Symbol s = table.at(nm);
                auto idx = std::find(m.declared_variables.begin(), m.declared_variables.end(), s);
                if (idx == m.declared_variables.end())
                    fail("one_form entry for non-variable '" + nm + "'", line.number);
                declared_one_form[idx - m.declared_variables.begin()] =
                    parse_in(trim(line.text.substr(eq + 1)), table, line.number);
            }
        }

    m.potential = Expr::zero();
    if (auto* lines = section("potential")) {
        std::string joined;
        int first_line = 0;
        for (auto& line : *lines) {
            if (!first_line) first_line = line.number;
            joined += line.text + " ";
        }
        if (!trim(joined).empty()) m.potential = parse_in(joined, table, first_line);
    }

    if (auto* lines = section("constraints"))
        for (auto& line : *lines) {
            auto colon = line.text.find(':');
            if (colon == std::string::npos) fail("expected 'label : expr ...'", line.number);
            ConstraintDecl decl;
            decl.label = trim(line.text.substr(0, colon));
            if (decl.label.empty()) fail("empty constraint label", line.number);
            for (auto& existing : m.declared_constraints)
                if (existing.label == decl.label)
                    fail("duplicate constraint label '" + decl.label + "'", line.number);
            std::string rest = trim(line.text.substr(colon + 1));
            // trailing metadata: [origin] and solved_for=name, in any order
            bool metadata = true;
            while (metadata && !rest.empty()) {
                auto space = rest.find_last_of(" \t");
                std::string tail = (space == std::string::npos) ? rest : rest.substr(space + 1);
                if (tail.size() >= 2 && tail.front() == '[' && tail.back() == ']' &&
                    tail.find("..") == std::string::npos) {
                    decl.origin = parse_origin(tail.substr(1, tail.size() - 2), line.number);
                    rest = (space == std::string::npos) ? "" : trim(rest.substr(0, space));
                } else if (tail.rfind("solved_for=", 0) == 0) {
                    decl.solved_for = table.at(tail.substr(11));
                    rest = (space == std::string::npos) ? "" : trim(rest.substr(0, space));
                } else {
                    metadata = false;
                }
            }
            if (rest.empty()) fail("constraint '" + decl.label + "' has no expression", line.number);
            decl.expr = parse_in(rest, table, line.number);
            if (decl.expr.is_zero())
                fail("constraint '" + decl.label + "' is the zero expression", line.number);
            m.declared_constraints.push_back(decl);
        }

    if (auto* lines = section("lagrangian")) {
        LagrangianSpec spec;
        std::string pairs_text, expr_text;
        int pairs_line = 0, expr_line = 0;
        std::string* open_value = nullptr;
        for (auto& line : *lines) {
            auto eq = line.text.find('=');
            std::string key = eq == std::string::npos ? "" : trim(line.text.substr(0, eq));
            if (key == "pairs") {
                pairs_text = trim(line.text.substr(eq + 1));
                pairs_line = line.number;
                open_value = &pairs_text;
            } else if (key == "expr") {
                expr_text = trim(line.text.substr(eq + 1));
                expr_line = line.number;
                open_value = &expr_text;
            } else if (open_value) {
                *open_value += " " + line.text; // continuation
            } else {
                fail("expected 'pairs = ...' or 'expr = ...'", line.number);
            }
        }
        if (pairs_text.empty() || expr_text.empty())
            fail("[lagrangian] needs both pairs and expr");
        spec.pairs = parse_pairs(pairs_text, table, pairs_line);
        for (auto& [c, p] : spec.pairs) {
            std::string vname = c.name() + "_dot";
            spec.velocities.push_back(table.contains(vname)
                                          ? table.at(vname)
                                          : table.declare(vname, SymbolKind::Defined));
        }
        spec.lagrangian = parse_in(expr_text, table, expr_line);
        m.lagrangian = std::move(spec);
    }

    if (auto* lines = section("dirac")) {
        DiracSpec spec;
        std::string pairs_text, h_text, primaries_text;
        int pairs_line = 0, h_line = 0;
        for (auto& line : *lines) {
            auto eq = line.text.find('=');
            if (eq == std::string::npos) fail("expected 'key = value'", line.number);
            std::string key = trim(line.text.substr(0, eq));
            std::string value = trim(line.text.substr(eq + 1));
            if (key == "pairs") {
                pairs_text = value;
                pairs_line = line.number;
            } else if (key == "hamiltonian") {
                h_text = value;
                h_line = line.number;
            } else if (key == "primaries") {
                primaries_text = value;
            } else {
                fail("unknown [dirac] key '" + key + "'", line.number);
            }
        }
        if (pairs_text.empty() || h_text.empty()) fail("[dirac] needs pairs and hamiltonian");
        spec.pairs = parse_pairs(pairs_text, table, pairs_line);
        spec.hamiltonian = parse_in(h_text, table, h_line);
        if (!primaries_text.empty())
            for (const std::string& label : split(primaries_text, ','))
                if (!label.empty()) spec.primary_labels.push_back(label);
        for (const std::string& label : spec.primary_labels) {
            bool found = false;
            for (auto& c : m.declared_constraints) found = found || c.label == label;
            if (!found) fail("[dirac] primary references unknown constraint '" + label + "'");
        }
        m.dirac_input = std::move(spec);
    }

    // assemble xi and inject primary/ad-hoc constraints into the kinetic sector
    m.variables = m.declared_variables;
    m.one_form = declared_one_form;
    for (auto& decl : m.declared_constraints) {
        if (decl.origin == ConstraintOrigin::GaugeFixing) {
            m.pending_gauge.push_back(decl);
            continue;
        }
        ConstraintDecl injected = decl;
        Symbol mult = table.declare(table.fresh_name("eta"), SymbolKind::Multiplier);
        injected.multiplier = mult;
        m.variables.push_back(mult);
        m.one_form.push_back(injected.expr);
        m.chain.push_back(std::move(injected));
    }
    return m;
}

Model parse_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ModelError("cannot open model file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string stem = path;
    if (auto slash = stem.find_last_of("/\\"); slash != std::string::npos)
        stem.erase(0, slash + 1);
    if (auto dot = stem.find_last_of('.'); dot != std::string::npos) stem.erase(dot);
    return parse_model(buf.str(), stem);
}

std::vector<Diagnostic> validate_model(const Model& m) {
    std::vector<Diagnostic> out;
    if (m.variables.size() != m.one_form.size())
        out.push_back({"one-form length differs from variable count", "one_form"});
    for (Symbol s : m.potential.symbols())
        if (s.kind() == SymbolKind::Multiplier)
            out.push_back({"potential mentions multiplier '" + s.name() + "'", "potential"});
    for (auto& c : m.declared_constraints) {
        if (c.expr.is_zero())
            out.push_back({"constraint '" + c.label + "' is zero", "constraints"});
        if (c.solved_for) {
            Symbol s = *c.solved_for;
            int deg = c.expr.num().degree_in(s);
            if (deg == 0) {
                out.push_back({"constraint '" + c.label + "' does not mention solved_for symbol '" +
                                   s.name() + "'",
                               "constraints"});
            } else if (deg > 2) {
                out.push_back({"constraint '" + c.label + "' is_degree > 2 in '" + s.name() + "'",
                               "constraints"});
            } else if (deg == 2 && !c.expr.num().coefficient_of(s, 1).is_zero()) {
                out.push_back({"constraint '" + c.label + "' mixes linear and quadratic terms in '" +
                                   s.name() + "'",
                               "constraints"});
            }
        }
    }
    if (m.options.max_level < 1) out.push_back({"max_level must be >= 1", "options"});
    if (m.options.conserved_degree < 0) out.push_back({"conserved_degree must be >= 0", "options"});
    return out;
}

Model extend_with_constraint(const Model& m, ConstraintDecl c) {
    if (c.expr.is_zero()) throw ModelError("cannot inject the zero constraint");
    for (auto& member : m.chain)
        if (member.expr.proportional_to(c.expr))
            throw ModelError("duplicate constraint: '" + c.label + "' is proportional to '" +
                             member.label + "'");
    Model out = m;
    Symbol mult = out.table->declare(out.table->fresh_name("eta"), SymbolKind::Multiplier);
    c.multiplier = mult;
    out.variables.push_back(mult);
    out.one_form.push_back(c.expr);
    out.chain.push_back(std::move(c));
    return out;
}

std::string pretty_print(const Model& m) {
    std::ostringstream out;
    out << "# " << m.name << "\n";
    if (!m.declared_variables.empty()) {
        out << "[variables]\n";
        for (Symbol s : m.declared_variables)
            out << s.name() << " : " << to_string(s.kind()) << "\n";
    }
    if (!m.parameters.empty()) {
        out << "[parameters]\n";
        for (std::size_t i = 0; i < m.parameters.size(); ++i)
            out << (i ? ", " : "") << m.parameters[i].name();
        out << "\n";
    }
    bool any_one_form = false;
    for (std::size_t i = 0; i < m.declared_variables.size(); ++i)
        any_one_form = any_one_form || !m.one_form[i].is_zero();
    if (any_one_form) {
        out << "[one_form]\n";
        for (std::size_t i = 0; i < m.declared_variables.size(); ++i)
            if (!m.one_form[i].is_zero())
                out << m.declared_variables[i].name() << " = " << m.one_form[i].str() << "\n";
    }
    out << "[potential]\n" << m.potential.str() << "\n";
    if (!m.declared_constraints.empty()) {
        out << "[constraints]\n";
        for (auto& c : m.declared_constraints) {
            out << c.label << " : " << c.expr.str() << " [" << to_string(c.origin) << "]";
            if (c.solved_for) out << " solved_for=" << c.solved_for->name();
            out << "\n";
        }
    }
    if (!m.rewrites.empty()) {
        out << "[rewrites]\n";
        for (auto& r : m.rewrites.rules())
            out << r.symbol.name() << "^" << r.power << " -> " << r.replacement.str() << "\n";
    }
    out << "[options]\n";
    out << "max_level = " << m.options.max_level << "\n";
    out << "conserved_degree = " << m.options.conserved_degree << "\n";
    if (m.options.time) out << "time = " << m.options.time->name() << "\n";
    for (auto& [s, sign] : m.rewrites.branch_signs())
        out << "branch." << s.name() << " = " << (sign > 0 ? "+" : "-") << "\n";
    if (m.lagrangian) {
        out << "[lagrangian]\n";
        out << "pairs = ";
        for (std::size_t i = 0; i < m.lagrangian->pairs.size(); ++i)
            out << (i ? ", " : "") << m.lagrangian->pairs[i].first.name() << ":"
                << m.lagrangian->pairs[i].second.name();
        out << "\n";
        out << "expr = " << m.lagrangian->lagrangian.str() << "\n";
    }
    if (m.dirac_input) {
        out << "[dirac]\n";
        out << "pairs = ";
        for (std::size_t i = 0; i < m.dirac_input->pairs.size(); ++i)
            out << (i ? ", " : "") << m.dirac_input->pairs[i].first.name() << ":"
                << m.dirac_input->pairs[i].second.name();
        out << "\n";
        out << "hamiltonian = " << m.dirac_input->hamiltonian.str() << "\n";
        if (!m.dirac_input->primary_labels.empty()) {
            out << "primaries = ";
            for (std::size_t i = 0; i < m.dirac_input->primary_labels.size(); ++i)
                out << (i ? ", " : "") << m.dirac_input->primary_labels[i];
            out << "\n";
        }
    }
    return out.str();
}

std::string model_signature(const Model& m) {
    std::ostringstream out;
    for (Symbol s : m.variables) out << s.name() << ":" << to_string(s.kind()) << ";";
    out << "|";
    for (auto& a : m.one_form) out << a.str() << ";";
    out << "|" << m.potential.str() << "|";
    for (auto& c : m.chain) {
        out << c.label << "=" << c.expr.str() << "[" << to_string(c.origin) << "]";
        if (c.solved_for) out << "->" << c.solved_for->name();
        out << ";";
    }
    out << "|";
    for (auto& c : m.pending_gauge) out << c.label << "=" << c.expr.str() << ";";
    out << "|";
    for (auto& r : m.rewrites.rules())
        out << r.symbol.name() << "^" << r.power << "->" << r.replacement.str() << ";";
    for (auto& [s, sign] : m.rewrites.branch_signs()) out << s.name() << (sign > 0 ? "+" : "-");
    out << "|" << m.options.max_level << "," << m.options.conserved_degree;
    if (m.options.time) out << "," << m.options.time->name();
    if (m.lagrangian) {
        out << "|L:";
        for (auto& [c, p] : m.lagrangian->pairs) out << c.name() << ":" << p.name() << ",";
        out << m.lagrangian->lagrangian.str();
    }
    if (m.dirac_input) {
        out << "|D:";
        for (auto& [c, p] : m.dirac_input->pairs) out << c.name() << ":" << p.name() << ",";
        out << m.dirac_input->hamiltonian.str();
        for (auto& l : m.dirac_input->primary_labels) out << "," << l;
    }
    return out.str();
}

// --- reduction helpers ------------------------------------------------------

std::optional<Expr> solve_linear(const Expr& c, Symbol s) {
    const Polynomial& p = c.num();
    if (p.degree_in(s) != 1 || c.den().contains(s)) return std::nullopt;
    Polynomial b = p.coefficient_of(s, 1);
    Polynomial g = p.coefficient_of(s, 0);
    return Expr::from_poly(-g) / Expr::from_poly(b);
}

namespace {

bool parameter_only(const Expr& e) {
    for (Symbol s : e.symbols())
        if (s.kind() != SymbolKind::Parameter && s.kind() != SymbolKind::IntegrationConstant)
            return false;
    return true;
}

} // namespace

std::optional<Symbol> pick_solve_symbol(const Expr& c, const std::vector<Symbol>& order) {
    auto candidate = [&](SymbolKind kind) -> std::optional<Symbol> {
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            Symbol s = *it;
            if (s.kind() != kind) continue;
            if (c.num().degree_in(s) != 1 || c.den().contains(s)) continue;
            Expr coeff = Expr::from_poly(c.num().coefficient_of(s, 1));
            if (!coeff.is_zero() && parameter_only(coeff)) return s;
        }
        return std::nullopt;
    };
    for (SymbolKind kind :
         {SymbolKind::Coordinate, SymbolKind::Momentum, SymbolKind::Multiplier, SymbolKind::Defined})
        if (auto s = candidate(kind)) return s;
    return std::nullopt;
}

Expr reduce_mod_chain(const Expr& e, const std::vector<ConstraintDecl>& chain,
                      const RewriteSystem& rewrites) {
    Expr cur = rewrites.reduce(e);
    for (auto& member : chain) {
        if (!member.solved_for || cur.is_zero()) continue;
        Symbol s = *member.solved_for;
        int deg = member.expr.num().degree_in(s);
        if (deg == 1) {
            auto sol = solve_linear(member.expr, s);
            if (!sol) throw ModelError("chain member '" + member.label + "' not solvable for " +
                                       s.name());
            cur = cur.substitute(s, *sol);
        } else if (deg == 2 && member.expr.num().coefficient_of(s, 1).is_zero()) {
            Polynomial alpha = member.expr.num().coefficient_of(s, 2);
            Polynomial gamma = member.expr.num().coefficient_of(s, 0);
            RewriteSystem local;
            local.add_rule(s, 2, Expr::from_poly(-gamma) / Expr::from_poly(alpha));
            cur = local.reduce(cur);
        } else {
            throw ModelError("chain member '" + member.label + "' with solved_for=" + s.name() +
                             " is not linearly or quadratically solvable");
        }
    }
    return cur;
}

bool reduces_to_zero_mod_chain(const Expr& e, const std::vector<ConstraintDecl>& chain,
                               const RewriteSystem& rewrites) {
    Expr cur = reduce_mod_chain(e, chain, rewrites);
    if (cur.is_zero()) return true;
    for (auto& member : chain)
        if (cur.is_multiple_of(rewrites.reduce(member.expr))) return true;
    return false;
}

} // namespace symcon

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_support.hpp"

#include "symcon/dirac.hpp"
#include "symcon/dynamics.hpp"
#include "symcon/report.hpp"

#include <algorithm>

using namespace symcon;

namespace {

std::string model_path(const char* name) { return std::string(SYMCON_MODEL_DIR) + "/" + name; }

/// Terminal bracket table and state of the modified run on toy.model.
struct ToyTerminal {
    Model model;
    AnalysisReport report;
    ToyTerminal() : model(parse_model_file(model_path("toy.model"))), report(run_modified_bw(model)) {}
};

} // namespace

TEST_CASE("hamilton equations under the reduced and unreduced toy potentials") {
    ToyTerminal toy;
    const SymbolTable& t = *toy.model.table;
    const BracketTable& g = *toy.report.verdict.brackets;

    SUBCASE("reduced potential") {
        MotionSystem ms = hamilton_equations(g, parse_expr("(b - a^2)*p_x^2/(2*b)", t));
        REQUIRE(ms.rhs.size() == 4); // x, p_x, y, eta1
        CHECK(ms.rhs[0] == Expr::var(t.at("p_x")));
        CHECK(ms.rhs[1].is_zero());
        CHECK(ms.rhs[2] == Expr::var(t.at("p_x")));
        CHECK(ms.rhs[3] == parse_expr("-a*p_x/b", t));
    }

    SUBCASE("unreduced potential") {
        MotionSystem ms = hamilton_equations(g, toy.report.final_model.potential);
        Expr common = parse_expr("b*(-p_x + a*(x - y))/(a^2 - b)", t);
        CHECK(ms.rhs[0] == common);
        CHECK(ms.rhs[1].is_zero());
        CHECK(ms.rhs[2] == common);
        CHECK(ms.rhs[3] == parse_expr("(a*p_x - b*(x - y))/(a^2 - b)", t));
    }

    SUBCASE("constant Hamiltonian gives the zero flow") {
        MotionSystem ms = hamilton_equations(g, Expr::from_int(5));
        for (auto& r : ms.rhs) CHECK(r.is_zero());
    }
}

TEST_CASE("conserved search on the unreduced toy system") {
    ToyTerminal toy;
    const SymbolTable& t = *toy.model.table;
    MotionSystem ms = hamilton_equations(*toy.report.verdict.brackets,
                                         toy.report.final_model.potential);

    std::vector<Expr> span = conserved_search(ms, 1);
    REQUIRE(span.size() == 2);

    std::vector<Symbol> vars = toy.report.verdict.brackets->basis;
    CHECK(in_span(parse_expr("p_x", t), span, vars).has_value());
    CHECK(in_span(parse_expr("x - y", t), span, vars).has_value());
    CHECK(in_span(parse_expr("-b*p_x + a*b*(x - y)", t), span, vars).has_value());
    CHECK(!in_span(parse_expr("x + y", t), span, vars).has_value());

    SUBCASE("every member of the span is symbolically conserved") {
        for (const Expr& q : span) {
            Expr qdot = Expr::zero();
            for (std::size_t i = 0; i < vars.size(); ++i)
                qdot += q.derivative(vars[i]) * ms.rhs[i];
            CHECK(qdot.is_zero());
        }
    }

    SUBCASE("the Hamiltonian itself is conserved") {
        Expr hdot = Expr::zero();
        for (std::size_t i = 0; i < vars.size(); ++i)
            hdot += ms.hamiltonian.derivative(vars[i]) * ms.rhs[i];
        CHECK(hdot.is_zero());
    }

    SUBCASE("ansatz cap") {
        CHECK_THROWS_AS(conserved_search(ms, 4, 10), std::invalid_argument);
    }
}

TEST_CASE("angular momentum appears in the sphere-constrained flow at degree 2") {
    // two-dimensional constrained table, built directly
    SymbolTable table;
    Symbol q1 = table.declare("q1", SymbolKind::Coordinate);
    Symbol q2 = table.declare("q2", SymbolKind::Coordinate);
    Symbol p1 = table.declare("p1", SymbolKind::Momentum);
    Symbol p2 = table.declare("p2", SymbolKind::Momentum);

    Expr qq = parse_expr("q1^2 + q2^2", table);
    BracketTable g{{q1, q2, p1, p2}, ExprMatrix(4, 4)};
    auto set = [&](std::size_t i, std::size_t j, const Expr& e) {
        g.entries.at(i, j) = e;
        g.entries.at(j, i) = -e;
    };
    // {q_i, p_j} = delta - q_i q_j / q^2, {p_i, p_j} = (p_i q_j - q_i p_j)/q^2
    set(0, 2, Expr::one() - Expr::var(q1) * Expr::var(q1) / qq);
    set(0, 3, -Expr::var(q1) * Expr::var(q2) / qq);
    set(1, 2, -Expr::var(q2) * Expr::var(q1) / qq);
    set(1, 3, Expr::one() - Expr::var(q2) * Expr::var(q2) / qq);
    set(2, 3, (Expr::var(p1) * Expr::var(q2) - Expr::var(q1) * Expr::var(p2)) / qq);

    MotionSystem ms = hamilton_equations(g, parse_expr("(p1^2 + p2^2)/2", table));
    std::vector<Expr> span = conserved_search(ms, 2);
    Expr angular = parse_expr("q1*p2 - q2*p1", table);
    CHECK(in_span(angular, span, g.basis).has_value());

    for (const Expr& q : span) {
        Expr qdot = Expr::zero();
        for (std::size_t i = 0; i < g.basis.size(); ++i)
            qdot += q.derivative(g.basis[i]) * ms.rhs[i];
        CHECK(qdot.is_zero());
    }
}

TEST_CASE("promotion to an eom-derived constraint") {
    ToyTerminal toy;
    const SymbolTable& t = *toy.model.table;

    ConstraintDecl sigma = promote_to_constraint(parse_expr("p_x", t), *toy.model.table);
    CHECK(sigma.origin == ConstraintOrigin::EomDerived);
    CHECK(sigma.expr == parse_expr("p_x - c1", t));

    ConstraintDecl gamma =
        promote_to_constraint(parse_expr("-b*p_x + a*b*(x - y)", t), *toy.model.table, "Gamma");
    CHECK(gamma.label == "Gamma");
    CHECK(gamma.expr == parse_expr("-b*p_x + a*b*(x - y) - c2", t));

    CHECK_THROWS_AS(promote_to_constraint(Expr::zero(), *toy.model.table), std::invalid_argument);
}

TEST_CASE("the full toy pipeline ends in the symmetry verdict") {
    // conserved search -> promote -> inject -> modified run
    ToyTerminal toy;
    const SymbolTable& t = *toy.model.table;
    MotionSystem ms = hamilton_equations(*toy.report.verdict.brackets,
                                         toy.report.final_model.potential);
    std::vector<Expr> span = conserved_search(ms, 1);
    Expr theta2 = parse_expr("-b*p_x + a*b*(x - y)", t);
    REQUIRE(in_span(theta2, span, toy.report.verdict.brackets->basis).has_value());

    ConstraintDecl gamma = promote_to_constraint(theta2, *toy.model.table, "Gamma");
    Model extended = extend_with_constraint(toy.report.final_model, gamma);
    AnalysisReport final_report = run_modified_bw(extended);

    REQUIRE(final_report.verdict.kind == VerdictKind::Symmetry);
    const auto& generator = final_report.verdict.symmetry->generator.components;
    std::vector<Expr> expected{parse_expr("-b", t), Expr::zero(), parse_expr("-b", t),
                               Expr::zero(), -Expr::one()};
    CHECK(proportional_vectors(generator, expected));
    CHECK(final_report.verdict.symmetry->delta_potential.is_zero());

    SUBCASE("symmetry_report mirrors the verdict") {
        SymmetryTransform st =
            symmetry_report(final_report.verdict.symmetry->generator, final_report.final_model);
        CHECK(st.delta_potential.is_zero());
        std::map<std::string, Expr> delta;
        for (auto& [s, e] : st.transformation) delta[s.name()] = e;
        // delta x = delta y, delta p_x = 0, up to the overall scale of the mode
        CHECK(delta.at("x") == delta.at("y"));
        CHECK(delta.at("p_x").is_zero());
        CHECK(!delta.at("x").is_zero());
    }
}

TEST_CASE("symmetry report for the relativistic level-0 mode") {
    Model m = parse_model_file(model_path("relativistic.model"));
    AnalysisReport report = run_modified_bw(m);
    REQUIRE(!report.levels.empty());
    REQUIRE(!report.levels[0].modes.empty());
    SymmetryTransform st = symmetry_report(report.levels[0].modes[0], m);
    CHECK(st.delta_potential.is_zero()); // V = 0

    std::map<std::string, Expr> delta;
    for (auto& [s, e] : st.transformation) delta[s.name()] = e;
    // delta x_mu = 2 p_mu eps, delta multiplier = eps (up to the mode scale)
    Expr scale = delta.at("eta1");
    CHECK(!scale.is_zero());
    CHECK(delta.at("x0") == parse_expr("2*p0", *m.table) * scale);
    CHECK(delta.at("x1") == parse_expr("-2*p1", *m.table) * scale);
    CHECK(delta.at("p0").is_zero());
}

TEST_CASE("numeric oracles") {
    ToyTerminal toy;

    SUBCASE("inverse check on the toy terminal matrix") {
        const ExprMatrix& f = toy.report.levels.back().f.entries;
        const ExprMatrix& g = toy.report.verdict.brackets->entries;
        OracleOptions opts;
        opts.seed = 5;
        auto result = oracle_inverse(f, g, opts);
        CHECK(result.passed);
        CHECK(result.trials == 10);

        // a wrong inverse fails with a witness
        ExprMatrix broken = g;
        broken.at(0, 1) = broken.at(0, 1) + Expr::one();
        auto bad = oracle_inverse(f, broken, opts);
        CHECK(!bad.passed);
        CHECK(!bad.witness.empty());
    }

    SUBCASE("jacobi holds for the canonical table and the toy table") {
        Model m = parse_model_file(model_path("toy.model"));
        PhaseSpace ps{m.lagrangian->pairs};
        OracleOptions opts;
        opts.seed = 6;
        CHECK(oracle_jacobi(poisson_table(ps), opts).passed);
        CHECK(oracle_jacobi(*toy.report.verdict.brackets, opts).passed);
    }

    SUBCASE("antisymmetry") {
        OracleOptions opts;
        opts.seed = 7;
        CHECK(oracle_antisymmetry(toy.report.levels.back().f.entries, opts).passed);
    }

    SUBCASE("determinant cross-check on the hypersphere terminal matrix") {
        Model m = parse_model_file(model_path("hypersphere.model"));
        AnalysisReport report = run_modified_bw(m);
        OracleOptions opts;
        opts.seed = 8;
        opts.trials = 5;
        CHECK(oracle_determinant(report.levels.back().f.entries,
                                 report.levels.back().det, opts)
                  .passed);
    }

    SUBCASE("all-pole sampling exhausts the budget") {
        SymbolTable table;
        Symbol u = table.declare("u", SymbolKind::Coordinate);
        ExprMatrix m(2, 2);
        // poles at every rational with numerator and denominator in [-1, 1]
        Expr den = Expr::var(u) * (Expr::var(u) - Expr::one()) * (Expr::var(u) + Expr::one());
        m.at(0, 1) = Expr::one() / den;
        m.at(1, 0) = -m.at(0, 1);
        OracleOptions opts;
        opts.seed = 9;
        opts.magnitude = 1;
        opts.pole_budget = 25;
        CHECK_THROWS_AS(oracle_antisymmetry(m, opts), OracleError);
    }

    SUBCASE("oracles require at least one trial") {
        OracleOptions opts;
        opts.trials = 0;
        CHECK_THROWS_AS(oracle_antisymmetry(toy.report.levels.back().f.entries, opts),
                        std::invalid_argument);
    }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "symcon/model.hpp"

using namespace symcon;

namespace {

std::string model_path(const char* name) { return std::string(SYMCON_MODEL_DIR) + "/" + name; }

} // namespace

TEST_CASE("hypersphere model parses with the constraint injected") {
    Model m = parse_model_file(model_path("hypersphere.model"));
    REQUIRE(m.variables.size() == 7); // q1..q3, p1..p3, eta1
    CHECK(m.variables[0].name() == "q_1");
    CHECK(m.variables[3].name() == "p_1");
    CHECK(m.variables[6].name() == "eta1");
    CHECK(m.variables[6].kind() == SymbolKind::Multiplier);

    // A = (p, 0, Omega1)
    for (int i = 0; i < 3; ++i) {
        CHECK(m.one_form[i] == Expr::var(m.variables[3 + i]));
        CHECK(m.one_form[3 + i].is_zero());
    }
    CHECK(m.one_form[6] == parse_expr("(q_1^2 + q_2^2 + q_3^2 - 1)/2", *m.table));

    REQUIRE(m.chain.size() == 1);
    CHECK(m.chain[0].label == "Omega1");
    CHECK(m.chain[0].origin == ConstraintOrigin::AdHoc);
    CHECK(m.pending_gauge.empty());

    REQUIRE(m.lagrangian.has_value());
    CHECK(m.lagrangian->pairs.size() == 4);
    CHECK(m.lagrangian->pairs[3].first.name() == "lambda");
    CHECK(m.lagrangian->pairs[3].second.name() == "pi");

    CHECK(validate_model(m).empty());
}

TEST_CASE("toy model parses to the first-order data") {
    Model m = parse_model_file(model_path("toy.model"));
    REQUIRE(m.variables.size() == 3);
    CHECK(m.variables[0].name() == "x");
    CHECK(m.variables[1].name() == "p_x");
    CHECK(m.variables[2].name() == "y");
    CHECK(m.one_form[0] == Expr::var(m.table->at("p_x")));
    CHECK(m.one_form[1].is_zero());
    CHECK(m.one_form[2] == parse_expr("-a*x", *m.table));
    CHECK(m.potential == parse_expr("p_x^2/2 - b*(x - y)^2/2", *m.table));
    CHECK(m.chain.empty());
    CHECK(validate_model(m).empty());
}

TEST_CASE("relativistic models parse with pending gauge fixings") {
    Model m = parse_model_file(model_path("relativistic.model"));
    REQUIRE(m.variables.size() == 9); // x0..x3, p0..p3, eta1 for phi
    CHECK(m.chain.size() == 1);
    CHECK(m.chain[0].label == "phi");
    CHECK(m.chain[0].origin == ConstraintOrigin::Primary);
    REQUIRE(m.pending_gauge.size() == 1);
    CHECK(m.pending_gauge[0].label == "Sigma");
    CHECK(m.options.time.has_value());
    CHECK(m.rewrites.branch(m.table->at("p0")) == 1);
    REQUIRE(m.dirac_input.has_value());
    CHECK(m.dirac_input->primary_labels == std::vector<std::string>{"phi"});
    CHECK(validate_model(m).empty());

    Model z = parse_model_file(model_path("relativistic_zeta.model"));
    CHECK(z.variables.size() == 10); // + zeta, eta1
    CHECK(z.pending_gauge.size() == 2);
    CHECK(validate_model(z).empty());
}

TEST_CASE("empty constraints section yields no chain") {
    Model m = parse_model("[variables]\nx : coordinate\np : momentum\n"
                          "[one_form]\nx = p\n[potential]\np^2/2\n[constraints]\n");
    CHECK(m.chain.empty());
    CHECK(m.variables.size() == 2);
}

TEST_CASE("parse errors") {
    CHECK_THROWS_AS(parse_model("[variables]\nq[1..N] : coordinate\n"), ModelError);
    CHECK_THROWS_AS(parse_model("[variables]\nx : coordinate\nx : momentum\n"), ModelError);
    CHECK_THROWS_AS(parse_model("[variables]\nx : coordinate\n[potential]\nx + zz\n"), ModelError);
    CHECK_THROWS_AS(parse_model("[variables]\nx : coordinate\n[constraints]\nc1 : x [ad-hoc]\n"
                                "c1 : 2*x [ad-hoc]\n"),
                    ModelError);
    CHECK_THROWS_AS(parse_model("x : coordinate\n"), ModelError); // content before a section
    CHECK_THROWS_AS(parse_model("[variables]\nx : coordinate\n[constraints]\nz : 0 [ad-hoc]\n"),
                    ModelError);
}

TEST_CASE("validate_model reports invariant violations") {
    Model bad = parse_model("[variables]\nx : coordinate\np : momentum\nu : multiplier\n"
                            "[one_form]\nx = p\n[potential]\np^2/2 + u*x\n");
    auto diagnostics = validate_model(bad);
    REQUIRE(diagnostics.size() == 1);
    CHECK(diagnostics[0].message.find("multiplier") != std::string::npos);

    SUBCASE("solved_for must occur and be solvable") {
        Model m = parse_model("[variables]\nx : coordinate\np : momentum\ny : coordinate\n"
                              "[parameters]\na, b\n[one_form]\nx = p\n[potential]\np^2/2\n"
                              "[constraints]\nTheta1 : a*p - b*(x - y) [ad-hoc] solved_for=y\n");
        CHECK(validate_model(m).empty());

        Model wrong = parse_model("[variables]\nx : coordinate\np : momentum\ny : coordinate\n"
                                  "[parameters]\na, b\n[one_form]\nx = p\n[potential]\np^2/2\n"
                                  "[constraints]\nTheta1 : a*p - b*x [ad-hoc] solved_for=y\n");
        CHECK(validate_model(wrong).size() == 1);
    }
}

TEST_CASE("pretty_print round-trips every bundled model") {
    for (const char* name :
         {"hypersphere.model", "toy.model", "relativistic.model", "relativistic_zeta.model"}) {
        Model parsed = parse_model_file(model_path(name));
        Model reparsed = parse_model(pretty_print(parsed), parsed.name);
        CHECK(model_signature(parsed) == model_signature(reparsed));
        Model third = parse_model(pretty_print(reparsed), parsed.name);
        CHECK(model_signature(reparsed) == model_signature(third));
    }
}

TEST_CASE("extend_with_constraint appends one multiplier and keeps V") {
    Model m = parse_model_file(model_path("toy.model"));
    ConstraintDecl theta1;
    theta1.label = "Theta1";
    theta1.expr = parse_expr("a*p_x - b*(x - y)", *m.table);
    theta1.origin = ConstraintOrigin::ZeroMode;
    theta1.level = 0;

    Model extended = extend_with_constraint(m, theta1);
    CHECK(extended.variables.size() == m.variables.size() + 1);
    CHECK(extended.potential == m.potential);
    CHECK(extended.one_form.back() == theta1.expr);
    CHECK(extended.chain.size() == 1);
    CHECK(extended.chain.back().multiplier->name() == "eta1");

    SUBCASE("zero and duplicate constraints are rejected") {
        ConstraintDecl zero;
        zero.label = "z";
        zero.expr = Expr::zero();
        CHECK_THROWS_AS(extend_with_constraint(m, zero), ModelError);

        ConstraintDecl dup;
        dup.label = "dup";
        dup.expr = theta1.expr * Expr::from_int(3);
        CHECK_THROWS_AS(extend_with_constraint(extended, dup), ModelError);
    }
}

TEST_CASE("reduction helpers") {
    Model m = parse_model_file(model_path("toy.model"));
    Expr theta1 = parse_expr("a*p_x - b*(x - y)", *m.table);

    SUBCASE("linear solve") {
        auto sol = solve_linear(theta1, m.table->at("y"));
        REQUIRE(sol.has_value());
        CHECK(*sol == parse_expr("x - a*p_x/b", *m.table));
        CHECK(!solve_linear(parse_expr("x^2 - 1", *m.table), m.table->at("x")).has_value());
    }

    SUBCASE("solve symbol preference: coordinates from the back") {
        auto s = pick_solve_symbol(theta1, m.variables);
        REQUIRE(s.has_value());
        CHECK(s->name() == "y");
        // only non-parameter coefficients available: no pick
        Expr omega2 = parse_expr("x*p_x", *m.table);
        CHECK(!pick_solve_symbol(omega2, m.variables).has_value());
    }

    SUBCASE("weak zero modulo the chain") {
        std::vector<ConstraintDecl> chain(1);
        chain[0].label = "Theta1";
        chain[0].expr = theta1;
        RewriteSystem rw;
        CHECK(reduces_to_zero_mod_chain(theta1 * Expr::from_int(3), chain, rw));
        CHECK(reduces_to_zero_mod_chain(theta1 * Expr::var(m.table->at("x")), chain, rw));
        Expr theta2 = parse_expr("-b*p_x + a*b*(x - y)", *m.table);
        CHECK(!reduces_to_zero_mod_chain(theta2, chain, rw));

        chain[0].solved_for = m.table->at("y");
        CHECK(reduces_to_zero_mod_chain(theta1 * Expr::from_int(3), chain, rw));
        CHECK(!reduces_to_zero_mod_chain(theta2, chain, rw));
    }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "relgeo/expr.hpp"
#include "support/fd.hpp"
#include "support/random_gen.hpp"

using namespace relgeo;
using relgeo::testing::Rng;

TEST_CASE("parsing builds the expected tree") {
    const ExprPtr e = parse_expression("cos(u1)*cos(u2)", 2);
    REQUIRE(e->kind == Expr::Kind::Mul);
    CHECK(e->args[0]->kind == Expr::Kind::Call);
    CHECK(e->args[0]->name == "cos");
    CHECK(e->args[0]->args[0]->var == 0);
    CHECK(e->args[1]->args[0]->var == 1);

    CHECK_NOTHROW(parse_expression("1 + 0.1*sin(u1)", 2));
}

TEST_CASE("variables beyond the chart dimension are rejected") {
    CHECK_THROWS_AS(parse_expression("u3", 2), UnknownIdentifier);
    CHECK_NOTHROW(parse_expression("u3", 3));
}

TEST_CASE("precedence and associativity") {
    const double p[1] = {2.0};
    auto value = [&](const char* text) { return eval_value(*parse_expression(text, 1), p); };
    CHECK(value("2+3*4") == 14.0);
    CHECK(value("2*3+4") == 10.0);
    CHECK(value("2^3^2") == 512.0);  // right-associative
    CHECK(value("-u1^2") == -4.0);   // ^ binds tighter than unary minus
    CHECK(value("2^-1") == 0.5);
    CHECK(value("(2+3)*4") == 20.0);
    CHECK(value("6/3/2") == 1.0);    // left-associative
    CHECK(value("1 - 2 - 3") == -4.0);
    CHECK(value("1.5e2") == 150.0);
}

TEST_CASE("syntax errors carry a position") {
    CHECK_THROWS_AS(parse_expression("1 + * 2", 1), SyntaxError);
    CHECK_THROWS_AS(parse_expression("(1+2", 1), SyntaxError);
    CHECK_THROWS_AS(parse_expression("", 1), SyntaxError);
    CHECK_THROWS_AS(parse_expression("1 2", 1), SyntaxError);
    CHECK_THROWS_AS(parse_expression("sin(1,2)", 1), ArityError);
    CHECK_THROWS_AS(parse_expression("pow(1)", 1), ArityError);
    CHECK_THROWS_AS(parse_expression("foo(1)", 1), UnknownIdentifier);
    try {
        parse_expression("1 + (2 *", 1);
        FAIL("expected SyntaxError");
    } catch (const SyntaxError& err) {
        CHECK(err.pos >= 7);
    }
}

namespace {

ExprPtr random_expr(Rng& rng, int n_vars, int depth) {
    const double pick = rng.uniform(0.0, 1.0);
    if (depth == 0 || pick < 0.25) {
        if (rng.uniform(0.0, 1.0) < 0.5) return Expr::make_number(std::round(rng.uniform(0.0, 9.0)));
        return Expr::make_var(static_cast<int>(rng.uniform(0.0, static_cast<double>(n_vars))));
    }
    if (pick < 0.35) return Expr::make_unary(Expr::Kind::Neg, random_expr(rng, n_vars, depth - 1));
    if (pick < 0.5) {
        const char* fns[] = {"sin", "cos", "exp"};
        return Expr::make_call(fns[static_cast<int>(rng.uniform(0.0, 3.0))],
                               {random_expr(rng, n_vars, depth - 1)});
    }
    const Expr::Kind kinds[] = {Expr::Kind::Add, Expr::Kind::Sub, Expr::Kind::Mul, Expr::Kind::Div,
                                Expr::Kind::Pow};
    const Expr::Kind kind = kinds[static_cast<int>(rng.uniform(0.0, 5.0))];
    return Expr::make_binary(kind, random_expr(rng, n_vars, depth - 1),
                             random_expr(rng, n_vars, depth - 1));
}

}  // namespace

TEST_CASE("parse of the printed form is the same tree") {
    Rng rng(41);
    for (int trial = 0; trial < 200; ++trial) {
        const ExprPtr e = random_expr(rng, 2, 4);
        const std::string text = to_string(*e);
        ExprPtr reparsed;
        CAPTURE(text);
        REQUIRE_NOTHROW(reparsed = parse_expression(text, 2));
        CHECK(expr_equal(*e, *reparsed));
    }
}

TEST_CASE("jet evaluation agrees with plain recursion at order zero") {
    Rng rng(43);
    int checked = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const ExprPtr e = random_expr(rng, 2, 4);
        const double p[2] = {rng.uniform(0.2, 1.5), rng.uniform(0.2, 1.5)};
        double direct = 0.0;
        try {
            direct = eval_value(*e, p);
            if (!std::isfinite(direct) || std::abs(direct) > 1e12) continue;
            const Jet j = eval_jet(*e, p, 3);
            CHECK(j.value() == doctest::Approx(direct).epsilon(1e-12));
            ++checked;
        } catch (const Error&) {
            continue;  // out-of-domain draw
        }
    }
    CHECK(checked > 100);
}

TEST_CASE("eval_jet example: polynomial partials") {
    const double p[2] = {0.5, 1.0};
    const Jet j = eval_jet(*parse_expression("u1^2+u2", 2), p, 2);
    CHECK(j.value() == doctest::Approx(1.25));
    CHECK(j.partial(make_multi_index({1, 0})) == doctest::Approx(1.0));
    CHECK(j.partial(make_multi_index({0, 1})) == doctest::Approx(1.0));
    CHECK(j.partial(make_multi_index({2, 0})) == doctest::Approx(2.0));
    CHECK(j.partial(make_multi_index({1, 1})) == doctest::Approx(0.0));
    CHECK(j.partial(make_multi_index({0, 2})) == doctest::Approx(0.0));
}

TEST_CASE("domain violations surface with expression context") {
    const double p[2] = {0.0, 0.0};
    CHECK_THROWS_AS(eval_jet(*parse_expression("ln(u1)", 2), p, 2), DomainError);
    try {
        eval_jet(*parse_expression("sqrt(u1 - 1)", 2), p, 2);
        FAIL("expected DomainError");
    } catch (const DomainError& err) {
        CHECK(std::string(err.what()).find("sqrt") != std::string::npos);
    }
}

TEST_CASE("jet partials match central finite differences of plain evaluation") {
    const char* functions[] = {
        "sin(u1)*cos(u2) + u1*u2",
        "exp(0.3*u1 - 0.2*u2)",
        "1/(1 + u1^2 + u2^2)",
        "ln(2 + u1) * sqrt(3 + u2)",
        "pow(1 + u1^2, 1.5)",
    };
    Rng rng(47);
    for (const char* text : functions) {
        const ExprPtr e = parse_expression(text, 2);
        relgeo::testing::fd::ScalarFn f = [&](std::span<const double> q) {
            return eval_value(*e, q);
        };
        for (int trial = 0; trial < 4; ++trial) {
            const std::vector<double> p = {rng.uniform(0.1, 0.9), rng.uniform(0.1, 0.9)};
            const Jet j = eval_jet(*e, p, 4);
            for (int a1 = 0; a1 <= 3; ++a1)
                for (int a2 = 0; a2 + a1 <= 3; ++a2) {
                    const std::vector<int> alpha = {a1, a2};
                    const double jet_val = j.partial(make_multi_index({a1, a2}));
                    const double fd_val = relgeo::testing::fd::partial(f, p, alpha);
                    CHECK(std::abs(jet_val - fd_val) <=
                          1e-4 * (1.0 + std::max(std::abs(jet_val), std::abs(fd_val))));
                }
        }
    }
}

TEST_CASE("parameters resolve eagerly") {
    const ExprPtr e = parse_expression("a*u1 + b", 1);
    const ExprPtr r = resolve_params(e, {{"a", 2.0}, {"b", 3.0}});
    const double p[1] = {5.0};
    CHECK(eval_value(*r, p) == 13.0);
    CHECK_THROWS_AS(resolve_params(e, {{"a", 2.0}}), UnknownIdentifier);
    CHECK_THROWS_AS(eval_value(*e, p), UnknownIdentifier);
}

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "levelband/errors.hpp"
#include "levelband/exprlang.hpp"
#include "support.hpp"

using namespace levelband;

namespace {

using ast::Fn;
using ast::Kind;
using ast::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr mk(Node n) { return std::make_shared<const Node>(std::move(n)); }

NodePtr vx() {
    Node n;
    n.kind = Kind::Var;
    n.var = ast::VarName::X;
    return mk(std::move(n));
}
NodePtr vy() {
    Node n;
    n.kind = Kind::Var;
    n.var = ast::VarName::Y;
    return mk(std::move(n));
}
NodePtr pw(NodePtr base, double e) {
    Node n;
    n.kind = Kind::Pow;
    n.a = std::move(base);
    n.exponent = e;
    return mk(std::move(n));
}
NodePtr bin(Kind k, NodePtr a, NodePtr b) {
    Node n;
    n.kind = k;
    n.a = std::move(a);
    n.b = std::move(b);
    return mk(std::move(n));
}
NodePtr neg(NodePtr a) {
    Node n;
    n.kind = Kind::Neg;
    n.a = std::move(a);
    return mk(std::move(n));
}
NodePtr call(Fn f, NodePtr a) {
    Node n;
    n.kind = Kind::Call;
    n.fn = f;
    n.a = std::move(a);
    return mk(std::move(n));
}

ExprAst wrap(NodePtr root) { return {std::move(root), ""}; }

// Expressions exercising every operator and function, all defined on
// (0.1, 2.5)^2 so random-point comparisons never hit a domain fault.
const std::vector<std::string> kCorpus = {
    "x^2 + y^2",
    "exp(-x^2-y^2)",
    "exp(-((x-2)^2+y^2)) + exp(-((x+2)^2+y^2))",
    "x",
    "x^2/4 + y^2",
    "sin(x)*cos(y)",
    "tanh(x*y)",
    "log(2 + x) * sqrt(4 + y)",
    "(x^2 + 1)/(y^2 + 2)",
    "x^2.5 + y^1.5",
    "-x^2 + 3*x*y - y^3",
    "sin(x*y) + cos(x/y)",
};

} // namespace

TEST_CASE("parse produces the documented shapes") {
    const ExprAst sum = parse("x^2 + y^2");
    CHECK(ast_equal(sum, wrap(bin(Kind::Add, pw(vx(), 2.0), pw(vy(), 2.0)))));

    const ExprAst bump = parse("exp(-x^2-y^2)");
    CHECK(ast_equal(
        bump,
        wrap(call(Fn::Exp, bin(Kind::Sub, neg(pw(vx(), 2.0)), pw(vy(), 2.0))))));
}

TEST_CASE("syntax and name errors carry byte offsets") {
    try {
        parse("x + * y");
        FAIL("expected SyntaxError");
    } catch (const SyntaxError& e) {
        CHECK(e.offset == 4);
    }
    try {
        parse("foo(x)");
        FAIL("expected UnknownFunction");
    } catch (const UnknownFunction& e) {
        CHECK(e.offset == 0);
    }
    try {
        parse("x + z");
        FAIL("expected UnknownVariable");
    } catch (const UnknownVariable& e) {
        CHECK(e.offset == 4);
    }
    CHECK_THROWS_AS(parse(""), SyntaxError);
    CHECK_THROWS_AS(parse("(x"), SyntaxError);
    CHECK_THROWS_AS(parse("x^y"), SyntaxError);
}

TEST_CASE("pretty-print round-trips to a structurally identical tree") {
    for (const std::string& src : kCorpus) {
        const ExprAst a = parse(src);
        const ExprAst b = parse(pretty_print(a));
        CHECK_MESSAGE(ast_equal(a, b), src, " -> ", pretty_print(a));
    }
}

TEST_CASE("documented evaluation examples") {
    const Jet2 s = eval_taylor2(parse("x^2 + y^2"), {1.0, 2.0});
    CHECK(s.value == 5.0);
    CHECK(s.grad.x == 2.0);
    CHECK(s.grad.y == 4.0);
    CHECK(s.hess.xx == 2.0);
    CHECK(s.hess.xy == 0.0);
    CHECK(s.hess.yy == 2.0);

    const Jet2 m = eval_taylor2(parse("x*y"), {3.0, -1.0});
    CHECK(m.value == -3.0);
    CHECK(m.grad.x == -1.0);
    CHECK(m.grad.y == 3.0);
    CHECK(m.hess.xx == 0.0);
    CHECK(m.hess.xy == 1.0);
    CHECK(m.hess.yy == 0.0);

    const double e1 = std::exp(-1.0);
    const Jet2 g = eval_taylor2(parse("exp(-x^2-y^2)"), {1.0, 0.0});
    CHECK(g.value == doctest::Approx(e1).epsilon(1e-15));
    CHECK(g.grad.x == doctest::Approx(-2.0 * e1).epsilon(1e-15));
    CHECK(g.grad.y == 0.0);
    CHECK(g.hess.xx == doctest::Approx(2.0 * e1).epsilon(1e-15));
    CHECK(g.hess.xy == 0.0);
    CHECK(g.hess.yy == doctest::Approx(-2.0 * e1).epsilon(1e-15));
}

TEST_CASE("AD jets match central finite differences on the corpus") {
    std::mt19937 rng(7321);
    for (const std::string& src : kCorpus) {
        const ExprAst expr = parse(src);
        auto val = [&](double x, double y) { return eval_taylor2(expr, {x, y}).value; };
        for (int k = 0; k < 50; ++k) {
            const double x = testsupport::uniform(rng, 0.1, 2.5);
            const double y = testsupport::uniform(rng, 0.1, 2.5);
            const Jet2 a = eval_taylor2(expr, {x, y});
            const Jet2 n = testsupport::fd_jet(val, x, y, 1e-5, 1e-4);
            CHECK(std::fabs(a.grad.x - n.grad.x) <= 1e-6 * (1.0 + std::fabs(n.grad.x)));
            CHECK(std::fabs(a.grad.y - n.grad.y) <= 1e-6 * (1.0 + std::fabs(n.grad.y)));
            CHECK(std::fabs(a.hess.xx - n.hess.xx) <= 1e-4 * (1.0 + std::fabs(n.hess.xx)));
            CHECK(std::fabs(a.hess.xy - n.hess.xy) <= 1e-4 * (1.0 + std::fabs(n.hess.xy)));
            CHECK(std::fabs(a.hess.yy - n.hess.yy) <= 1e-4 * (1.0 + std::fabs(n.hess.yy)));
        }
    }
}

TEST_CASE("product rule for the mixed partial holds exactly") {
    std::mt19937 rng(5150);
    for (int k = 0; k < 200; ++k) {
        Taylor2 a, b;
        for (double* slot : {&a.v, &a.dx, &a.dy, &a.dxx, &a.dxy, &a.dyy, &b.v, &b.dx,
                             &b.dy, &b.dxx, &b.dxy, &b.dyy})
            *slot = testsupport::uniform(rng, -2.0, 2.0);
        const Taylor2 p = a * b;
        const double expected = a.dxy * b.v + a.dx * b.dy + a.dy * b.dx + a.v * b.dxy;
        CHECK(p.dxy == expected);
    }
}

TEST_CASE("compiled expression matches the builtin paraboloid pointwise") {
    const auto compiled =
        compile_field(parse("x^2 + y^2"), {-3.0, 3.0, -3.0, 3.0});
    const auto exact = builtin_field("paraboloid");
    std::mt19937 rng(99);
    for (int k = 0; k < 100; ++k) {
        const Point2 p{testsupport::uniform(rng, -3.0, 3.0),
                       testsupport::uniform(rng, -3.0, 3.0)};
        const Jet2 a = compiled->jet(p);
        const Jet2 b = exact->jet(p);
        CHECK(a.value == doctest::Approx(b.value).epsilon(1e-15));
        CHECK(a.grad.x == doctest::Approx(b.grad.x).epsilon(1e-15));
        CHECK(a.grad.y == doctest::Approx(b.grad.y).epsilon(1e-15));
        CHECK(a.hess.xx == doctest::Approx(b.hess.xx).epsilon(1e-15));
        CHECK(a.hess.yy == doctest::Approx(b.hess.yy).epsilon(1e-15));
    }
}

TEST_CASE("expression 'x' has an exactly vanishing Hessian everywhere") {
    const ExprAst x = parse("x");
    std::mt19937 rng(31);
    for (int k = 0; k < 20; ++k) {
        const Jet2 j = eval_taylor2(
            x, {testsupport::uniform(rng, -5.0, 5.0), testsupport::uniform(rng, -5.0, 5.0)});
        CHECK(j.hess.xx == 0.0);
        CHECK(j.hess.xy == 0.0);
        CHECK(j.hess.yy == 0.0);
        CHECK(j.grad.x == 1.0);
        CHECK(j.grad.y == 0.0);
    }
}

TEST_CASE("domain faults are raised where derivatives blow up") {
    CHECK_THROWS_AS(eval_taylor2(parse("log(x)"), {0.0, 0.0}), DomainFault);
    CHECK_THROWS_AS(eval_taylor2(parse("log(x)"), {-1.0, 0.0}), DomainFault);
    CHECK_THROWS_AS(eval_taylor2(parse("sqrt(x)"), {-0.5, 0.0}), DomainFault);
    CHECK_THROWS_AS(eval_taylor2(parse("1/(x - 1)"), {1.0, 0.0}), DomainFault);
    CHECK_THROWS_AS(eval_taylor2(parse("x^2.5"), {-1.0, 0.0}), DomainFault);
    CHECK_NOTHROW(eval_taylor2(parse("log(x)"), {0.5, 0.0}));
}

TEST_CASE("negated and chained exponents evaluate correctly") {
    const Jet2 inv = eval_taylor2(parse("x^-2"), {2.0, 0.0});
    CHECK(inv.value == 0.25);
    CHECK(inv.grad.x == doctest::Approx(-0.25).epsilon(1e-15));
    CHECK(eval_taylor2(parse("2^3^2"), {0.0, 0.0}).value == 512.0);
    const Jet2 cube = eval_taylor2(parse("x^3"), {0.0, 0.0});
    CHECK(cube.value == 0.0);
    CHECK(cube.grad.x == 0.0);
    CHECK(cube.hess.xx == 0.0);
}

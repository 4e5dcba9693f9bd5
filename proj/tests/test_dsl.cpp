#include "test_support.hpp"

#include "tmcalc/dsl.hpp"
#include "tmcalc/error.hpp"
#include "tmcalc/lifts.hpp"
#include "tmcalc/operators.hpp"

#include <catch_amalgamated.hpp>

using namespace tmcalc;
using tmcalc::testing::Gen;

namespace {

using F = Form<ScalarExpr>;
using V = VectorField<ScalarExpr>;
using BF = BaseForm<ScalarExpr>;

const ScalarExpr x = ScalarExpr::base(1), y = ScalarExpr::base(2);
const ScalarExpr v = ScalarExpr::fiber(1), w = ScalarExpr::fiber(2);

ErrorKind kind_of(const std::string& text) {
    try {
        evaluate(text);
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error for " << text);
    return ErrorKind::InvalidArgument;
}

} // namespace

TEST_CASE("dsl examples", "[dsl]") {
    const Value lifted = evaluate("m=2; clift((-x2*dx1 + x1*dx2)/(x1^2+x2^2))");
    const BF angle((-y * F::dx(2, 1) + x * F::dx(2, 2)).scaled(1 / (x * x + y * y)));
    CHECK(std::get<F>(lifted) == complete_lift(angle));
    CHECK(std::get<F>(lifted) == exterior_derivative(F::scalar(2, (x * w - y * v) / (x * x + y * y))));

    CHECK(std::get<F>(evaluate("m=1; db(v1)")) == F::dx(1, 1));

    const F dd = std::get<F>(evaluate("m=1; d(d(f))"));
    CHECK(dd.is_zero());
    CHECK(dd.degree() == 2);
}

TEST_CASE("dsl operators and precedence", "[dsl]") {
    CHECK(std::get<F>(evaluate("m=1; -x1^2")).value() == -(x * x));
    CHECK(std::get<F>(evaluate("m=1; 3/2*x1")).value() == ScalarExpr(Rational(3, 2)) * x);
    CHECK(std::get<F>(evaluate("m=1; x1^-1")).value() == 1 / x);
    CHECK(std::get<F>(evaluate("m=2; dx1^dv1 - dv1^dx1")) == F::monomial(2, slot_bit(0) | slot_bit(2), ScalarExpr(2)));
    CHECK(std::get<F>(evaluate("m=2; x1*dx1^dx2")) == F::monomial(2, 3, x));
    CHECK(std::get<V>(evaluate("m=2; xi")) == tautological_field<ScalarExpr>(2));
    CHECK(std::get<VVForm<ScalarExpr>>(evaluate("m=2; tensor(dx1, pv1) + tensor(dx2, pv2)")) ==
          mirror_map<ScalarExpr>(2));
    CHECK(std::get<F>(evaluate("m=2; lie(xi, clift(x1*dx2))")) == complete_lift(BF(x * F::dx(2, 2))));
    CHECK(std::get<F>(evaluate("m=2; lie(B, x1*v2)")) == db(F::scalar(2, x * w)));
    CHECK(std::get<F>(evaluate("m=1; ins(id, dx1^dv1)")) == F::monomial(1, 3, ScalarExpr(2)));
    CHECK(std::get<V>(evaluate("m=1; vlift(x1*px1)")) == V(1, {ScalarExpr(), x}));
    CHECK(std::get<F>(evaluate("m=1; pull(x1*dx1)")) == F::monomial(1, 1, x));
    CHECK(std::get<V>(evaluate("m=1; bracket(px1, x1*pv1)")) == V::coordinate(1, 1));
    CHECK(std::get<VVForm<ScalarExpr>>(evaluate("m=2; fn(B)")).is_zero());
}

TEST_CASE("dsl declarations", "[dsl]") {
    const DslDocument doc = parse(R"(
        m = 2
        fun phi : base       # a function on M
        let w = phi*dx1 +
                x2*dx2
        d(w)
    )");
    CHECK(doc.m == 2);
    REQUIRE(doc.functions.count("phi"));
    CHECK(doc.functions.at("phi").base_only());
    REQUIRE(doc.result);
    const FunctionSymbol phi = doc.functions.at("phi");
    CHECK(std::get<F>(*doc.result) ==
          F::monomial(2, 3, -ScalarExpr::symbol(phi, {CoordinateId::base(2)})));
    // base-only symbols lift with no fiber partials
    CHECK(std::get<F>(evaluate("m=1; fun g : base; clift(g)")).value() ==
          v * ScalarExpr::symbol(FunctionSymbol{"g", Dependence::BaseOnly}, {CoordinateId::base(1)}));
    CHECK(to_text(std::get<F>(evaluate("m=2; D(f, x1, v2)")).value()) == "D(f, x1, v2)");
    CHECK(std::get<F>(evaluate("x1", 1)).value() == x);
}

TEST_CASE("dsl errors", "[dsl]") {
    CHECK(kind_of("m=2; x3") == ErrorKind::IndexOutOfRange);
    CHECK(kind_of("m=2; dv0") == ErrorKind::IndexOutOfRange);
    CHECK(kind_of("m=0; 1") == ErrorKind::IndexOutOfRange);
    CHECK(kind_of("m=2; phi") == ErrorKind::UndeclaredName);
    CHECK(kind_of("m=2; (x1 + ") == ErrorKind::SyntaxError);
    CHECK(kind_of("m=2; x1 $ x2") == ErrorKind::SyntaxError);
    CHECK(kind_of("x1") == ErrorKind::SyntaxError);
    CHECK(kind_of("m=2; let x1 = 1") == ErrorKind::SyntaxError);
    CHECK(kind_of("m=2; dx1 + x1") == ErrorKind::TypeMismatch);
    CHECK(kind_of("m=2; dx1 * dx2") == ErrorKind::TypeMismatch);
    CHECK(kind_of("m=2; ins(dx1)") == ErrorKind::ArityMismatch);
    CHECK(kind_of("m=2; pull(v1*dx1)") == ErrorKind::NotBaseOnly);
    CHECK(kind_of("m=2; dx1 / (x1 - x1)") == ErrorKind::ZeroDenominator);
    try {
        evaluate("m=2\nlet a = dx1\nd(a +)");
        FAIL("expected a syntax error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::SyntaxError);
        CHECK(std::string(e.what()).find("line 3, column 6") != std::string::npos);
        CHECK(std::string(e.what()).find("expected an expression") != std::string::npos);
    }
}

TEST_CASE("parse inverts text rendering", "[dsl][property]") {
    Gen g(80);
    int checked = 0;
    for (int t = 0; t < 200; ++t) {
        const int m = g.integer(1, 3);
        if (t % 2 == 0) {
            F a = g.form(m, g.integer(0, 2 * m));
            if (g.coin(30)) a = a.scaled(1 / g.nonzero_poly(m, false));
            const std::string text = render(a, Format::Text);
            INFO(text);
            CHECK(parse_form(text, m) == a);
        } else {
            V X = g.field(m);
            if (g.coin(30)) X = X.scaled(g.rational_function(m, false));
            const std::string text = render(X, Format::Text);
            INFO(text);
            CHECK(parse_field(text, m) == X);
        }
        ++checked;
    }
    CHECK(checked == 200);

    const ScalarExpr fx = ScalarExpr::symbol(FunctionSymbol{"f", Dependence::Full}, {CoordinateId::base(1)});
    const F with_symbol = F::dx(2, 1).scaled(fx * v - ScalarExpr(3)) + F::dv(2, 2).scaled(fx / (x + 1));
    CHECK(parse_form(render(with_symbol, Format::Text), 2) == with_symbol);
}

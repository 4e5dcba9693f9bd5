#include "test_support.hpp"

#include "tmcalc/error.hpp"
#include "tmcalc/scalar.hpp"

#include <catch_amalgamated.hpp>

using namespace tmcalc;
using tmcalc::testing::Gen;

namespace {

const ScalarExpr x = ScalarExpr::base(1);
const ScalarExpr y = ScalarExpr::base(2);
const ScalarExpr v = ScalarExpr::fiber(1);
const ScalarExpr w = ScalarExpr::fiber(2);
const FunctionSymbol f{"f", Dependence::Full};
const FunctionSymbol h{"h", Dependence::BaseOnly};

ScalarExpr potential() { return (x * w - y * v) / (x * x + y * y); }

} // namespace

TEST_CASE("partial derivatives", "[scalar]") {
    const CoordinateId x1 = CoordinateId::base(1);
    const CoordinateId v1 = CoordinateId::fiber(1);
    const CoordinateId v2 = CoordinateId::fiber(2);

    SECTION("product rule with a formal partial") {
        ScalarExpr e = v * ScalarExpr::symbol(f, {x1});
        CHECK(partial(e, x1) == v * ScalarExpr::symbol(f, {x1, x1}));
    }
    SECTION("polynomial calculus") {
        CHECK(partial(x * y + w * w, v2) == 2 * w);
    }
    SECTION("quotient rule on the punctured-plane potential") {
        CHECK(partial(potential(), v1) == -y / (x * x + y * y));
    }
    SECTION("base-only symbols have no fiber partials") {
        CHECK(partial(ScalarExpr::symbol(h), v1).is_zero());
        CHECK_FALSE(partial(ScalarExpr::symbol(f), v1).is_zero());
    }
    SECTION("formal partials commute") {
        CHECK(ScalarExpr::symbol(f, {v1, x1}) == ScalarExpr::symbol(f, {x1, v1}));
    }
}

TEST_CASE("normalization", "[scalar]") {
    CHECK((x * x - 1) / (x - 1) == x + 1);
    CHECK((potential() - potential()).is_zero());
    ScalarExpr p = potential();
    CHECK(normalize(p) == p);
    CHECK(normalize(normalize(p)) == normalize(p));
    CHECK(p.denominator().leading().coeff == 1);
    CHECK_THROWS_MATCHES(x / (y - y), Error, Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.kind() == ErrorKind::ZeroDenominator;
                         }));
    CHECK_THROWS_AS(ScalarExpr::fraction(Polynomial(Rational(1)), Polynomial()), Error);
}

TEST_CASE("multivariate gcd cancels common factors", "[scalar]") {
    // (x+y)(x-2v)(y+1) / ((x+y)(v^2+3)) -> (x-2v)(y+1)/(v^2+3)
    ScalarExpr a = (x + y) * (x - 2 * v) * (y + 1);
    ScalarExpr b = (x + y) * (v * v + 3);
    CHECK(a / b == (x - 2 * v) * (y + 1) / (v * v + 3));
    // cancelling to a polynomial
    CHECK(((x * x - y * y) * (v + w)) / ((x - y) * (w + v)) == x + y);
}

TEST_CASE("substitution", "[scalar]") {
    const CoordinateId x1 = CoordinateId::base(1);
    const CoordinateId x2 = CoordinateId::base(2);
    const CoordinateId v1 = CoordinateId::fiber(1);
    const CoordinateId v2 = CoordinateId::fiber(2);

    SECTION("linear change") {
        Bindings b;
        b.bind(x1, x + y).bind(v1, v + w);
        CHECK(substitute(v, b) == v + w);
    }
    SECTION("chain rule on an explicit function binding") {
        Bindings b;
        b.bind(f, x * y);
        CHECK(substitute(ScalarExpr::symbol(f, {x1}), b) == y);
        CHECK(substitute(ScalarExpr::symbol(f, {x1, x2}), b) == 1);
    }
    SECTION("function binding is composed with the coordinate change") {
        Bindings b;
        b.bind(f, x * x).bind(x1, y + 1);
        CHECK(substitute(ScalarExpr::symbol(f, {x1}), b) == 2 * (y + 1));
    }
    SECTION("bound partial rewrites higher partials") {
        Bindings b;
        b.bind(Generator::function(f, {x1}), x * v);
        CHECK(substitute(ScalarExpr::symbol(f, {x1, v1}), b) == x);
        CHECK(substitute(ScalarExpr::symbol(f), b) == ScalarExpr::symbol(f));
    }
    SECTION("inconsistent partial binding") {
        Bindings b;
        b.bind(f, x * y).bind(Generator::function(f, {x1}), x);
        CHECK_THROWS_MATCHES(substitute(ScalarExpr::symbol(f), b), Error,
                             Catch::Matchers::Predicate<Error>(
                                 [](const Error& e) { return e.kind() == ErrorKind::InconsistentBinding; }));
    }
    SECTION("consistent partial binding is accepted") {
        Bindings b;
        b.bind(f, x * y).bind(Generator::function(f, {x1}), y);
        CHECK(substitute(ScalarExpr::symbol(f, {x1, x2}), b) == 1);
    }
    SECTION("base-only symbol cannot be bound to a fiber expression") {
        Bindings b;
        b.bind(h, v);
        CHECK_THROWS_AS(substitute(ScalarExpr::symbol(h), b), Error);
    }
    (void)v2;
}

TEST_CASE("numeric evaluation", "[scalar]") {
    auto at = [](std::initializer_list<std::pair<CoordinateId, long>> values) {
        std::map<Generator, Rational> point;
        for (const auto& [c, q] : values) point[Generator::coordinate(c)] = q;
        return point;
    };
    const auto x1 = CoordinateId::base(1), x2 = CoordinateId::base(2);
    const auto v1 = CoordinateId::fiber(1), v2 = CoordinateId::fiber(2);

    CHECK(eval_numeric(x + v, at({{x1, 1}, {v1, 2}})) == 3);
    CHECK(eval_numeric(potential(), at({{x1, 1}, {x2, 0}, {v1, 0}, {v2, 5}})) == 5);
    CHECK_THROWS_MATCHES(eval_numeric(1 / x, at({{x1, 0}})), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) { return e.kind() == ErrorKind::PoleAtPoint; }));
    CHECK_THROWS_MATCHES(eval_numeric(x + y, at({{x1, 0}})), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) { return e.kind() == ErrorKind::UnboundGenerator; }));
}

TEST_CASE("text form", "[scalar]") {
    CHECK(to_text(x * w - y * v) == "x1*v2 - x2*v1");
    CHECK(to_text(potential()) == "(x1*v2 - x2*v1)/(x1^2 + x2^2)");
    CHECK(to_text(ScalarExpr(Rational(-3, 4))) == "-3/4");
    CHECK(to_text(ScalarExpr::symbol(f, {CoordinateId::fiber(1), CoordinateId::base(2)})) == "D(f, x2, v1)");
}

// ------------------------------------------------------------ properties

TEST_CASE("ring axioms on random rational functions", "[scalar][property]") {
    Gen g(11);
    for (int trial = 0; trial < 40; ++trial) {
        const int m = g.integer(1, 3);
        ScalarExpr a = g.rational_function(m, false);
        ScalarExpr b = g.poly(m, false);
        ScalarExpr c = g.rational_function(m, true);
        CHECK((a + b) + c == a + (b + c));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a + b == b + a);
        CHECK(a - a == 0);
        if (!b.is_zero()) CHECK((a / b) * b == a);
    }
}

TEST_CASE("equality relations agree and are equivalences", "[scalar][property]") {
    Gen g(12);
    for (int trial = 0; trial < 40; ++trial) {
        ScalarExpr a = g.rational_function(2, false);
        ScalarExpr b = a * g.nonzero_poly(2, false) / g.nonzero_poly(2, false);
        ScalarExpr c = g.rational_function(2, false);
        CHECK(equals(a, a));
        CHECK(equals(a, b) == equals(b, a));
        CHECK(equals(a, b) == (a == b));
        CHECK(equals(a, c) == (a == c));
        if (equals(a, b) && equals(b, c)) CHECK(equals(a, c));
        CHECK(normalize(normalize(b)) == normalize(b));
    }
}

TEST_CASE("Schwarz symmetry", "[scalar][property]") {
    Gen g(13);
    for (int trial = 0; trial < 40; ++trial) {
        const int m = g.integer(1, 3);
        ScalarExpr e = g.rational_function(m, false) + g.poly(m, false) * ScalarExpr::symbol(f);
        CoordinateId c1 = g.coin() ? CoordinateId::base(g.integer(1, m)) : CoordinateId::fiber(g.integer(1, m));
        CoordinateId c2 = g.coin() ? CoordinateId::base(g.integer(1, m)) : CoordinateId::fiber(g.integer(1, m));
        CHECK(partial(partial(e, c1), c2) == partial(partial(e, c2), c1));
    }
}

TEST_CASE("substitution obeys the chain rule", "[scalar][property]") {
    // d/dx_i [e(g(x))] = sum_j (de/dx_j)(g(x)) * dg_j/dx_i
    Gen g(14);
    for (int trial = 0; trial < 25; ++trial) {
        const int m = g.integer(1, 3);
        ScalarExpr e = g.poly(m, true, 4, 3);
        Bindings b;
        std::vector<ScalarExpr> images;
        for (int j = 1; j <= m; ++j) {
            images.push_back(g.poly(m, true, 3, 2));
            b.bind(CoordinateId::base(j), images.back());
        }
        for (int i = 1; i <= m; ++i) {
            const CoordinateId xi = CoordinateId::base(i);
            ScalarExpr lhs = partial(substitute(e, b), xi);
            ScalarExpr rhs;
            for (int j = 1; j <= m; ++j)
                rhs += substitute(partial(e, CoordinateId::base(j)), b) * partial(images[j - 1], xi);
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("numeric evaluation respects arithmetic", "[scalar][property]") {
    Gen g(15);
    for (int trial = 0; trial < 30; ++trial) {
        ScalarExpr a = g.poly(2, false), b = g.poly(2, false);
        std::map<Generator, Rational> pt;
        for (int i = 1; i <= 2; ++i) {
            pt[Generator::coordinate(CoordinateId::base(i))] = Rational(g.integer(-9, 9), g.integer(1, 5));
            pt[Generator::coordinate(CoordinateId::fiber(i))] = Rational(g.integer(-9, 9), g.integer(1, 5));
        }
        for (auto& [k, q] : pt) q.canonicalize();
        CHECK(eval_numeric(a * b + a, pt) == eval_numeric(a, pt) * eval_numeric(b, pt) + eval_numeric(a, pt));
    }
}

TEST_CASE("polynomial gcd recovers planted common factors", "[scalar][property]") {
    Gen g(16);
    for (int trial = 0; trial < 40; ++trial) {
        const int m = g.integer(1, 3);
        Polynomial a = g.poly(m, false).numerator();
        Polynomial b = g.poly(m, false).numerator();
        Polynomial c = g.nonzero_poly(m, false).numerator();
        if (a.is_zero() || b.is_zero()) continue;
        Polynomial d = gcd(a * c, b * c);
        CHECK_NOTHROW(d.divided_by(c));
        CHECK(gcd((a * c).divided_by(d), (b * c).divided_by(d)) == Polynomial(1));
        CHECK(d.leading().coeff == 1);
    }
}

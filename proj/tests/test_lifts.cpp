#include "test_support.hpp"

#include "tmcalc/error.hpp"
#include "tmcalc/lifts.hpp"
#include "tmcalc/render.hpp"

#include <catch_amalgamated.hpp>

using namespace tmcalc;
using tmcalc::testing::Gen;

namespace {

using F = Form<ScalarExpr>;
using V = VectorField<ScalarExpr>;
using BF = BaseForm<ScalarExpr>;
using BV = BaseVectorField<ScalarExpr>;

const ScalarExpr x = ScalarExpr::base(1), y = ScalarExpr::base(2);
const ScalarExpr v = ScalarExpr::fiber(1), w = ScalarExpr::fiber(2);

ScalarExpr lift_fn(const ScalarExpr& f, int m) { return complete_lift_function(f, m); }

// Independent oracle: the 1-form rule on the first factor and the wedge rule
//   (a ^ b)~ = a~ ^ pi*b + pi*a ^ b~.
F complete_lift_oracle(const BF& a) {
    const int m = a.dim();
    if (a.degree() == 0) return F::scalar(m, lift_fn(a.form().value(), m));
    F out(m, a.degree());
    for (const auto& [mask, f] : a.form().terms()) {
        const auto slots = mask_slots(mask);
        const int i = slots.front();
        F first(m, 1);
        first.add(slot_bit(i), lift_fn(f, m));
        first.add(slot_bit(m + i), f);
        const F first_pull = f * F::dx(m, i + 1);
        const BF rest(F::monomial(m, mask & ~slot_bit(i)));
        out += wedge(first, rest.form()) + wedge(first_pull, complete_lift_oracle(rest));
    }
    return out;
}

// Reconstruct a base p-form from the dv-part of its complete lift: the
// coefficient of dx^I with its first dx replaced by dv is a_I.
F reconstruct_from_lift(const F& lifted, int degree) {
    const int m = lifted.dim();
    F out(m, degree);
    for (Mask I = 0; I < (Mask(1) << m); ++I) {
        if (mask_size(I) != degree) continue;
        if (degree == 0) continue;
        const int i = std::countr_zero(I);
        const Mask J = (I & ~slot_bit(i)) | slot_bit(m + i);
        out.add(I, ScalarExpr(wedge_sign(slot_bit(m + i), I & ~slot_bit(i)) * wedge_sign(slot_bit(i), I & ~slot_bit(i))) *
                       lifted.coefficient(J));
    }
    return out;
}

V horizontal(const BV& X) { return horizontal_embedding(X); }

ScalarExpr planar_potential() { return (x * w - y * v) / (x * x + y * y); }
F planar_angle_form() { return (-y * F::dx(2, 1) + x * F::dx(2, 2)).scaled(1 / (x * x + y * y)); }

} // namespace

TEST_CASE("pullback and vertical lift", "[lifts]") {
    const int m = 2;
    CHECK(pullback(BF(F::dx(m, 1))) == F::dx(m, 1));
    CHECK(vertical_lift(BV(m, {1, 0})) == V::coordinate(m, m));
    CHECK(vertical_lift(BV(m, {0, x})) == x * V::coordinate(m, m + 1));
    Gen g(41);
    for (int t = 0; t < 10; ++t) {
        BF alpha(g.form(m, 1, true));
        BV X = g.base_field(m);
        CHECK(evaluate_form(pullback(alpha), {complete_lift(X)}) == base_evaluate(alpha, {X}));
        CHECK(evaluate_form(pullback(alpha), {vertical_lift(X)}).is_zero());
        CHECK(apply(vertical_lift(X), g.poly(m, true)).is_zero());
    }
}

TEST_CASE("complete lift of functions", "[lifts]") {
    CHECK(lift_fn(x, 2) == v);
    CHECK(lift_fn(ScalarExpr(7), 2).is_zero());
    CHECK(lift_fn(x * y, 2) == v * y + x * w);
    CHECK_THROWS_AS(lift_fn(v, 2), Error);
    Gen g(42);
    for (int t = 0; t < 20; ++t) {
        const int m = g.integer(1, 3);
        ScalarExpr f = g.poly(m, true), h = g.poly(m, true);
        CHECK(lift_fn(f * h, m) == lift_fn(f, m) * h + f * lift_fn(h, m));
        CHECK(lift_fn(f + h, m) == lift_fn(f, m) + lift_fn(h, m));
        CHECK(lift_fn(f, m).is_zero() == f.is_constant());
    }
}

TEST_CASE("complete lift of vector fields", "[lifts]") {
    const int m = 2;
    CHECK(complete_lift(BV(m, {1, 0})) == V::coordinate(m, 0));
    CHECK(complete_lift(BV(m, {x, 0})) == x * V::coordinate(m, 0) + v * V::coordinate(m, m));
    Gen g(43);
    for (int t = 0; t < 15; ++t) {
        const int mm = g.integer(1, 3);
        BV X = g.base_field(mm);
        ScalarExpr f = g.poly(mm, true);
        std::vector<ScalarExpr> fX;
        for (int i = 0; i < mm; ++i) fX.push_back(f * X[i]);
        CHECK(complete_lift(BV(mm, fX)) == f * complete_lift(X) + lift_fn(f, mm) * vertical_lift(X));
        CHECK(apply(complete_lift(X), f) == base_apply(X, f));
        CHECK(apply(complete_lift(X), lift_fn(f, mm)) == lift_fn(base_apply(X, f), mm));
    }
}

TEST_CASE("bracket identities of lifted fields", "[lifts]") {
    Gen g(44);
    for (int t = 0; t < 15; ++t) {
        const int m = g.integer(1, 3);
        BV X = g.base_field(m), Y = g.base_field(m);
        const BV XY = base_lie_bracket(X, Y);
        CHECK(lie_bracket(complete_lift(X), complete_lift(Y)) == complete_lift(XY));
        CHECK(lie_bracket(complete_lift(X), vertical_lift(Y)) == vertical_lift(XY));
        CHECK(lie_bracket(vertical_lift(X), vertical_lift(Y)).is_zero());
    }
}

TEST_CASE("complete lift of forms", "[lifts]") {
    const int m = 2;
    SECTION("one-form formula") {
        BF alpha(x * y * F::dx(m, 1) + v.pow(0) * x * F::dx(m, 2));
        F expected = (v * y + x * w) * F::dx(m, 1) + x * y * F::dv(m, 1) + v * F::dx(m, 2) + x * F::dv(m, 2);
        CHECK(complete_lift(alpha) == expected);
    }
    SECTION("the punctured-plane angle form lifts to an exact form") {
        CHECK(complete_lift(BF(planar_angle_form())) == exterior_derivative(F::scalar(m, planar_potential())));
    }
    SECTION("constant 2-form") {
        CHECK(complete_lift(BF(wedge(F::dx(m, 1), F::dx(m, 2)))) ==
              wedge(F::dv(m, 1), F::dx(m, 2)) + wedge(F::dx(m, 1), F::dv(m, 2)));
    }
    SECTION("degree zero delegates to functions") {
        CHECK(complete_lift(BF(F::scalar(m, x * x))) == F::scalar(m, 2 * x * v));
    }
}

TEST_CASE("complete lift agrees with the wedge-rule recursion", "[lifts][property]") {
    Gen g(45);
    for (int t = 0; t < 25; ++t) {
        const int m = g.integer(1, 3);
        BF a(g.form(m, g.integer(0, m), true));
        CHECK(complete_lift(a) == complete_lift_oracle(a));
        CHECK(exterior_derivative(complete_lift(a)) == complete_lift(base_exterior_derivative(a)));
        if (a.degree() > 0) CHECK(reconstruct_from_lift(complete_lift(a), a.degree()) == a.form());
    }
}

TEST_CASE("pairing table", "[lifts][property]") {
    Gen g(46);
    for (int t = 0; t < 20; ++t) {
        const int m = g.integer(1, 3);
        BF alpha(g.form(m, 1, true));
        BV X = g.base_field(m);
        const ScalarExpr aX = base_evaluate(alpha, {X});
        CHECK(evaluate_form(complete_lift(alpha), {vertical_lift(X)}) == aX);
        CHECK(evaluate_form(pullback(alpha), {complete_lift(X)}) == aX);
        CHECK(evaluate_form(complete_lift(alpha), {complete_lift(X)}) == lift_fn(aX, m));
    }
}

TEST_CASE("tautological field and exactness of lifted closed forms", "[lifts][property]") {
    Gen g(47);
    for (int t = 0; t < 20; ++t) {
        const int m = g.integer(1, 3);
        const V xi = tautological_field<ScalarExpr>(m);
        BF alpha(g.form(m, g.integer(0, m), true));
        CHECK(lie_derivative_form(xi, complete_lift(alpha)) == complete_lift(alpha));
        CHECK(lie_derivative_form(xi, pullback(alpha)).is_zero());
        if (alpha.degree() < m) {
            BF closed = base_exterior_derivative(alpha);
            CHECK(exterior_derivative(interior_product(xi, complete_lift(closed))) == complete_lift(closed));
        }
    }
}

TEST_CASE("mirror map", "[lifts]") {
    Gen g(48);
    for (int m = 1; m <= 3; ++m) {
        const auto B = mirror_map<ScalarExpr>(m);
        const V xi = tautological_field<ScalarExpr>(m);
        CHECK(compose(B, B).is_zero());
        CHECK(apply(B, xi).is_zero());
        for (int s = 0; s < 2 * m; ++s) {
            V image = apply(B, V::coordinate(m, s));
            if (s < m) CHECK(image == V::coordinate(m, m + s));
            else CHECK(image.is_zero());
        }
        for (int t = 0; t < 5; ++t) {
            BV X = g.base_field(m);
            CHECK(apply(B, complete_lift(X)) == vertical_lift(X));
            CHECK(lie_derivative_vvform(complete_lift(X), B).is_zero());
            CHECK(lie_derivative_vvform(vertical_lift(X), B).is_zero());
        }
        CHECK(lie_derivative_vvform(xi, B) == -B);
    }
}

TEST_CASE("sprays and mirror fields", "[lifts]") {
    const int m = 2;
    V flat = v * V::coordinate(m, 0) + w * V::coordinate(m, 1);
    CHECK(is_spray(flat));
    CHECK_FALSE(is_spray(tautological_field<ScalarExpr>(m)));
    CHECK(is_spray(flat + (x * w) * V::coordinate(m, 2) - v.pow(2) * V::coordinate(m, 3)));

    auto lambda = is_lambda_mirror(tautological_field<ScalarExpr>(m));
    REQUIRE(lambda);
    CHECK(*lambda == -1);
    auto zero = is_lambda_mirror(complete_lift(BV(m, {x * y, y + 1})));
    REQUIRE(zero);
    CHECK(zero->is_zero());
    CHECK_FALSE(is_lambda_mirror(x * V::coordinate(m, 0)));
}

TEST_CASE("tensor lifts", "[lifts]") {
    const int m = 2;
    SECTION("complete lift of the identity is the identity") {
        std::vector<BaseTensorTerm<ScalarExpr>> identity;
        for (int i = 1; i <= m; ++i) {
            std::vector<ScalarExpr> e(static_cast<std::size_t>(m));
            e[static_cast<std::size_t>(i - 1)] = 1;
            identity.push_back({{BV(m, e)}, {BF(F::dx(m, i))}});
        }
        CHECK(lift_tensor(identity, LiftMode::Complete) == as_tensor(identity_endomorphism<ScalarExpr>(m)));
    }
    SECTION("vertical lift of a mixed tensor") {
        std::vector<BaseTensorTerm<ScalarExpr>> t{{{BV(m, {1, 0})}, {BF(F::dx(m, 1))}}};
        Tensor<ScalarExpr> expected{m, 1, 1, {}};
        expected.add({m, 0}, 1);
        CHECK(lift_tensor(t, LiftMode::Vertical) == expected);
    }
    SECTION("complete lift of a product of fields") {
        Gen g(49);
        for (int k = 0; k < 5; ++k) {
            BV X = g.base_field(m), Y = g.base_field(m);
            Tensor<ScalarExpr> expected = tensor_product<ScalarExpr>(m, {complete_lift(X), vertical_lift(Y)}, {});
            expected += tensor_product<ScalarExpr>(m, {vertical_lift(X), complete_lift(Y)}, {});
            CHECK(lift_tensor<ScalarExpr>({{{X, Y}, {}}}, LiftMode::Complete) == expected);
        }
    }
}

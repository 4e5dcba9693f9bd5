#include "test_support.hpp"

#include "tmcalc/error.hpp"
#include "tmcalc/fd_scalar.hpp"
#include "tmcalc/forms.hpp"
#include "tmcalc/render.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>

using namespace tmcalc;
using tmcalc::testing::Gen;

namespace {

using F = Form<ScalarExpr>;
using V = VectorField<ScalarExpr>;
using K = VVForm<ScalarExpr>;

const ScalarExpr x1 = ScalarExpr::base(1);
const ScalarExpr x2 = ScalarExpr::base(2);
const ScalarExpr y = x2;
const ScalarExpr v1 = ScalarExpr::fiber(1);
const ScalarExpr v2 = ScalarExpr::fiber(2);

V px(int m, int i) { return V::coordinate(m, i - 1); }
V pv(int m, int i) { return V::coordinate(m, m + i - 1); }

// Sign of a permutation given as a vector of distinct ints.
int permutation_sign(std::vector<int> p) {
    int sign = 1;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = i + 1; j < p.size(); ++j)
            if (p[i] > p[j]) sign = -sign;
    return sign;
}

// (a^b)(X_1..X_{p+q}) = sum over (p,q)-shuffles of sgn * a(X_S) * b(X_rest)
ScalarExpr shuffle_oracle(const F& a, const F& b, const std::vector<V>& X) {
    const int p = a.degree(), n = static_cast<int>(X.size());
    std::vector<int> chosen(static_cast<std::size_t>(n), 0);
    std::fill(chosen.end() - p, chosen.end(), 1);
    ScalarExpr total;
    do {
        std::vector<int> order;
        std::vector<V> left, right;
        for (int i = 0; i < n; ++i)
            if (chosen[static_cast<std::size_t>(i)]) order.push_back(i), left.push_back(X[static_cast<std::size_t>(i)]);
        for (int i = 0; i < n; ++i)
            if (!chosen[static_cast<std::size_t>(i)]) order.push_back(i), right.push_back(X[static_cast<std::size_t>(i)]);
        total += ScalarExpr(permutation_sign(order)) * evaluate_form(a, left) * evaluate_form(b, right);
    } while (std::next_permutation(chosen.begin(), chosen.end()));
    return total;
}

template <class E>
bool throws_kind(E&& body, ErrorKind kind) {
    try {
        body();
    } catch (const Error& e) {
        return e.kind() == kind;
    }
    return false;
}

} // namespace

TEST_CASE("wedge product", "[forms]") {
    const int m = 2;
    F w = wedge(F::dx(m, 1), F::dv(m, 1));
    CHECK(w.degree() == 2);
    CHECK(w.terms().size() == 1);
    CHECK(w.coefficient(mask_of({0, 2})) == 1);
    CHECK(wedge(F::dx(m, 1), F::dx(m, 1)).is_zero());
    CHECK(wedge(v1 * F::dx(m, 1), x1 * F::dv(m, 2)) == x1 * v1 * wedge(F::dx(m, 1), F::dv(m, 2)));
    SECTION("degree overflow gives the zero form") {
        F top = wedge(wedge(F::dx(1, 1), F::dv(1, 1)), F::dx(1, 1));
        CHECK(top.is_zero());
        CHECK(top.degree() == 3);
    }
    SECTION("dimension mismatch") {
        CHECK(throws_kind([] { (void)wedge(F::dx(1, 1), F::dx(2, 1)); }, ErrorKind::DimensionMismatch));
    }
}

TEST_CASE("exterior derivative", "[forms]") {
    const int m = 2;
    CHECK(exterior_derivative(F::scalar(m, v1)) == F::dv(m, 1));
    CHECK(exterior_derivative(v1 * F::dx(m, 1)) == wedge(F::dv(m, 1), F::dx(m, 1)));
    CHECK(render(exterior_derivative(v1 * F::dx(m, 1)), Format::Text) == "-dx1^dv1");
}

TEST_CASE("interior product", "[forms]") {
    const int m = 2;
    CHECK(interior_product(px(m, 1), wedge(F::dx(m, 1), F::dx(m, 2))) == F::dx(m, 2));
    CHECK(interior_product(pv(m, 1), v1 * wedge(F::dx(m, 1), F::dv(m, 1))) == -v1 * F::dx(m, 1));
    CHECK(interior_product(px(m, 1), F::scalar(m, x1)).is_zero());
    Gen g(21);
    const V xi = tautological_field<ScalarExpr>(m);
    for (int t = 0; t < 10; ++t) {
        F alpha = g.form(m, g.integer(1, m), true);
        CHECK(interior_product(xi, alpha).is_zero());
    }
}

TEST_CASE("lie bracket", "[forms]") {
    const int m = 2;
    CHECK(lie_bracket(px(m, 1), pv(m, 1)).is_zero());
    CHECK(lie_bracket(tautological_field<ScalarExpr>(m), pv(m, 1)) == -pv(m, 1));
}

TEST_CASE("lie derivative of forms", "[forms]") {
    const int m = 2;
    CHECK(lie_derivative_form(px(m, 1), x1 * F::dx(m, 2)) == F::dx(m, 2));
    Gen g(22);
    const V xi = tautological_field<ScalarExpr>(m);
    for (int t = 0; t < 10; ++t) {
        F alpha = g.form(m, g.integer(0, m), true);
        CHECK(lie_derivative_form(xi, alpha).is_zero());
    }
}

TEST_CASE("lie derivative of vector-valued forms", "[forms]") {
    const int m = 2;
    const K B = mirror_map<ScalarExpr>(m);
    CHECK(lie_derivative_vvform(tautological_field<ScalarExpr>(m), B) == -B);
    Gen g(23);
    for (int t = 0; t < 10; ++t) {
        const V X = g.field(m, true);
        V vertical(m);
        std::vector<ScalarExpr> comps(static_cast<std::size_t>(2 * m));
        for (int i = 0; i < m; ++i) comps[static_cast<std::size_t>(m + i)] = X[i];
        CHECK(lie_derivative_vvform(V(m, comps), B).is_zero());
    }
}

TEST_CASE("form evaluation", "[forms]") {
    const int m = 1;
    F w = wedge(F::dx(m, 1), F::dv(m, 1));
    CHECK(evaluate_form(w, {px(m, 1), pv(m, 1)}) == 1);
    CHECK(evaluate_form(w, {pv(m, 1), px(m, 1)}) == -1);
    CHECK(throws_kind([&] { (void)evaluate_form(w, {px(m, 1)}); }, ErrorKind::ArityMismatch));
    Gen g(24);
    for (int t = 0; t < 10; ++t) {
        const int mm = g.integer(1, 3);
        F alpha = g.form(mm, 1, true);
        std::vector<ScalarExpr> comps(static_cast<std::size_t>(2 * mm));
        for (int i = 0; i < mm; ++i) comps[static_cast<std::size_t>(mm + i)] = g.poly(mm, true);
        CHECK(evaluate_form(alpha, {V(mm, comps)}).is_zero());
    }
}

TEST_CASE("base-level types reject fiber data", "[forms]") {
    CHECK(throws_kind([] { (void)BaseForm<ScalarExpr>(F::dv(1, 1)); }, ErrorKind::NotBaseOnly));
    CHECK(throws_kind([] { (void)BaseForm<ScalarExpr>(v1 * F::dx(1, 1)); }, ErrorKind::NotBaseOnly));
    CHECK(throws_kind([] { (void)BaseVectorField<ScalarExpr>(1, {v1}); }, ErrorKind::NotBaseOnly));
    CHECK(throws_kind([] { (void)BaseVectorField<ScalarExpr>(2, {x1}); }, ErrorKind::DimensionMismatch));
}

TEST_CASE("rendering", "[forms][render]") {
    const int m = 2;
    CHECK(render(3 * x1 * wedge(F::dx(m, 1), F::dv(m, 1)), Format::Text) == "3*x1*dx1^dv1");
    CHECK(render((x1 + v1) * F::dx(m, 2) - F::dv(m, 1), Format::Text) == "(x1 + v1)*dx2 - dv1");
    CHECK(render(F(m, 2), Format::Text) == "0*dx1^dx2");
    CHECK(render(tautological_field<ScalarExpr>(m), Format::Latex) == "v^{1}\\partial_{v^{1}}+v^{2}\\partial_{v^{2}}");
    CHECK(render(wedge(F::dx(m, 1), F::dv(m, 1)), Format::Latex) == "\\mathrm{d}x^{1}\\wedge \\mathrm{d}v^{1}");
    CHECK(render(mirror_map<ScalarExpr>(1), Format::Text) == "tensor(dx1, pv1)");
    CHECK(render(ScalarExpr(Rational(1, 2)) * F::dx(1, 1), Format::Json) ==
          R"({"degree":1,"kind":"form","m":1,"terms":[{"basis":"dx1","den":"2","index":[1],"num":"1","value":"1/2"}]})");
}

// ------------------------------------------------------------ properties

TEST_CASE("d squared vanishes", "[forms][property]") {
    Gen g(31);
    for (int m = 1; m <= 3; ++m)
        for (int p = 0; p <= 2 * m; ++p)
            for (int t = 0; t < 3; ++t) {
                F a = g.form(m, p);
                CHECK(exterior_derivative(exterior_derivative(a)).is_zero());
            }
}

TEST_CASE("Leibniz rule for d", "[forms][property]") {
    Gen g(32);
    for (int t = 0; t < 20; ++t) {
        const int m = g.integer(1, 3);
        F a = g.form(m, g.integer(0, 2)), b = g.form(m, g.integer(0, 2));
        const ScalarExpr sign(a.degree() % 2 ? -1 : 1);
        CHECK(exterior_derivative(wedge(a, b)) ==
              wedge(exterior_derivative(a), b) + sign * wedge(a, exterior_derivative(b)));
        CHECK(wedge(a, b) == ScalarExpr(a.degree() * b.degree() % 2 ? -1 : 1) * wedge(b, a));
    }
}

TEST_CASE("Cartan formula and d-commutation", "[forms][property]") {
    Gen g(33);
    for (int t = 0; t < 20; ++t) {
        const int m = g.integer(1, 3);
        F a = g.form(m, g.integer(0, std::min(3, 2 * m)));
        V X = g.field(m);
        F L = lie_derivative_form(X, a);
        F cartan = interior_product(X, exterior_derivative(a));
        if (a.degree() > 0) cartan += exterior_derivative(interior_product(X, a));
        CHECK(L == cartan);
        CHECK(exterior_derivative(L) == lie_derivative_form(X, exterior_derivative(a)));
        CHECK(interior_product(X, interior_product(X, a)).is_zero());
    }
}

TEST_CASE("Jacobi identity", "[forms][property]") {
    Gen g(34);
    for (int t = 0; t < 15; ++t) {
        const int m = g.integer(1, 3);
        V X = g.field(m), Y = g.field(m), Z = g.field(m);
        CHECK((lie_bracket(X, lie_bracket(Y, Z)) + lie_bracket(Y, lie_bracket(Z, X)) + lie_bracket(Z, lie_bracket(X, Y)))
                  .is_zero());
        CHECK(lie_bracket(X, Y) == -lie_bracket(Y, X));
    }
}

TEST_CASE("wedge evaluation matches the shuffle sum", "[forms][property]") {
    Gen g(35);
    for (int t = 0; t < 20; ++t) {
        const int m = g.integer(1, 2);
        const int p = g.integer(0, 2), q = g.integer(0, 3 - p);
        if (p + q > 2 * m) continue;
        F a = g.form(m, p), b = g.form(m, q);
        std::vector<V> X;
        for (int i = 0; i < p + q; ++i) X.push_back(g.field(m));
        CHECK(evaluate_form(wedge(a, b), X) == shuffle_oracle(a, b, X));
    }
}

TEST_CASE("lie derivative of a vector-valued form obeys its defining property", "[forms][property]") {
    Gen g(36);
    for (int t = 0; t < 15; ++t) {
        const int m = g.integer(1, 2);
        K k = g.vvform(m, 1);
        V W = g.field(m);
        K L = lie_derivative_vvform(W, k);
        for (int s = 0; s < 2 * m; ++s) {
            V Y = V::coordinate(m, s);
            CHECK(apply(L, Y) == lie_bracket(W, apply(k, Y)) - apply(k, lie_bracket(W, Y)));
        }
    }
}

TEST_CASE("finite-difference coefficients track symbolic calculus", "[forms][fd]") {
    Gen g(37);
    auto to_fd = [](const ScalarExpr& c) { return FdScalar(c); };
    for (int t = 0; t < 10; ++t) {
        const int m = g.integer(1, 2);
        F a = g.form(m, g.integer(0, 1));
        V X = g.field(m);
        F exact = lie_derivative_form(X, exterior_derivative(a));
        auto approx = lie_derivative_form(X.map(to_fd), exterior_derivative(a.map(to_fd)));
        ChartPoint p{m, {}};
        std::map<Generator, Rational> pt;
        for (int s = 0; s < 2 * m; ++s) {
            p.values.emplace_back(g.integer(-5, 5), g.integer(1, 3));
            p.values.back().canonicalize();
            pt[Generator::coordinate(CoordinateId::from_slot(m, s))] = p.values.back();
        }
        for (const auto& [mask, c] : exact.terms()) {
            const double want = eval_numeric(c, pt).get_d();
            const double got = approx.coefficient(mask).evaluate(p).get_d();
            CHECK(std::abs(want - got) <= 1e-4 * std::max({1.0, std::abs(want)}));
        }
        for (const auto& [mask, c] : approx.terms())
            if (exact.coefficient(mask).is_zero()) CHECK(std::abs(c.evaluate(p).get_d()) <= 1e-4);
    }
}

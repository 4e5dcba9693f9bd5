#include "tmcalc/suite.hpp"

#include "tmcalc/error.hpp"
#include "tmcalc/fd_scalar.hpp"
#include "tmcalc/lifts.hpp"
#include "tmcalc/operators.hpp"
#include "tmcalc/render.hpp"
#include "tmcalc/transitions.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <variant>

namespace tmcalc {

namespace {

using Exact = ScalarExpr;

template <class C>
using Obj = std::variant<Form<C>, VectorField<C>, VVForm<C>>;

template <class C>
struct Check {
    std::string label;
    Obj<C> lhs, rhs;
    bool equal = true;
};

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) h = (h ^ c) * 0x100000001b3ULL;
    return h;
}

Rational fraction(long n, long d) {
    Rational q(n, d);
    q.canonicalize();
    return q;
}

Rational factorial(int n) {
    Rational out(1);
    for (int k = 2; k <= n; ++k) out *= k;
    return out;
}

using RMatrix = std::vector<std::vector<Rational>>;

RMatrix rational_inverse(RMatrix a) {
    const std::size_t n = a.size();
    RMatrix inv(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t r = c;
        while (r < n && a[r][c] == 0) ++r;
        if (r == n) return {};
        std::swap(a[c], a[r]);
        std::swap(inv[c], inv[r]);
        const Rational s = a[c][c];
        for (std::size_t k = 0; k < n; ++k) a[c][k] /= s, inv[c][k] /= s;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || a[i][c] == 0) continue;
            const Rational f = a[i][c];
            for (std::size_t k = 0; k < n; ++k) a[i][k] -= f * a[c][k], inv[i][k] -= f * inv[c][k];
        }
    }
    return inv;
}

std::vector<Exact> affine_components(const RMatrix& A, const std::vector<Rational>& b) {
    std::vector<Exact> out;
    for (std::size_t i = 0; i < A.size(); ++i) {
        Exact e(b[i]);
        for (std::size_t j = 0; j < A.size(); ++j) e += Exact(A[i][j]) * Exact::base(static_cast<int>(j) + 1);
        out.push_back(e);
    }
    return out;
}

template <class C>
class Kit {
public:
    using Coeff = C;

    Kit(int dim, std::uint64_t seed) : m(dim), rng_(seed) {}

    const int m;
    std::vector<std::string> notes;
    std::vector<Check<C>> checks;
    /// Keeps base coefficients polynomial; chart changes of rational data get slow.
    bool polynomial_only = false;

    int integer(int lo, int hi) { return lo + static_cast<int>(rng_() % static_cast<std::uint64_t>(hi - lo + 1)); }
    bool coin(int percent = 50) { return integer(0, 99) < percent; }
    std::mt19937_64& rng() { return rng_; }

    // ------------------------------------------------- exact generators

    Exact poly(bool base_only, int max_terms = 3, int max_degree = 3) {
        Exact out;
        const int terms = integer(1, max_terms);
        for (int t = 0; t < terms; ++t) {
            Exact term(integer(-3, 3));
            const int deg = integer(0, max_degree);
            for (int k = 0; k < deg; ++k)
                term *= !base_only && coin() ? Exact::fiber(integer(1, m)) : Exact::base(integer(1, m));
            out += term;
        }
        return out;
    }

    /// Base coefficient; sometimes divided by a denominator without real zeros.
    Exact base_function() {
        Exact f = poly(true, 2, 3);
        if (!polynomial_only && coin(25)) f /= Exact(1) + Exact::base(integer(1, m)).pow(2);
        return f;
    }

    Form<Exact> exact_form(int degree, bool base_only, int max_terms = 3) {
        Form<Exact> out(m, degree);
        const int slots = base_only ? m : 2 * m;
        if (degree > slots) return out;
        const int terms = integer(1, max_terms);
        for (int t = 0; t < terms; ++t) {
            std::vector<int> pool(static_cast<std::size_t>(slots));
            std::iota(pool.begin(), pool.end(), 0);
            std::shuffle(pool.begin(), pool.end(), rng_);
            pool.resize(static_cast<std::size_t>(degree));
            out += Form<Exact>::monomial(m, mask_of(pool), base_only ? base_function() : poly(false, 2, 2));
        }
        return out;
    }

    VectorField<Exact> exact_field() {
        std::vector<Exact> comps;
        for (int s = 0; s < 2 * m; ++s) comps.push_back(poly(false, 2, 2));
        return VectorField<Exact>(m, comps);
    }

    BaseVectorField<Exact> exact_base_field() {
        std::vector<Exact> comps;
        for (int i = 0; i < m; ++i) comps.push_back(base_function());
        return BaseVectorField<Exact>(m, comps);
    }

    VVForm<Exact> exact_vvform(int degree) {
        VVForm<Exact> out(m, degree);
        const int terms = integer(1, 2);
        for (int t = 0; t < terms; ++t) {
            const Form<Exact> shape = exact_form(degree, false, 1);
            for (const auto& [mask, c] : shape.terms()) out.add(mask, exact_field().scaled(c));
        }
        return out;
    }

    /// d of a random base form; a constant for degree 0.
    BaseForm<Exact> exact_closed_base_form(int degree) {
        if (degree == 0) return BaseForm<Exact>(Form<Exact>::scalar(m, Exact(integer(-3, 3))));
        return BaseForm<Exact>(exterior_derivative(exact_form(degree - 1, true)));
    }

    ChartTransition affine() {
        for (;;) {
            RMatrix A(static_cast<std::size_t>(m), std::vector<Rational>(static_cast<std::size_t>(m)));
            std::vector<Rational> b(static_cast<std::size_t>(m)), bi(static_cast<std::size_t>(m));
            for (auto& row : A)
                for (auto& a : row) a = integer(-2, 2);
            for (auto& c : b) c = integer(-2, 2);
            const RMatrix Ai = rational_inverse(A);
            if (Ai.empty()) continue;
            for (std::size_t i = 0; i < b.size(); ++i)
                for (std::size_t j = 0; j < b.size(); ++j) bi[i] -= Ai[i][j] * b[j];
            return ChartTransition(affine_components(A, b), affine_components(Ai, bi));
        }
    }

    /// affine, then x1 += c (x2)^2, then affine; a Moebius change when m = 1
    ChartTransition quadratic() {
        const Exact x = Exact::base(1);
        const Exact c(integer(1, 3) * (coin() ? 1 : -1));
        if (m == 1) return ChartTransition({x / (Exact(1) + c * x)}, {x / (Exact(1) - c * x)});
        std::vector<Exact> fwd, inv;
        for (int i = 1; i <= m; ++i) fwd.push_back(Exact::base(i)), inv.push_back(Exact::base(i));
        const Exact y = Exact::base(2);
        fwd[0] = x + c * y * y;
        inv[0] = x - c * y * y;
        return affine().then(ChartTransition(fwd, inv)).then(affine());
    }

    ChartTransition transition(bool quadratic_change) {
        polynomial_only = true;
        ChartTransition T = quadratic_change ? quadratic() : affine();
        std::string text = "x' = (";
        for (std::size_t i = 0; i < T.forward().size(); ++i) text += (i ? ", " : "") + to_text(T.forward()[i]);
        note("T", text + ")");
        return T;
    }

    // ------------------------------------------ noted inputs, lifted to C

    void note(const std::string& name, const std::string& text) { notes.push_back(name + " = " + text); }

    C scalar(const std::string& name, bool base_only) {
        Exact f = base_only ? base_function() : poly(false);
        note(name, to_text(f));
        return lift(f);
    }
    Form<C> form(const std::string& name, int degree) {
        auto a = exact_form(degree, false);
        note(name, render(a, Format::Text));
        return lift(a);
    }
    VectorField<C> field(const std::string& name) {
        auto X = exact_field();
        note(name, render(X, Format::Text));
        return lift(X);
    }
    VVForm<C> vvform(const std::string& name, int degree) {
        auto K = exact_vvform(degree);
        note(name, render(K, Format::Text));
        return lift(K);
    }
    BaseForm<C> base_form(const std::string& name, int degree) {
        auto a = BaseForm<Exact>(exact_form(degree, true));
        note(name, render(a, Format::Text));
        return lift(a);
    }
    BaseForm<C> closed_base_form(const std::string& name, int degree) {
        auto a = exact_closed_base_form(degree);
        note(name, render(a, Format::Text));
        return lift(a);
    }
    BaseVectorField<C> base_field(const std::string& name) {
        auto X = exact_base_field();
        note(name, render(X, Format::Text));
        return lift(X);
    }

    template <class T>
    C lift(const T& c) {
        if constexpr (std::is_same_v<T, C>) return c;
        else return C(c);
    }
    template <class T>
    Form<C> lift(const Form<T>& a) {
        if constexpr (std::is_same_v<T, C>) return a;
        else {
            Form<C> out(a.dim(), a.degree());
            for (const auto& [mask, c] : a.terms()) out.add(mask, C(c));
            return out;
        }
    }
    template <class T>
    VectorField<C> lift(const VectorField<T>& X) {
        if constexpr (std::is_same_v<T, C>) return X;
        else {
            std::vector<C> comps;
            for (const auto& c : X.components()) comps.push_back(C(c));
            return VectorField<C>(X.dim(), comps);
        }
    }
    template <class T>
    VVForm<C> lift(const VVForm<T>& K) {
        if constexpr (std::is_same_v<T, C>) return K;
        else {
            VVForm<C> out(K.dim(), K.degree());
            for (const auto& [mask, X] : K.terms()) out.add(mask, lift(X));
            return out;
        }
    }
    template <class T>
    BaseForm<C> lift(const BaseForm<T>& a) { return BaseForm<C>(lift(a.form())); }
    template <class T>
    BaseVectorField<C> lift(const BaseVectorField<T>& X) {
        std::vector<C> comps;
        for (const auto& c : X.components()) comps.push_back(lift(c));
        return BaseVectorField<C>(X.dim(), comps);
    }

    // ---------------------------------------------------------- checks

    template <class A, class B>
    void equal(const std::string& label, const A& lhs, const B& rhs) { checks.push_back({label, obj(lhs), obj(rhs), true}); }
    template <class A, class B>
    void differ(const std::string& label, const A& lhs, const B& rhs) { checks.push_back({label, obj(lhs), obj(rhs), false}); }

private:
    std::mt19937_64 rng_;

    template <class T>
    Obj<C> obj(const Form<T>& a) { return lift(a); }
    template <class T>
    Obj<C> obj(const BaseForm<T>& a) { return lift(a.form()); }
    template <class T>
    Obj<C> obj(const VectorField<T>& X) { return lift(X); }
    template <class T>
    Obj<C> obj(const VVForm<T>& K) { return lift(K); }
    Obj<C> obj(const Exact& c) { return Form<C>::scalar(m, lift(c)); }
    Obj<C> obj(const FdScalar& c)
        requires std::is_same_v<C, FdScalar>
    {
        return Form<C>::scalar(m, c);
    }
};

// ------------------------------------------------------------ comparison

template <class C>
std::map<std::string, C> components(const Obj<C>& o) {
    std::map<std::string, C> out;
    if (const auto* a = std::get_if<Form<C>>(&o)) {
        for (const auto& [mask, c] : a->terms()) out[mask ? basis_text(a->dim(), mask) : "1"] = c;
    } else if (const auto* X = std::get_if<VectorField<C>>(&o)) {
        for (int s = 0; s < 2 * X->dim(); ++s)
            if (!(*X)[s].is_zero()) out[frame_text(X->dim(), s)] = (*X)[s];
    } else {
        const auto& K = std::get<VVForm<C>>(o);
        for (const auto& [mask, X] : K.terms())
            for (int s = 0; s < 2 * K.dim(); ++s)
                if (!X[s].is_zero()) out[basis_text(K.dim(), mask) + " (x) " + frame_text(K.dim(), s)] = X[s];
    }
    return out;
}

template <class C>
int degree_of(const Obj<C>& o) {
    if (const auto* a = std::get_if<Form<C>>(&o)) return a->degree();
    if (const auto* K = std::get_if<VVForm<C>>(&o)) return K->degree();
    return 0;
}

std::string shape_mismatch(const std::string& label) { return label + ": the two sides have different kinds or degrees"; }

std::string describe(const Obj<Exact>& o) {
    return std::visit([](const auto& x) { return render(x, Format::Text); }, o);
}

// Exact mode: the sides are canonical, so component equality is decisive.
std::optional<std::string> verify(Kit<Exact>& kit) {
    for (const auto& check : kit.checks) {
        const bool same_shape = check.lhs.index() == check.rhs.index() && degree_of(check.lhs) == degree_of(check.rhs);
        const bool equal = same_shape && components(check.lhs) == components(check.rhs);
        if (!same_shape && check.equal) return shape_mismatch(check.label);
        if (equal != check.equal)
            return check.label + (check.equal ? ": lhs = " : ": both sides equal ") + describe(check.lhs) +
                   (check.equal ? ", rhs = " + describe(check.rhs) : "");
    }
    return std::nullopt;
}

constexpr int kPoints = 5;
constexpr double kRelTol = 1e-6;

bool close(const Rational& a, const Rational& b) {
    const double scale = std::max({1.0, std::fabs(a.get_d()), std::fabs(b.get_d())});
    return std::fabs(Rational(a - b).get_d()) <= kRelTol * scale;
}

ChartPoint random_point(int m, std::mt19937_64& rng) {
    ChartPoint p{m, {}};
    for (int s = 0; s < 2 * m; ++s) {
        const long q = 2 + static_cast<long>(rng() % 8);
        const long n = static_cast<long>(rng() % static_cast<std::uint64_t>(4 * q + 1)) - 2 * q;
        p.values.push_back(fraction(n, q));
    }
    return p;
}

std::string point_text(const ChartPoint& p) {
    std::string out = "(";
    for (std::size_t i = 0; i < p.values.size(); ++i) out += (i ? ", " : "") + p.values[i].get_str();
    return out + ")";
}

// Numeric mode: every component is compared at kPoints random points away
// from poles; "differ" checks pass when any comparison disagrees.
std::optional<std::string> verify(Kit<FdScalar>& kit) {
    for (const auto& check : kit.checks) {
        const bool same_shape = check.lhs.index() == check.rhs.index() && degree_of(check.lhs) == degree_of(check.rhs);
        if (!same_shape) {
            if (check.equal) return shape_mismatch(check.label);
            continue;
        }
        auto lhs = components(check.lhs), rhs = components(check.rhs);
        std::vector<std::string> keys;
        for (const auto& [k, c] : lhs) keys.push_back(k);
        for (const auto& [k, c] : rhs)
            if (!lhs.count(k)) keys.push_back(k);
        bool all_close = true;
        std::string mismatch;
        for (const auto& key : keys) {
            const FdScalar a = lhs.count(key) ? lhs[key] : FdScalar();
            const FdScalar b = rhs.count(key) ? rhs[key] : FdScalar();
            int used = 0;
            for (int attempt = 0; attempt < 40 && used < kPoints; ++attempt) {
                const ChartPoint p = random_point(kit.m, kit.rng());
                Rational va, vb;
                try {
                    va = a.evaluate(p);
                    vb = b.evaluate(p);
                } catch (const Error& e) {
                    if (e.kind() == ErrorKind::PoleAtPoint) continue;
                    throw;
                }
                ++used;
                if (!close(va, vb)) {
                    all_close = false;
                    if (mismatch.empty())
                        mismatch = "component " + key + " at " + point_text(p) + ": lhs ~ " + std::to_string(va.get_d()) +
                                   ", rhs ~ " + std::to_string(vb.get_d());
                    break;
                }
            }
            if (used == 0) return check.label + ": no admissible evaluation point for component " + key;
            if (!all_close) break;
        }
        if (check.equal && !all_close) return check.label + ": " + mismatch;
        if (!check.equal && all_close) return check.label + ": both sides agree at every sampled point";
    }
    return std::nullopt;
}

// ------------------------------------------------------------- registry

struct Entry {
    IdentityInfo info;
    std::function<void(Kit<Exact>&)> exact;
    std::function<void(Kit<FdScalar>&)> numeric;
};

template <class Body>
Entry entry(std::string id, std::string module, std::string anchor, Body body) {
    return Entry{{std::move(id), std::move(module), std::move(anchor)}, body, body};
}

#define SUITE_TYPES(k)                                        \
    using C = typename std::decay_t<decltype(k)>::Coeff;      \
    using F = Form<C>;                                        \
    using V = VectorField<C>;                                 \
    using K = VVForm<C>;                                      \
    using BF = BaseForm<C>;                                   \
    const int m = (k).m;                                      \
    (void)m

// Σ over (p,q)-shuffles of sign · a(first p vectors) · b(rest)
template <class C>
C shuffle_sum(const Form<C>& a, const Form<C>& b, const std::vector<VectorField<C>>& vs) {
    const int p = a.degree(), n = static_cast<int>(vs.size());
    C out;
    for (Mask pick = 0; pick < (Mask{1} << n); ++pick) {
        if (mask_size(pick) != p) continue;
        std::vector<VectorField<C>> first, rest;
        std::vector<int> order;
        for (int i = 0; i < n; ++i)
            if (pick & slot_bit(i)) first.push_back(vs[static_cast<std::size_t>(i)]), order.push_back(i);
        for (int i = 0; i < n; ++i)
            if (!(pick & slot_bit(i))) rest.push_back(vs[static_cast<std::size_t>(i)]), order.push_back(i);
        int sign = 1;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (order[static_cast<std::size_t>(i)] > order[static_cast<std::size_t>(j)]) sign = -sign;
        const C term = evaluate_form(a, first) * evaluate_form(b, rest);
        out += sign > 0 ? term : -term;
    }
    return out;
}

Exact permutation_determinant(const Matrix& J) {
    const int n = static_cast<int>(J.size());
    std::vector<int> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    Exact det;
    do {
        int sign = 1;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (p[static_cast<std::size_t>(i)] > p[static_cast<std::size_t>(j)]) sign = -sign;
        Exact prod(sign);
        for (int i = 0; i < n; ++i) prod *= J[static_cast<std::size_t>(i)][static_cast<std::size_t>(p[static_cast<std::size_t>(i)])];
        det += prod;
    } while (std::next_permutation(p.begin(), p.end()));
    return det;
}

Form<Exact> fiber_part(const Form<Exact>& a) {
    Form<Exact> out(a.dim(), a.degree());
    for (const auto& [mask, c] : a.terms())
        if (mask & fiber_block(a.dim())) out.add(mask, c);
    return out;
}

Form<Exact> base_part(const Form<Exact>& a) { return a - fiber_part(a); }

std::vector<Entry> build_registry() {
    std::vector<Entry> r;

    // ---------------------------------------------------------- geometry-core
    r.push_back(entry("d-squared", "geometry-core", "exterior derivative operator ${\\mathrm{d}}$", [](auto& k) {
        SUITE_TYPES(k);
        const F a = k.form("a", k.integer(0, 2 * m - 2));
        k.equal("d(d a) = 0", exterior_derivative(exterior_derivative(a)), F(m, a.degree() + 2));
    }));
    r.push_back(entry("cartan-formula", "geometry-core",
                      "$\\call_X\\omega={\\mathrm{d}} {\\mathrm{i}}_X\\omega+{\\mathrm{i}}_X{\\mathrm{d}}\\omega$", [](auto& k) {
        SUITE_TYPES(k);
        const V X = k.field("X");
        const F a = k.form("a", k.integer(0, 2 * m - 1));
        F rhs = interior_product(X, exterior_derivative(a));
        if (a.degree() > 0) rhs += exterior_derivative(interior_product(X, a));
        k.equal("L_X a = i_X da + d i_X a", lie_derivative_form(X, a), rhs);
    }));
    r.push_back(entry("lie-commutes-with-d", "geometry-core", "a famous Cartan formula", [](auto& k) {
        SUITE_TYPES(k);
        const V X = k.field("X");
        const F a = k.form("a", k.integer(0, 2 * m - 1));
        k.equal("L_X da = d L_X a", lie_derivative_form(X, exterior_derivative(a)),
                exterior_derivative(lie_derivative_form(X, a)));
    }));
    r.push_back(entry("jacobi", "geometry-core", "a Lie bracket operator", [](auto& k) {
        SUITE_TYPES(k);
        const V X = k.field("X"), Y = k.field("Y"), Z = k.field("Z");
        // one term on each side keeps the numeric comparison relative
        k.equal("[X,[Y,Z]] + [Y,[Z,X]] = -[Z,[X,Y]]", lie_bracket(X, lie_bracket(Y, Z)) + lie_bracket(Y, lie_bracket(Z, X)),
                -lie_bracket(Z, lie_bracket(X, Y)));
    }));
    r.push_back(entry("wedge-shuffle", "geometry-core", "via exterior algebra", [](auto& k) {
        SUITE_TYPES(k);
        const int total = std::min(3, 2 * m);
        const int p = k.integer(1, total - 1), q = k.integer(1, total - p);
        const F a = k.form("a", p), b = k.form("b", q);
        std::vector<V> vs;
        for (int i = 0; i < p + q; ++i) vs.push_back(k.field("Y" + std::to_string(i + 1)));
        k.equal("(a^b)(Y..) = shuffle sum", evaluate_form(wedge(a, b), vs), shuffle_sum(a, b, vs));
    }));

    // ------------------------------------------------------------------ lifts
    r.push_back(entry("lift-brackets", "lifts", "identities hold for any vector fields", [](auto& k) {
        SUITE_TYPES(k);
        const auto X = k.base_field("X"), Y = k.base_field("Y");
        const auto XY = base_lie_bracket(X, Y);
        k.equal("[X~, Y~] = [X,Y]~", lie_bracket(complete_lift(X), complete_lift(Y)), complete_lift(XY));
        k.equal("[X~, vY] = v[X,Y]", lie_bracket(complete_lift(X), vertical_lift(Y)), vertical_lift(XY));
        k.equal("[vX, vY] = 0", lie_bracket(vertical_lift(X), vertical_lift(Y)), V(m));
    }));
    r.push_back(entry("lift-commutes-with-d", "lifts", "$\\widetilde{{\\mathrm{d}}\\alpha}={\\mathrm{d}}\\widetilde{\\alpha}$",
                      [](auto& k) {
        SUITE_TYPES(k);
        const BF a = k.base_form("a", k.integer(0, m - 1));
        k.equal("d(a~) = (da)~", exterior_derivative(complete_lift(a)), complete_lift(base_exterior_derivative(a)));
    }));
    r.push_back(entry("pairing-table", "lifts", "\\widetilde{\\alpha}(\\pi^\\star X)=\\pi^*(\\alpha(X))= \\pi^*\\alpha(\\widetilde{X})", [](auto& k) {
        SUITE_TYPES(k);
        const BF a = k.base_form("a", 1);
        const auto X = k.base_field("X");
        const C aX = base_evaluate(a, {X});
        const F lifted = complete_lift(a), pulled = pullback(a);
        k.equal("a~(vX) = a(X)", evaluate_form(lifted, {vertical_lift(X)}), aX);
        k.equal("(pi* a)(X~) = a(X)", evaluate_form(pulled, {complete_lift(X)}), aX);
        k.equal("a~(X~) = (a(X))~", evaluate_form(lifted, {complete_lift(X)}), complete_lift_function(aX, m));
        k.equal("(pi* a)(vX) = 0", evaluate_form(pulled, {vertical_lift(X)}), C());
    }));
    r.push_back(entry("lift-injective", "lifts", "$\\widetilde{\\omega}=0$ iff $\\omega=0$", [](auto& k) {
        SUITE_TYPES(k);
        const int p = k.integer(1, m);
        const BF a = k.base_form("a", p);
        const F lifted = complete_lift(a);
        // a_I = a~(pv_{i1}, px_{i2}, ..., px_{ip}) for every increasing I
        F rebuilt(m, p);
        for (Mask I = 0; I < (Mask{1} << m); ++I) {
            if (mask_size(I) != p) continue;
            const auto slots = mask_slots(I);
            std::vector<V> args{V::coordinate(m, m + slots[0])};
            for (std::size_t j = 1; j < slots.size(); ++j) args.push_back(V::coordinate(m, slots[j]));
            rebuilt.add(I, evaluate_form(lifted, args));
        }
        k.equal("a rebuilt from the dv part of a~", rebuilt, pullback(a));
    }));
    r.push_back(entry("mirror-nilpotent", "lifts", "B=\\sum_{j=1}^m {\\mathrm{d}} x^j\\otimes \\papa{}{v^j}", [](auto& k) {
        SUITE_TYPES(k);
        const K B = mirror_map<C>(m);
        k.equal("B o B = 0", compose(B, B), K(m, 1));
        for (int i = 0; i < m; ++i) {
            k.equal("B(px" + std::to_string(i + 1) + ") = pv" + std::to_string(i + 1), apply(B, V::coordinate(m, i)),
                    V::coordinate(m, m + i));
            k.equal("B(pv" + std::to_string(i + 1) + ") = 0", apply(B, V::coordinate(m, m + i)), V(m));
        }
    }));
    r.push_back(entry("mirror-of-complete-lift", "lifts", "We have $B(\\widetilde{X})=\\pi^{\\boldsymbol{\\star}} X$",
                      [](auto& k) {
        SUITE_TYPES(k);
        const auto X = k.base_field("X");
        k.equal("B(X~) = vX", apply(mirror_map<C>(m), complete_lift(X)), vertical_lift(X));
    }));
    r.push_back(entry("pullback-xi-invariant", "lifts", "\\xi\\lrcorner\\pi^*\\alpha=0", [](auto& k) {
        SUITE_TYPES(k);
        const BF a = k.base_form("a", k.integer(1, m));
        const V xi = tautological_field<C>(m);
        k.equal("xi _| pi* a = 0", interior_product(xi, pullback(a)), F(m, a.degree() - 1));
        k.equal("L_xi pi* a = 0", lie_derivative_form(xi, pullback(a)), F(m, a.degree()));
    }));
    r.push_back(entry("euler-weight", "lifts", "yields an exact form", [](auto& k) {
        SUITE_TYPES(k);
        const BF a = k.base_form("a", k.integer(0, m));
        const F lifted = complete_lift(a);
        k.equal("L_xi a~ = a~", lie_derivative_form(tautological_field<C>(m), lifted), lifted);
    }));
    r.push_back(entry("closed-lift-exact", "lifts",
                      "${\\mathrm{d}}(\\xi\\lrcorner\\widetilde{\\omega})=\\widetilde\\omega$", [](auto& k) {
        SUITE_TYPES(k);
        const BF w = k.closed_base_form("w", k.integer(1, m));
        const F lifted = complete_lift(w);
        k.equal("d(xi _| w~) = w~", exterior_derivative(interior_product(tautological_field<C>(m), lifted)), lifted);
    }));
    r.push_back(entry("mirror-lie-xi", "lifts", "\\call_\\xi B=-B", [](auto& k) {
        SUITE_TYPES(k);
        const K B = mirror_map<C>(m);
        k.equal("L_xi B = -B", lie_derivative_vvform(tautological_field<C>(m), B), -B);
    }));
    r.push_back(entry("mirror-lie-complete", "lifts", "\\call_{\\widetilde{X}}B=0", [](auto& k) {
        SUITE_TYPES(k);
        const auto X = k.base_field("X");
        k.equal("L_X~ B = 0", lie_derivative_vvform(complete_lift(X), mirror_map<C>(m)), K(m, 1));
    }));
    r.push_back(entry("mirror-lie-vertical", "lifts", "$\\call_{\\pi^{\\boldsymbol{\\star}} X}B=0$", [](auto& k) {
        SUITE_TYPES(k);
        const auto X = k.base_field("X");
        k.equal("L_vX B = 0", lie_derivative_vvform(vertical_lift(X), mirror_map<C>(m)), K(m, 1));
    }));

    // -------------------------------------------------------------- operators
    r.push_back(entry("db-squared", "operators", "${\\mathrm{d}}_B{\\mathrm{d}}_B=0$", [](auto& k) {
        SUITE_TYPES(k);
        const F w = k.form("w", k.integer(0, 2 * m - 2));
        k.equal("d_B d_B w = 0", db(db(w)), F(m, w.degree() + 2));
    }));
    r.push_back(entry("d-db-anticommute", "operators", "{\\mathrm{d}}\\dx_B=-{\\mathrm{d}}_B{\\mathrm{d}}", [](auto& k) {
        SUITE_TYPES(k);
        const F w = k.form("w", k.integer(0, 2 * m - 2));
        k.equal("d d_B w = -d_B d w", exterior_derivative(db(w)), -db(exterior_derivative(w)));
    }));
    r.push_back(entry("insertion-derivation", "operators", "defines an algebraic derivation of degree $k$", [](auto& k) {
        SUITE_TYPES(k);
        const int q = k.integer(1, 2), kd = q - 1;
        const K Kf = k.vvform("K", q);
        const int pa = k.integer(1, std::max(1, std::min(2, 2 * m - 1)));
        const int pb = k.integer(1, std::max(1, std::min(2, 2 * m - pa)));
        const F a = k.form("a", pa), b = k.form("b", pb);
        const F rhs = wedge(insertion_derivation(Kf, a), b) +
                      wedge(a, insertion_derivation(Kf, b)).scaled(C((kd * pa) % 2 ? -1 : 1));
        k.equal("i_K(a^b) = i_K a ^ b + (-1)^(k|a|) a ^ i_K b", insertion_derivation(Kf, wedge(a, b)), rhs);
    }));
    r.push_back(entry("insertion-coincidence", "operators", "a simple coincidence", [](auto& k) {
        SUITE_TYPES(k);
        const K Kf = k.vvform("K", 1);
        const int p = k.integer(1, std::min(3, 2 * m));
        const F w = k.form("w", p);
        k.equal("i_K w = w o (K ^ 1^(p-1)) / (p-1)!", insertion_derivation(Kf, w),
                circ_wedge(w, mixed_endomorphisms(Kf, 1, p)).scaled(C(Rational(1 / factorial(p - 1)))));
    }));
    r.push_back(entry("identity-insertion", "operators", "${\\mathrm{i}}_{1_{T\\calm}}\\omega=p\\omega$", [](auto& k) {
        SUITE_TYPES(k);
        const int p = k.integer(1, 2 * m);
        const F w = k.form("w", p);
        k.equal("i_1 w = p w", insertion_derivation(identity_endomorphism<C>(m), w), w.scaled(C(p)));
    }));
    r.push_back(entry("circ-wedge-collapse", "operators", "For any $p$-form $\\gamma$", [](auto& k) {
        SUITE_TYPES(k);
        const int p = k.integer(1, std::min(3, m));
        const BF g = k.base_form("g", p);
        const F lifted = complete_lift(g);
        const C inv(Rational(1 / factorial(p)));
        for (int i = 0; i <= p; ++i) {
            const F collapsed = circ_wedge(lifted, mixed_endomorphisms(mirror_map<C>(m), i, p)).scaled(inv);
            const std::string label = "g~ o (B^" + std::to_string(i) + " ^ 1^" + std::to_string(p - i) + ") / p!";
            if (i == 0) k.equal(label + " = g~", collapsed, lifted);
            else if (i == 1) k.equal(label + " = pi* g", collapsed, pullback(g));
            else k.equal(label + " = 0", collapsed, F(m, p));
        }
    }));
    r.push_back(entry("lie-identity", "operators",
                      "$\\call_1=[{\\mathrm{i}}_1,{\\mathrm{d}}]=(p+1){\\mathrm{d}}-p{\\mathrm{d}}={\\mathrm{d}}$", [](auto& k) {
        SUITE_TYPES(k);
        const F w = k.form("w", k.integer(0, 2 * m - 1));
        k.equal("L_1 w = d w", lie_derivation(identity_endomorphism<C>(m), w), exterior_derivative(w));
    }));
    r.push_back(entry("lie-mirror", "operators", "{\\mathrm{d}}_B:=\\call_B=[{\\mathrm{i}}_B,{\\mathrm{d}}]", [](auto& k) {
        SUITE_TYPES(k);
        const F w = k.form("w", k.integer(0, 2 * m - 1));
        k.equal("L_B w = d_B w", lie_derivation(mirror_map<C>(m), w), db(w));
    }));
    r.push_back(entry("fn-mirror", "operators", "very easy to see $[B,B]^{\\mathrm{FN}}=0$", [](auto& k) {
        SUITE_TYPES(k);
        k.equal("[B,B] = 0", fn_self_bracket(mirror_map<C>(m)), K(m, 2));
        k.equal("[1,1] = 0", fn_self_bracket(identity_endomorphism<C>(m)), K(m, 2));
    }));
    r.push_back(entry("db-pullback-primitive", "operators", "vanishes in ${\\mathrm{d}}_B$-cohomology", [](auto& k) {
        SUITE_TYPES(k);
        const BF w = k.base_form("w", k.integer(1, m));
        const F pulled = pullback(w);
        k.equal("d_B pi* w = 0", db(pulled), F(m, w.degree() + 1));
        // the factor p is easy to lose: without it this holds only for p = 1
        k.equal("d_B(xi _| w~) = p pi* w", db(interior_product(tautological_field<C>(m), complete_lift(w))),
                pulled.scaled(C(w.degree())));
    }));
    r.push_back(entry("db-complete-lift", "operators", "${\\mathrm{d}}_B\\widetilde{\\omega}={\\mathrm{d}}\\pi^*\\omega$",
                      [](auto& k) {
        SUITE_TYPES(k);
        const BF w = k.base_form("w", k.integer(0, m));
        k.equal("d_B w~ = d pi* w", db(complete_lift(w)), exterior_derivative(pullback(w)));
    }));
    r.push_back(entry("D-squared", "operators", "if and only if $\\epsilon_1,\\epsilon_2\\in\\R$", [](auto& k) {
        SUITE_TYPES(k);
        const DOperator D{fraction(k.integer(-3, 3), k.integer(1, 3)), fraction(k.integer(-3, 3), k.integer(1, 3))};
        k.note("D", D.c1.get_str() + " d + " + D.c2.get_str() + " d_B");
        const F w = k.form("w", k.integer(0, 2 * m - 2));
        k.equal("D D w = 0", apply_D(D, apply_D(D, w)), F(m, w.degree() + 2));
    }));
    r.push_back(entry("D-squared-nonconstant", "operators", "if and only if $\\epsilon_1,\\epsilon_2\\in\\R$", [](auto& k) {
        SUITE_TYPES(k);
        const C one(1);
        const C x1(k.lift(Exact::base(1))), v1(k.lift(Exact::fiber(1)));
        auto D2 = [&](const C& e2, const F& w) { return apply_D(one, e2, apply_D(one, e2, w)); };
        // (d + x1 d_B)^2 v1 happens to vanish; v2 is a witness for m >= 2
        if (m >= 2)
            k.differ("(d + x1 d_B)^2 v2 != 0", D2(x1, F::scalar(m, k.lift(Exact::fiber(2)))), F(m, 2));
        k.differ("(d + v1 d_B)^2 v1 != 0", D2(v1, F::scalar(m, v1)), F(m, 2));
    }));
    r.push_back(entry("D-primitive", "operators", "the following map is well-defined", [](auto& k) {
        SUITE_TYPES(k);
        const Rational c = fraction(k.integer(1, 3) * (k.coin() ? 1 : -1), k.integer(1, 2));
        k.note("c", c.get_str());
        const BF a = k.base_form("a", k.integer(0, m - 1));
        const F primitive = complete_lift(a).scaled(C(Rational(1 / c))) - pullback(a).scaled(C(Rational(1 / (c * c))));
        k.equal("(c d + d_B)((1/c) a~ - (1/c^2) pi* a) = (da)~", apply_D(DOperator{c, 1}, primitive),
                complete_lift(base_exterior_derivative(a)));
    }));
    r.push_back(entry("bott-chern", "operators", "Every pullback of a $q$-form", [](auto& k) {
        SUITE_TYPES(k);
        const BF b = k.base_form("b", k.integer(1, m));
        k.equal("d d_B(xi _| b~) = deg(b) pi*(db)",
                exterior_derivative(db(interior_product(tautological_field<C>(m), complete_lift(b)))),
                pullback(base_exterior_derivative(b)).scaled(C(b.degree())));
    }));
    r.push_back(entry("db-poincare", "operators", "in the $v^i$ by Poincaré lemma", [](auto& k) {
        const int m = k.m;
        const int p = k.integer(1, std::min(3, m));
        // semi-basic tau with polynomial fiber dependence and rational base dependence
        Form<Exact> tau(m, p - 1);
        const Exact den = k.coin(30) ? Exact(1) + Exact::base(1).pow(2) : Exact(1);
        const Form<Exact> shape = k.exact_form(p - 1, true);
        for (const auto& [mask, c] : shape.terms()) tau.add(mask, k.poly(false, 3, 3) / den);
        k.note("tau", render(tau, Format::Text));
        const Form<Exact> w = db(tau);
        const Form<Exact> alpha = w.is_zero() ? Form<Exact>(m, p - 1) : db_poincare(w);
        k.equal("d_B(P w) = w", db(alpha), w);
        k.equal("P w is semi-basic", fiber_part(alpha), Form<Exact>(m, p - 1));
        const BaseForm<Exact> g(k.exact_form(p, true));
        k.note("g", render(g, Format::Text));
        k.equal("d_B(P pi* g) = pi* g", db(db_poincare(pullback(g))), pullback(g));
    }));
    r.push_back(entry("theta-on-coboundaries", "operators", "$\\Theta$ sends ${\\mathrm{d}} f_\\mu$ to ${\\mathrm{d}} c$",
                      [](auto& k) {
        const int m = k.m;
        const BaseForm<Exact> mu(k.exact_form(1, true));
        const Exact c = k.base_function();
        k.note("mu", render(mu, Format::Text));
        k.note("c", to_text(c));
        const Form<Exact> df = exterior_derivative(Form<Exact>::scalar(m, make_f_mu(mu, c)));
        k.equal("Theta(d f_mu) = dc", theta(AlphaMuForm<Exact>{df, mu}), exterior_derivative(Form<Exact>::scalar(m, c)));
    }));
    r.push_back(entry("theta-identities", "operators", "surjective since $\\Theta(\\pi^*\\gamma)=\\gamma$", [](auto& k) {
        const int m = k.m;
        const BaseForm<Exact> gamma = k.exact_closed_base_form(1);
        const BaseForm<Exact> closed_mu = k.exact_closed_base_form(1);
        const BaseForm<Exact> mu(k.exact_form(1, true));
        const Exact c = k.base_function();
        k.note("gamma", render(gamma, Format::Text));
        k.note("mu", render(mu, Format::Text));
        k.equal("Theta(pi* gamma) = gamma", theta(AlphaMuForm<Exact>{pullback(gamma), BaseForm<Exact>::zero(m, 1)}), gamma);
        k.equal("Theta(mu~) = 0 for closed mu", theta(AlphaMuForm<Exact>{complete_lift(closed_mu), closed_mu}),
                Form<Exact>(m, 1));
        const Form<Exact> alpha = exterior_derivative(Form<Exact>::scalar(m, make_f_mu(mu, c))) + pullback(gamma);
        const BaseForm<Exact> image = theta(AlphaMuForm<Exact>{alpha, mu});
        k.equal("d Theta(alpha) = 0", base_exterior_derivative(image), Form<Exact>(m, 2));
    }));
    r.push_back(entry("f-mu-above", "operators", "we see immediately that $ {\\mathrm{d}} f_\\mu\\circ B=\\pi^*\\mu$",
                      [](auto& k) {
        SUITE_TYPES(k);
        const BF mu = k.base_form("mu", 1);
        const C c = k.scalar("c", true);
        const F df = exterior_derivative(F::scalar(m, make_f_mu(mu, c)));
        k.equal("d f_mu o B = pi* mu", circ_wedge(df, {mirror_map<C>(m)}), pullback(mu));
    }));

    // ------------------------------------------------------------ transitions
    r.push_back(entry("chart-consistency", "transitions", "To see the latter, we use", [](auto& k) {
        const ChartTransition T = k.transition(k.coin());
        const auto terms = consistency_terms(T);
        for (std::size_t i = 0; i < terms.size(); ++i) k.equal("term " + std::to_string(i), terms[i], Exact());
    }));
    r.push_back(entry("naturality", "transitions", "natural global", [](auto& k) {
        const int m = k.m;
        const ChartTransition T = k.transition(k.coin(35));
        const BaseForm<Exact> a(k.exact_form(k.integer(0, m), true));
        const BaseVectorField<Exact> X = k.exact_base_field();
        k.note("a", render(a, Format::Text));
        k.note("X", render(X, Format::Text));
        k.equal("pullback", transform(pullback(a), T), pullback(transform(a, T)));
        k.equal("vertical", transform(vertical_lift(X), T), vertical_lift(transform(X, T)));
        k.equal("complete (field)", transform(complete_lift(X), T), complete_lift(transform(X, T)));
        k.equal("complete (form)", transform(complete_lift(a), T), complete_lift(transform(a, T)));
        k.equal("xi", transform(tautological_field<Exact>(m), T), tautological_field<Exact>(m));
        k.equal("B", transform(mirror_map<Exact>(m), T), mirror_map<Exact>(m));
    }));
    r.push_back(entry("volume-factor", "transitions", "the square of $\\det(\\partial x'^a/\\partial x^j)$", [](auto& k) {
        const ChartTransition T = k.transition(k.coin());
        const Exact det = permutation_determinant(T.jacobian());
        k.equal("volume factor = det^2", volume_factor(T), det * det);
    }));
    r.push_back(entry("flat-dv-rule", "transitions", "all $\\papa{x'^a}{x^i}$ are constant", [](auto& k) {
        const int m = k.m;
        const bool quadratic = k.coin();
        const ChartTransition T = k.transition(quadratic);
        const auto phi = T.tangent_map();
        // dx part of each dv'^a, tagged with dv^a so that different a cannot cancel
        Form<Exact> dx_part(m, 2);
        for (int a = 1; a <= m; ++a)
            dx_part += wedge(base_part(pullback_along(phi, Form<Exact>::dv(m, a))), Form<Exact>::dv(m, a));
        if (quadratic) k.differ("dv' has dx terms", dx_part, Form<Exact>(m, 2));
        else k.equal("dv' has no dx terms", dx_part, Form<Exact>(m, 2));
    }));
    r.push_back(entry("theta-globality", "transitions", "transforms the way it should", [](auto& k) {
        const int m = k.m;
        const ChartTransition T = k.transition(k.coin());
        const BaseForm<Exact> mu(k.exact_form(1, true));
        const Exact c = k.poly(true, 2, 2);
        const BaseForm<Exact> gamma = k.exact_closed_base_form(1);
        k.note("mu", render(mu, Format::Text));
        k.note("c", to_text(c));
        k.note("gamma", render(gamma, Format::Text));
        const AlphaMuForm<Exact> a{exterior_derivative(Form<Exact>::scalar(m, make_f_mu(mu, c))) + pullback(gamma), mu};
        const AlphaMuForm<Exact> moved{transform(a.omega, T), transform(a.mu, T)};
        k.equal("Theta in the new chart = transformed Theta", theta(moved), transform(theta(a), T));
    }));
    r.push_back(entry("tangent-composition", "transitions", "transforming coherently with any third chart", [](auto& k) {
        const ChartTransition S = k.transition(false), T = k.transition(k.coin());
        const auto direct = S.then(T).tangent_map(), composed = compose_maps(T.tangent_map(), S.tangent_map(), S.dim());
        for (std::size_t i = 0; i < direct.size(); ++i) k.equal("component " + std::to_string(i), direct[i], composed[i]);
    }));
    return r;
}

const std::vector<Entry>& registry() {
    static const std::vector<Entry> r = build_registry();
    return r;
}

template <class C>
IdentityRecord run_identity(const Entry& e, const std::function<void(Kit<C>&)>& body, const SuiteConfig& config) {
    IdentityRecord rec;
    rec.id = e.info.id;
    rec.module = e.info.module;
    rec.anchor = e.info.anchor;
    rec.seed = splitmix(config.seed ^ fnv1a(e.info.id));
    const auto start = std::chrono::steady_clock::now();
    for (int m = config.m_min; m <= config.m_max; ++m) {
        for (int c = 0; c < config.cases; ++c) {
            const std::uint64_t case_seed = splitmix(rec.seed + static_cast<std::uint64_t>(m) * 1000003ULL + static_cast<std::uint64_t>(c));
            Kit<C> kit(m, case_seed);
            std::optional<std::string> failure;
            try {
                body(kit);
                failure = verify(kit);
            } catch (const std::exception& ex) {
                failure = std::string("error: ") + ex.what();
            }
            ++rec.cases;
            if (!failure) continue;
            ++rec.failed_cases;
            rec.passed = false;
            if (!rec.counterexample) {
                std::ostringstream os;
                os << "m=" << m << " case=" << c << " seed=" << case_seed << "; ";
                for (const auto& n : kit.notes) os << n << "; ";
                os << *failure;
                rec.counterexample = os.str();
            }
        }
    }
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

} // namespace

int SuiteReport::failed() const {
    return static_cast<int>(std::count_if(records.begin(), records.end(), [](const auto& r) { return !r.passed; }));
}

int SuiteReport::cases() const {
    int n = 0;
    for (const auto& r : records) n += r.cases;
    return n;
}

std::string SuiteReport::to_json(bool with_timing) const {
    using nlohmann::json;
    json suite = json::array();
    double seconds = 0;
    for (const auto& r : records) {
        json j{{"id", r.id},         {"module", r.module},         {"anchor", r.anchor}, {"cases", r.cases},
               {"passed", r.passed}, {"failed_cases", r.failed_cases}, {"seed", r.seed}};
        if (r.counterexample) j["counterexample"] = *r.counterexample;
        if (with_timing) j["seconds"] = r.seconds;
        seconds += r.seconds;
        suite.push_back(j);
    }
    json summary{{"total", total()}, {"failed", failed()}, {"cases", cases()}, {"mode", numeric ? "numeric" : "symbolic"}};
    if (with_timing) summary["seconds"] = seconds;
    return json{{"suite", suite}, {"summary", summary}}.dump(2);
}

std::string SuiteReport::to_text() const {
    std::ostringstream os;
    for (const auto& r : records) {
        os << (r.passed ? "PASS " : "FAIL ") << r.id << "  [" << r.module << "]  " << r.cases - r.failed_cases << "/"
           << r.cases << "\n";
        if (r.counterexample) os << "     " << *r.counterexample << "\n";
    }
    os << (numeric ? "numeric" : "symbolic") << ": " << total() - failed() << "/" << total() << " identities passed, "
       << cases() << " cases\n";
    return os.str();
}

std::vector<IdentityInfo> suite_registry() {
    std::vector<IdentityInfo> out;
    for (const auto& e : registry()) out.push_back(e.info);
    return out;
}

SuiteReport run_suite(const SuiteConfig& config) {
    if (config.m_min < 1 || config.m_max < config.m_min || config.m_max > kMaxDim)
        throw Error(ErrorKind::InvalidArgument, "bad dimension range");
    if (config.cases < 0) throw Error(ErrorKind::InvalidArgument, "negative case count");
    SuiteReport report;
    report.numeric = config.numeric;
    for (const auto& e : registry()) {
        if (!config.filter.empty() && e.info.id.find(config.filter) == std::string::npos) continue;
        report.records.push_back(config.numeric ? run_identity<FdScalar>(e, e.numeric, config)
                                                : run_identity<Exact>(e, e.exact, config));
    }
    return report;
}

} // namespace tmcalc

#include "tmcalc/operators.hpp"

namespace tmcalc {

namespace {

bool fiber_dependent(GenId id) {
    Generator g = Generator::from_id(id);
    if (g.is_coordinate()) return g.coordinate_id().is_fiber();
    return !g.symbol().base_only();
}

bool is_fiber_coordinate(GenId id) {
    Generator g = Generator::from_id(id);
    return g.is_coordinate() && g.coordinate_id().is_fiber();
}

void require_fiber_polynomial(const ScalarExpr& f) {
    for (GenId id : f.denominator().generators())
        if (fiber_dependent(id))
            throw Error(ErrorKind::NonPolynomialFiberDependence, "fiber coordinates in a denominator: " + to_text(f));
    for (GenId id : f.numerator().generators())
        if (!Generator::from_id(id).is_coordinate() && fiber_dependent(id))
            throw Error(ErrorKind::NonPolynomialFiberDependence, "fiber-dependent function symbol in " + to_text(f));
}

std::uint32_t fiber_degree(const Monomial& mono) {
    std::uint32_t d = 0;
    for (const auto& [id, e] : mono.factors())
        if (is_fiber_coordinate(id)) d += e;
    return d;
}

} // namespace

Form<ScalarExpr> db_poincare(const Form<ScalarExpr>& w) {
    const int m = w.dim(), p = w.degree();
    if (p == 0) throw Error(ErrorKind::UnsupportedDegree, "a function has no d_B primitive");
    if (auto bad = semi_basic_defect(w, 0))
        throw Error(ErrorKind::NotSemiBasic, "the form has a dv component");
    if (!db(w).is_zero()) throw Error(ErrorKind::NotClosed, "the form is not d_B-closed");
    // fiber form sum w_I dv^I; homotopy weight of a v-degree d monomial is 1/(p+d)
    Form<ScalarExpr> out(m, p - 1);
    for (const auto& [mask, f] : w.terms()) {
        require_fiber_polynomial(f);
        std::vector<Term> weighted;
        for (const auto& t : f.numerator().terms())
            weighted.push_back({t.monomial, t.coeff / Rational(p + static_cast<long>(fiber_degree(t.monomial)))});
        const ScalarExpr h = ScalarExpr::fraction(Polynomial::from_terms(std::move(weighted)), f.denominator());
        int position = 0;
        for (int s : mask_slots(mask)) {
            const ScalarExpr c = ScalarExpr::fiber(s + 1) * h;
            out.add(mask & ~slot_bit(s), position % 2 ? -c : c);
            ++position;
        }
    }
    return out;
}

std::optional<std::pair<BaseForm<ScalarExpr>, ScalarExpr>> is_fiber_affine(const ScalarExpr& f, int m) {
    std::vector<ScalarExpr> a;
    for (int i = 1; i <= m; ++i) {
        a.push_back(partial(f, CoordinateId::fiber(i)));
        for (int j = i; j <= m; ++j)
            if (!partial(a.back(), CoordinateId::fiber(j)).is_zero()) return std::nullopt;
    }
    Form<ScalarExpr> mu(m, 1);
    ScalarExpr c = f;
    for (int i = 0; i < m; ++i) {
        if (!a[static_cast<std::size_t>(i)].is_base_only()) return std::nullopt;
        mu.add(slot_bit(i), a[static_cast<std::size_t>(i)]);
        c -= a[static_cast<std::size_t>(i)] * ScalarExpr::fiber(i + 1);
    }
    if (!c.is_base_only()) return std::nullopt;
    return std::make_pair(BaseForm<ScalarExpr>(mu), c);
}

} // namespace tmcalc

#include "tmcalc/transitions.hpp"

#include "tmcalc/lifts.hpp"

#include <algorithm>

namespace tmcalc {

namespace {

void require_symbol_free(const Expr& e) {
    for (const auto& poly : {e.numerator(), e.denominator()})
        for (GenId id : poly.generators())
            if (!Generator::from_id(id).is_coordinate())
                throw Error(ErrorKind::InvalidArgument,
                            "chart changes act on symbol-free expressions, found " + Generator::from_id(id).name());
}

Bindings base_bindings(const std::vector<Expr>& images) {
    Bindings b;
    for (std::size_t i = 0; i < images.size(); ++i) b.bind(CoordinateId::base(static_cast<int>(i) + 1), images[i]);
    return b;
}

Bindings slot_bindings(const std::vector<Expr>& images, int m) {
    Bindings b;
    for (std::size_t s = 0; s < images.size(); ++s) b.bind(CoordinateId::from_slot(m, static_cast<int>(s)), images[s]);
    return b;
}

// 2m x 2m Jacobian of a slot map
Matrix slot_jacobian(const std::vector<Expr>& map, int m) {
    Matrix J(map.size(), std::vector<Expr>(static_cast<std::size_t>(2 * m)));
    for (std::size_t a = 0; a < map.size(); ++a)
        for (int b = 0; b < 2 * m; ++b)
            J[a][static_cast<std::size_t>(b)] = partial(map[a], CoordinateId::from_slot(m, b));
    return J;
}

const ChartTransition& oriented(const ChartTransition& T, Direction d, ChartTransition& storage) {
    if (d == Direction::Forward) return T;
    storage = T.inverted();
    return storage;
}

} // namespace

ChartTransition::ChartTransition(std::vector<Expr> forward, std::vector<Expr> inverse)
  : forward_(std::move(forward)), inverse_(std::move(inverse)) {
    const int m = dim();
    if (m < 1 || m > kMaxDim || static_cast<int>(inverse_.size()) != m)
        throw Error(ErrorKind::DimensionMismatch, "a chart change needs m forward and m inverse components");
    for (const auto* list : {&forward_, &inverse_})
        for (const auto& e : *list) {
            if (!e.is_base_only()) throw Error(ErrorKind::NotBaseOnly, "chart change component " + to_text(e));
            require_symbol_free(e);
            for (GenId id : e.numerator().generators())
                if (Generator::from_id(id).coordinate_id().index > m)
                    throw Error(ErrorKind::IndexOutOfRange, "coordinate beyond the chart dimension in " + to_text(e));
        }
    const Bindings there = base_bindings(forward_), back = base_bindings(inverse_);
    for (int i = 0; i < m; ++i) {
        const Expr xi = Expr::base(i + 1);
        if (!(substitute(inverse_[static_cast<std::size_t>(i)], there) == xi) ||
            !(substitute(forward_[static_cast<std::size_t>(i)], back) == xi))
            throw Error(ErrorKind::NotInverse, "the supplied inverse does not undo the chart change");
    }
}

ChartTransition ChartTransition::identity(int m) {
    std::vector<Expr> id;
    for (int i = 1; i <= m; ++i) id.push_back(Expr::base(i));
    return ChartTransition(id, id);
}

ChartTransition ChartTransition::then(const ChartTransition& next) const {
    detail::require_same_dim(dim(), next.dim());
    return ChartTransition(compose_maps(next.forward_, forward_, dim()), compose_maps(inverse_, next.inverse_, dim()));
}

Matrix ChartTransition::jacobian() const {
    const int m = dim();
    Matrix J(static_cast<std::size_t>(m), std::vector<Expr>(static_cast<std::size_t>(m)));
    for (int a = 0; a < m; ++a)
        for (int j = 0; j < m; ++j)
            J[static_cast<std::size_t>(a)][static_cast<std::size_t>(j)] =
                partial(forward_[static_cast<std::size_t>(a)], CoordinateId::base(j + 1));
    return J;
}

bool ChartTransition::is_affine() const {
    for (const auto& row : jacobian())
        for (const auto& e : row)
            if (!e.is_constant()) return false;
    return true;
}

std::vector<Expr> ChartTransition::tangent_map() const {
    const int m = dim();
    std::vector<Expr> out = forward_;
    const Matrix J = jacobian();
    for (int a = 0; a < m; ++a) {
        Expr va;
        for (int j = 0; j < m; ++j) va += Expr::fiber(j + 1) * J[static_cast<std::size_t>(a)][static_cast<std::size_t>(j)];
        out.push_back(va);
    }
    return out;
}

std::vector<Expr> compose_maps(const std::vector<Expr>& outer, const std::vector<Expr>& inner, int m) {
    const Bindings b = slot_bindings(inner, m);
    std::vector<Expr> out;
    for (const auto& e : outer) out.push_back(substitute(e, b));
    return out;
}

Form<Expr> pullback_along(const std::vector<Expr>& map, const Form<Expr>& w) {
    const int m = w.dim();
    const Bindings b = slot_bindings(map, m);
    const Matrix J = slot_jacobian(map, m);
    std::vector<Form<Expr>> differentials;
    for (std::size_t a = 0; a < map.size(); ++a) {
        Form<Expr> da(m, 1);
        for (int c = 0; c < 2 * m; ++c) da.add(slot_bit(c), J[a][static_cast<std::size_t>(c)]);
        differentials.push_back(std::move(da));
    }
    Form<Expr> out(m, w.degree());
    for (const auto& [mask, f] : w.terms()) {
        require_symbol_free(f);
        Form<Expr> term = Form<Expr>::scalar(m, substitute(f, b));
        for (int s : mask_slots(mask)) term = wedge(term, differentials[static_cast<std::size_t>(s)]);
        out += term;
    }
    return out;
}

Form<Expr> transform(const Form<Expr>& w, const ChartTransition& T, Direction d) {
    ChartTransition storage = T;
    const ChartTransition& U = oriented(T, d, storage);
    detail::require_same_dim(w.dim(), U.dim());
    return pullback_along(U.inverted().tangent_map(), w);
}

VectorField<Expr> transform(const VectorField<Expr>& X, const ChartTransition& T, Direction d) {
    ChartTransition storage = T;
    const ChartTransition& U = oriented(T, d, storage);
    const int m = U.dim();
    detail::require_same_dim(X.dim(), m);
    const auto phi = U.tangent_map();
    const Matrix J = slot_jacobian(phi, m);
    const Bindings back = slot_bindings(U.inverted().tangent_map(), m);
    VectorField<Expr> out(m);
    for (int a = 0; a < 2 * m; ++a) {
        Expr c;
        for (int b = 0; b < 2 * m; ++b) {
            require_symbol_free(X[b]);
            if (!X[b].is_zero()) c += J[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] * X[b];
        }
        out[a] = substitute(c, back);
    }
    return out;
}

VVForm<Expr> transform(const VVForm<Expr>& K, const ChartTransition& T, Direction d) {
    ChartTransition storage = T;
    const ChartTransition& U = oriented(T, d, storage);
    const int m = U.dim();
    detail::require_same_dim(K.dim(), m);
    if (K.degree() == 0) return VVForm<Expr>::vector(transform(K.value(0), U));
    if (K.degree() != 1) throw Error(ErrorKind::UnsupportedDegree, "chart change of vector-valued forms of degree > 1");
    // K' = J_Phi K J_Psi, with everything read in the target chart
    const auto psi = U.inverted().tangent_map();
    const Matrix Jpsi = slot_jacobian(psi, m);
    VVForm<Expr> out(m, 1);
    for (int c = 0; c < 2 * m; ++c) {
        VectorField<Expr> column(m);
        for (int b = 0; b < 2 * m; ++b) {
            const Expr& w = Jpsi[static_cast<std::size_t>(b)][static_cast<std::size_t>(c)];
            if (w.is_zero()) continue;
            column += transform(K.value(slot_bit(b)), U).scaled(w);
        }
        out.add(slot_bit(c), column);
    }
    return out;
}

BaseForm<Expr> transform(const BaseForm<Expr>& a, const ChartTransition& T, Direction d) {
    // a base form has no dv terms, so the TM chart change restricts to the base one
    return BaseForm<Expr>(transform(a.form(), T, d));
}

BaseVectorField<Expr> transform(const BaseVectorField<Expr>& X, const ChartTransition& T, Direction d) {
    ChartTransition storage = T;
    const ChartTransition& U = oriented(T, d, storage);
    const int m = U.dim();
    const Matrix J = U.jacobian();
    const Bindings back = base_bindings(U.inverse());
    std::vector<Expr> comps;
    for (int a = 0; a < m; ++a) {
        Expr c;
        for (int j = 0; j < m; ++j) {
            require_symbol_free(X[j]);
            c += J[static_cast<std::size_t>(a)][static_cast<std::size_t>(j)] * X[j];
        }
        comps.push_back(substitute(c, back));
    }
    return BaseVectorField<Expr>(m, comps);
}

std::vector<Expr> consistency_terms(const ChartTransition& T) {
    const int m = T.dim();
    std::vector<Expr> out;
    const Bindings there = base_bindings(T.forward());
    const Matrix J = T.jacobian();                  // dx'^a/dx^k, source chart
    const auto tangent = T.tangent_map();           // v'^b = tangent[m + b]
    for (int j = 0; j < m; ++j) {
        const Expr& G = T.inverse()[static_cast<std::size_t>(j)];
        for (int k = 0; k < m; ++k) {
            Expr total;
            for (int a = 0; a < m; ++a) {
                const Expr dGa = partial(G, CoordinateId::base(a + 1));
                for (int b = 0; b < m; ++b) {
                    const Expr second = substitute(partial(dGa, CoordinateId::base(b + 1)), there);
                    total += tangent[static_cast<std::size_t>(m + b)] * J[static_cast<std::size_t>(a)][static_cast<std::size_t>(k)] *
                             second;
                }
                const Expr first = substitute(dGa, there);
                const Expr dFa = partial(T.forward()[static_cast<std::size_t>(a)], CoordinateId::base(k + 1));
                for (int l = 0; l < m; ++l)
                    total += Expr::fiber(l + 1) * first * partial(dFa, CoordinateId::base(l + 1));
            }
            out.push_back(total);
        }
    }
    return out;
}

bool check_consistency_identity(const ChartTransition& T) {
    const auto terms = consistency_terms(T);
    return std::all_of(terms.begin(), terms.end(), [](const Expr& e) { return e.is_zero(); });
}

LiftKind parse_lift_kind(const std::string& name) {
    if (name == "pullback") return LiftKind::Pullback;
    if (name == "vertical") return LiftKind::Vertical;
    if (name == "complete") return LiftKind::Complete;
    if (name == "xi") return LiftKind::Xi;
    if (name == "B") return LiftKind::B;
    throw Error(ErrorKind::UnknownLift, "no lift named '" + name + "' (pullback, vertical, complete, xi, B)");
}

std::string lift_kind_name(LiftKind kind) {
    switch (kind) {
    case LiftKind::Pullback: return "pullback";
    case LiftKind::Vertical: return "vertical";
    case LiftKind::Complete: return "complete";
    case LiftKind::Xi: return "xi";
    case LiftKind::B: return "B";
    }
    return {};
}

bool check_naturality(LiftKind kind, const BaseObject& object, const ChartTransition& T) {
    const int m = T.dim();
    const auto* form = std::get_if<BaseForm<Expr>>(&object);
    const auto* field = std::get_if<BaseVectorField<Expr>>(&object);
    auto mismatch = [&] {
        return Error(ErrorKind::TypeMismatch, "the " + lift_kind_name(kind) + " lift does not apply to this object");
    };
    switch (kind) {
    case LiftKind::Pullback:
        if (!form) throw mismatch();
        return transform(pullback(*form), T) == pullback(transform(*form, T));
    case LiftKind::Vertical:
        if (!field) throw mismatch();
        return transform(vertical_lift(*field), T) == vertical_lift(transform(*field, T));
    case LiftKind::Complete:
        if (form) return transform(complete_lift(*form), T) == complete_lift(transform(*form, T));
        if (field) return transform(complete_lift(*field), T) == complete_lift(transform(*field, T));
        throw mismatch();
    case LiftKind::Xi:
        return transform(tautological_field<Expr>(m), T) == tautological_field<Expr>(m);
    case LiftKind::B:
        return transform(mirror_map<Expr>(m), T) == mirror_map<Expr>(m);
    }
    return false;
}

bool check_naturality(const std::string& lift_name, const BaseObject& object, const ChartTransition& T) {
    return check_naturality(parse_lift_kind(lift_name), object, T);
}

Expr jacobian_determinant(const ChartTransition& T) {
    const int m = T.dim();
    Form<Expr> top = Form<Expr>::scalar(m, Expr(1));
    const Matrix J = T.jacobian();
    for (int a = 0; a < m; ++a) {
        Form<Expr> row(m, 1);
        for (int j = 0; j < m; ++j) row.add(slot_bit(j), J[static_cast<std::size_t>(a)][static_cast<std::size_t>(j)]);
        top = wedge(top, row);
    }
    return top.coefficient(base_block(m));
}

Expr volume_factor(const ChartTransition& T) {
    const int m = T.dim();
    const Mask all = base_block(m) | fiber_block(m);
    return pullback_along(T.tangent_map(), Form<Expr>::monomial(m, all)).coefficient(all);
}

bool dv_rule_is_flat(const ChartTransition& T) {
    const int m = T.dim();
    const auto phi = T.tangent_map();
    for (int a = 0; a < m; ++a) {
        Form<Expr> image = pullback_along(phi, Form<Expr>::dv(m, a + 1));
        for (const auto& [mask, c] : image.terms())
            if (mask & base_block(m)) return false;
    }
    return true;
}

bool check_tangent_composition(const ChartTransition& S, const ChartTransition& T) {
    return S.then(T).tangent_map() == compose_maps(T.tangent_map(), S.tangent_map(), S.dim());
}

bool check_theta_globality(const AlphaMuForm<Expr>& a, const ChartTransition& T) {
    const BaseForm<Expr> g = theta(a);
    const AlphaMuForm<Expr> moved{transform(a.omega, T), transform(a.mu, T)};
    return theta(moved).form() == transform(g, T).form();
}

} // namespace tmcalc

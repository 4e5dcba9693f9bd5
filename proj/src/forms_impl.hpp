#pragma once

// Template definitions for forms.hpp; included only by the instantiation units.

#include "tmcalc/forms.hpp"

#include <utility>

namespace tmcalc {

namespace detail {

template <class C>
C signed_value(int sign, const C& c) {
    return sign < 0 ? -c : c;
}

// det of rows x cols minor of a (p x p) matrix given row-major; structural zeros skipped.
template <class C>
C determinant(const std::vector<std::vector<const C*>>& M, std::vector<int>& cols, std::size_t row) {
    if (row == M.size()) return C(1);
    C total;
    int sign = 1;
    for (std::size_t k = 0; k < cols.size(); ++k) {
        const int col = cols[k];
        if (col < 0) continue;
        const C& entry = *M[row][static_cast<std::size_t>(col)];
        if (!entry.is_zero()) {
            cols[k] = -1;
            C minor = determinant(M, cols, row + 1);
            cols[k] = col;
            if (!minor.is_zero()) total += signed_value(sign, entry * minor);
        }
        sign = -sign;
    }
    return total;
}

} // namespace detail

// ------------------------------------------------------------------ Form

template <class C>
Form<C>::Form(int m, int degree) : m_(m), degree_(degree) {
    if (m < 1 || m > kMaxDim) throw Error(ErrorKind::InvalidArgument, "chart dimension out of range");
    if (degree < 0) throw Error(ErrorKind::InvalidArgument, "negative form degree");
}

template <class C>
Form<C> Form<C>::scalar(int m, C c) {
    Form f(m, 0);
    f.add(0, c);
    return f;
}

template <class C>
Form<C> Form<C>::monomial(int m, Mask mask, C c) {
    Form f(m, mask_size(mask));
    f.add(mask, c);
    return f;
}

template <class C>
C Form<C>::coefficient(Mask mask) const {
    auto it = terms_.find(mask);
    return it == terms_.end() ? C() : it->second;
}

template <class C>
void Form<C>::add(Mask mask, const C& c) {
    if (mask_size(mask) != degree_ || (mask >> (2 * m_)) != 0)
        throw Error(ErrorKind::InvalidArgument, "multi-index does not match the form degree");
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(mask, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

template <class C>
Form<C> Form<C>::operator-() const {
    Form out = *this;
    for (auto& [mask, c] : out.terms_) c = -c;
    return out;
}

template <class C>
Form<C>& Form<C>::operator+=(const Form& b) {
    detail::require_same_dim(m_, b.m_);
    if (degree_ != b.degree_) throw Error(ErrorKind::TypeMismatch, "adding forms of different degree");
    for (const auto& [mask, c] : b.terms_) add(mask, c);
    return *this;
}

template <class C>
Form<C>& Form<C>::operator-=(const Form& b) {
    return *this += -b;
}

template <class C>
Form<C> Form<C>::scaled(const C& c) const {
    Form out(m_, degree_);
    if (c.is_zero()) return out;
    for (const auto& [mask, a] : terms_) out.add(mask, c * a);
    return out;
}

// ----------------------------------------------------------- VectorField

template <class C>
VectorField<C>::VectorField(int m, std::vector<C> components) : m_(m), comps_(std::move(components)) {
    if (comps_.size() != static_cast<std::size_t>(2 * m))
        throw Error(ErrorKind::DimensionMismatch, "a vector field on TM needs 2m components");
}

template <class C>
VectorField<C> VectorField<C>::coordinate(int m, int slot) {
    VectorField X(m);
    X[slot] = C(1);
    return X;
}

template <class C>
bool VectorField<C>::is_zero() const {
    for (const auto& c : comps_)
        if (!c.is_zero()) return false;
    return true;
}

template <class C>
bool VectorField<C>::is_vertical() const {
    for (int s = 0; s < m_; ++s)
        if (!comps_[static_cast<std::size_t>(s)].is_zero()) return false;
    return true;
}

template <class C>
VectorField<C> VectorField<C>::operator-() const {
    VectorField out = *this;
    for (auto& c : out.comps_) c = -c;
    return out;
}

template <class C>
VectorField<C>& VectorField<C>::operator+=(const VectorField& b) {
    detail::require_same_dim(m_, b.m_);
    for (std::size_t s = 0; s < comps_.size(); ++s)
        if (!b.comps_[s].is_zero()) comps_[s] += b.comps_[s];
    return *this;
}

template <class C>
VectorField<C>& VectorField<C>::operator-=(const VectorField& b) {
    detail::require_same_dim(m_, b.m_);
    for (std::size_t s = 0; s < comps_.size(); ++s)
        if (!b.comps_[s].is_zero()) comps_[s] -= b.comps_[s];
    return *this;
}

template <class C>
VectorField<C> VectorField<C>::scaled(const C& c) const {
    VectorField out(m_);
    if (c.is_zero()) return out;
    for (std::size_t s = 0; s < comps_.size(); ++s)
        if (!comps_[s].is_zero()) out.comps_[s] = c * comps_[s];
    return out;
}

// ---------------------------------------------------------------- VVForm

template <class C>
VVForm<C> VVForm<C>::from_columns(int m, const std::vector<VectorField<C>>& columns) {
    if (columns.size() != static_cast<std::size_t>(2 * m))
        throw Error(ErrorKind::DimensionMismatch, "an endomorphism of TTM needs 2m columns");
    VVForm K(m, 1);
    for (int s = 0; s < 2 * m; ++s) K.add(slot_bit(s), columns[static_cast<std::size_t>(s)]);
    return K;
}

template <class C>
VVForm<C> VVForm<C>::vector(const VectorField<C>& X) {
    VVForm K(X.dim(), 0);
    K.add(0, X);
    return K;
}

template <class C>
VectorField<C> VVForm<C>::value(Mask mask) const {
    auto it = terms_.find(mask);
    return it == terms_.end() ? VectorField<C>(m_) : it->second;
}

template <class C>
void VVForm<C>::add(Mask mask, const VectorField<C>& X) {
    if (mask_size(mask) != degree_ || (mask >> (2 * m_)) != 0)
        throw Error(ErrorKind::InvalidArgument, "multi-index does not match the vector-valued form degree");
    detail::require_same_dim(m_, X.dim());
    if (X.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(mask, X);
    if (!inserted) {
        it->second += X;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

template <class C>
VVForm<C> VVForm<C>::operator-() const {
    VVForm out = *this;
    for (auto& [mask, X] : out.terms_) X = -X;
    return out;
}

template <class C>
VVForm<C>& VVForm<C>::operator+=(const VVForm& b) {
    detail::require_same_dim(m_, b.m_);
    if (degree_ != b.degree_) throw Error(ErrorKind::TypeMismatch, "adding vector-valued forms of different degree");
    for (const auto& [mask, X] : b.terms_) add(mask, X);
    return *this;
}

template <class C>
VVForm<C>& VVForm<C>::operator-=(const VVForm& b) {
    return *this += -b;
}

template <class C>
VVForm<C> VVForm<C>::scaled(const C& c) const {
    VVForm out(m_, degree_);
    for (const auto& [mask, X] : terms_) out.add(mask, X.scaled(c));
    return out;
}

// ------------------------------------------------------- base objects

template <class C>
BaseForm<C>::BaseForm(Form<C> f) : form_(std::move(f)) {
    const Mask base = base_block(form_.dim());
    for (const auto& [mask, c] : form_.terms()) {
        if ((mask & ~base) != 0) throw Error(ErrorKind::NotBaseOnly, "base form with a dv index");
        if (!is_base_only(c)) throw Error(ErrorKind::NotBaseOnly, "base form with a fiber-dependent coefficient");
    }
}

template <class C>
BaseVectorField<C>::BaseVectorField(int m, std::vector<C> components) : m_(m), comps_(std::move(components)) {
    if (comps_.size() != static_cast<std::size_t>(m))
        throw Error(ErrorKind::DimensionMismatch, "a base vector field needs m components");
    for (const auto& c : comps_)
        if (!is_base_only(c)) throw Error(ErrorKind::NotBaseOnly, "base vector field with a fiber-dependent component");
}

// -------------------------------------------------------------- calculus

template <class C>
Form<C> wedge(const Form<C>& a, const Form<C>& b) {
    detail::require_same_dim(a.dim(), b.dim());
    Form<C> out(a.dim(), a.degree() + b.degree());
    if (a.degree() + b.degree() > 2 * a.dim()) return out;
    for (const auto& [ma, ca] : a.terms())
        for (const auto& [mb, cb] : b.terms()) {
            const int sign = wedge_sign(ma, mb);
            if (sign != 0) out.add(ma | mb, detail::signed_value(sign, ca * cb));
        }
    return out;
}

namespace detail {

template <class C>
Form<C> derivative_over(const Form<C>& a, int slots) {
    const int m = a.dim();
    Form<C> out(m, a.degree() + 1);
    for (const auto& [mask, f] : a.terms())
        for (int s = 0; s < slots; ++s) {
            if (mask & slot_bit(s)) continue;
            C df = partial(f, CoordinateId::from_slot(m, s));
            if (!df.is_zero()) out.add(mask | slot_bit(s), signed_value(wedge_sign(slot_bit(s), mask), df));
        }
    return out;
}

} // namespace detail

template <class C>
Form<C> exterior_derivative(const Form<C>& a) {
    return detail::derivative_over(a, 2 * a.dim());
}

template <class C>
Form<C> interior_product(const VectorField<C>& X, const Form<C>& a) {
    detail::require_same_dim(X.dim(), a.dim());
    if (a.degree() == 0) return Form<C>(a.dim(), 0);
    Form<C> out(a.dim(), a.degree() - 1);
    for (const auto& [mask, f] : a.terms()) {
        int position = 0;
        for (int s : mask_slots(mask)) {
            if (!X[s].is_zero()) out.add(mask & ~slot_bit(s), detail::signed_value(position % 2 ? -1 : 1, X[s] * f));
            ++position;
        }
    }
    return out;
}

template <class C>
C apply(const VectorField<C>& X, const C& f) {
    C out;
    for (int s = 0; s < 2 * X.dim(); ++s)
        if (!X[s].is_zero()) out += X[s] * partial(f, CoordinateId::from_slot(X.dim(), s));
    return out;
}

template <class C>
VectorField<C> lie_bracket(const VectorField<C>& X, const VectorField<C>& Y) {
    detail::require_same_dim(X.dim(), Y.dim());
    VectorField<C> out(X.dim());
    for (int a = 0; a < 2 * X.dim(); ++a) out[a] = apply(X, Y[a]) - apply(Y, X[a]);
    return out;
}

template <class C>
Form<C> lie_derivative_form(const VectorField<C>& X, const Form<C>& a) {
    detail::require_same_dim(X.dim(), a.dim());
    const int m = a.dim();
    Form<C> out(m, a.degree());
    for (const auto& [mask, f] : a.terms()) {
        out.add(mask, apply(X, f));
        int position = 0;
        for (int s : mask_slots(mask)) {
            const Mask rest = mask & ~slot_bit(s);
            for (int c = 0; c < 2 * m; ++c) {
                if (rest & slot_bit(c)) continue;
                C g = partial(X[s], CoordinateId::from_slot(m, c));
                if (g.is_zero()) continue;
                const int sign = (position % 2 ? -1 : 1) * wedge_sign(slot_bit(c), rest);
                out.add(rest | slot_bit(c), detail::signed_value(sign, f * g));
            }
            ++position;
        }
    }
    return out;
}

template <class C>
C evaluate_form(const Form<C>& a, const std::vector<VectorField<C>>& vectors) {
    if (vectors.size() != static_cast<std::size_t>(a.degree()))
        throw Error(ErrorKind::ArityMismatch, "a " + std::to_string(a.degree()) + "-form needs " +
                                                  std::to_string(a.degree()) + " arguments, got " +
                                                  std::to_string(vectors.size()));
    for (const auto& X : vectors) detail::require_same_dim(X.dim(), a.dim());
    C total;
    for (const auto& [mask, f] : a.terms()) {
        std::vector<std::vector<const C*>> M;
        for (int s : mask_slots(mask)) {
            std::vector<const C*> row;
            for (const auto& X : vectors) row.push_back(&X[s]);
            M.push_back(std::move(row));
        }
        std::vector<int> cols(vectors.size());
        for (std::size_t k = 0; k < cols.size(); ++k) cols[k] = static_cast<int>(k);
        C det = detail::determinant(M, cols, 0);
        if (!det.is_zero()) total += f * det;
    }
    return total;
}

template <class C>
VectorField<C> apply(const VVForm<C>& K, const VectorField<C>& X) {
    if (K.degree() != 1) throw Error(ErrorKind::UnsupportedDegree, "expected a vector-valued 1-form");
    detail::require_same_dim(K.dim(), X.dim());
    VectorField<C> out(K.dim());
    for (const auto& [mask, column] : K.terms()) {
        const int s = std::countr_zero(mask);
        if (!X[s].is_zero()) out += column.scaled(X[s]);
    }
    return out;
}

template <class C>
VectorField<C> apply(const VVForm<C>& K, const VectorField<C>& X, const VectorField<C>& Y) {
    if (K.degree() != 2) throw Error(ErrorKind::UnsupportedDegree, "expected a vector-valued 2-form");
    VectorField<C> out(K.dim());
    for (const auto& [mask, value] : K.terms()) {
        const auto slots = mask_slots(mask);
        C w = X[slots[0]] * Y[slots[1]] - X[slots[1]] * Y[slots[0]];
        if (!w.is_zero()) out += value.scaled(w);
    }
    return out;
}

template <class C>
VVForm<C> compose(const VVForm<C>& K, const VVForm<C>& L) {
    if (K.degree() != 1 || L.degree() != 1) throw Error(ErrorKind::UnsupportedDegree, "composition needs endomorphisms");
    VVForm<C> out(K.dim(), 1);
    for (const auto& [mask, column] : L.terms()) out.add(mask, apply(K, column));
    return out;
}

template <class C>
VVForm<C> lie_derivative_vvform(const VectorField<C>& W, const VVForm<C>& K) {
    if (K.degree() != 1) throw Error(ErrorKind::UnsupportedDegree, "Lie derivative of a vector-valued form needs degree 1");
    detail::require_same_dim(W.dim(), K.dim());
    const int m = K.dim();
    VVForm<C> out(m, 1);
    for (int c = 0; c < 2 * m; ++c) {
        VectorField<C> column = lie_bracket(W, K.value(slot_bit(c)));
        for (const auto& [mask, Ka] : K.terms()) {
            C dW = partial(W[std::countr_zero(mask)], CoordinateId::from_slot(m, c));
            if (!dW.is_zero()) column += Ka.scaled(dW);
        }
        out.add(slot_bit(c), column);
    }
    return out;
}

template <class C>
VVForm<C> identity_endomorphism(int m) {
    VVForm<C> K(m, 1);
    for (int s = 0; s < 2 * m; ++s) K.add(slot_bit(s), VectorField<C>::coordinate(m, s));
    return K;
}

template <class C>
VVForm<C> mirror_map(int m) {
    VVForm<C> B(m, 1);
    for (int j = 0; j < m; ++j) B.add(slot_bit(j), VectorField<C>::coordinate(m, m + j));
    return B;
}

template <class C>
VectorField<C> tautological_field(int m) {
    VectorField<C> xi(m);
    for (int i = 1; i <= m; ++i) xi[m + i - 1] = C::coordinate(CoordinateId::fiber(i));
    return xi;
}

// ------------------------------------------------------------ base level

template <class C>
BaseForm<C> base_wedge(const BaseForm<C>& a, const BaseForm<C>& b) {
    return BaseForm<C>(wedge(a.form(), b.form()));
}

template <class C>
BaseForm<C> base_exterior_derivative(const BaseForm<C>& a) {
    return BaseForm<C>(detail::derivative_over(a.form(), a.dim()));
}

template <class C>
C base_apply(const BaseVectorField<C>& X, const C& f) {
    C out;
    for (int i = 0; i < X.dim(); ++i)
        if (!X[i].is_zero()) out += X[i] * partial(f, CoordinateId::base(i + 1));
    return out;
}

template <class C>
BaseVectorField<C> base_lie_bracket(const BaseVectorField<C>& X, const BaseVectorField<C>& Y) {
    detail::require_same_dim(X.dim(), Y.dim());
    std::vector<C> out;
    for (int i = 0; i < X.dim(); ++i) out.push_back(base_apply(X, Y[i]) - base_apply(Y, X[i]));
    return BaseVectorField<C>(X.dim(), std::move(out));
}

template <class C>
C base_evaluate(const BaseForm<C>& a, const std::vector<BaseVectorField<C>>& vectors) {
    std::vector<VectorField<C>> embedded;
    for (const auto& X : vectors) {
        VectorField<C> Y(X.dim());
        for (int i = 0; i < X.dim(); ++i) Y[i] = X[i];
        embedded.push_back(std::move(Y));
    }
    return evaluate_form(a.form(), embedded);
}

template <class C>
BaseForm<C> base_scalar(int m, const C& f) {
    return BaseForm<C>(Form<C>::scalar(m, f));
}

#define TMCALC_INSTANTIATE_FORMS(C)                                                                   \
    template class Form<C>;                                                                           \
    template class VectorField<C>;                                                                    \
    template class VVForm<C>;                                                                         \
    template class BaseForm<C>;                                                                       \
    template class BaseVectorField<C>;                                                                \
    template Form<C> wedge(const Form<C>&, const Form<C>&);                                          \
    template Form<C> exterior_derivative(const Form<C>&);                                             \
    template Form<C> interior_product(const VectorField<C>&, const Form<C>&);                        \
    template C apply(const VectorField<C>&, const C&);                                               \
    template VectorField<C> lie_bracket(const VectorField<C>&, const VectorField<C>&);               \
    template Form<C> lie_derivative_form(const VectorField<C>&, const Form<C>&);                     \
    template C evaluate_form(const Form<C>&, const std::vector<VectorField<C>>&);                    \
    template VectorField<C> apply(const VVForm<C>&, const VectorField<C>&);                          \
    template VectorField<C> apply(const VVForm<C>&, const VectorField<C>&, const VectorField<C>&);   \
    template VVForm<C> compose(const VVForm<C>&, const VVForm<C>&);                                  \
    template VVForm<C> lie_derivative_vvform(const VectorField<C>&, const VVForm<C>&);               \
    template VVForm<C> identity_endomorphism(int);                                                   \
    template VVForm<C> mirror_map(int);                                                               \
    template VectorField<C> tautological_field(int);                                                 \
    template BaseForm<C> base_wedge(const BaseForm<C>&, const BaseForm<C>&);                         \
    template BaseForm<C> base_exterior_derivative(const BaseForm<C>&);                               \
    template C base_apply(const BaseVectorField<C>&, const C&);                                      \
    template BaseVectorField<C> base_lie_bracket(const BaseVectorField<C>&, const BaseVectorField<C>&); \
    template C base_evaluate(const BaseForm<C>&, const std::vector<BaseVectorField<C>>&);            \
    template BaseForm<C> base_scalar(int, const C&);

} // namespace tmcalc

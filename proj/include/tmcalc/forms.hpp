#pragma once

// Differential forms, vector fields and vector-valued forms on the chart
// domain of TM, generic in the coefficient type. Two coefficient types are
// instantiated: ScalarExpr (exact, symbolic) and FdScalar (numeric
// cross-check with finite-difference derivatives).

#include "tmcalc/error.hpp"
#include "tmcalc/fd_scalar.hpp"
#include "tmcalc/generator.hpp"
#include "tmcalc/scalar.hpp"

#include <bit>
#include <cstdint>
#include <map>
#include <vector>

namespace tmcalc {

/// Set of coframe slots: bit s stands for dx^{s+1} (s < m) or dv^{s-m+1}.
using Mask = std::uint32_t;

inline int mask_size(Mask a) { return std::popcount(a); }
inline Mask slot_bit(int slot) { return Mask{1} << slot; }
std::vector<int> mask_slots(Mask a);
Mask mask_of(const std::vector<int>& slots);
/// Sign of dy^a ∧ dy^b reordered into increasing slot order (0 if they overlap).
int wedge_sign(Mask a, Mask b);
/// Masks lying in the dx block only.
inline Mask base_block(int m) { return (Mask{1} << m) - 1; }
inline Mask fiber_block(int m) { return base_block(m) << m; }

template <class C>
class Form {
public:
    Form() = default;
    Form(int m, int degree);

    static Form scalar(int m, C c);
    static Form monomial(int m, Mask mask, C c = C(1));
    static Form dx(int m, int i) { return monomial(m, slot_bit(i - 1)); }
    static Form dv(int m, int i) { return monomial(m, slot_bit(m + i - 1)); }

    int dim() const { return m_; }
    int degree() const { return degree_; }
    const std::map<Mask, C>& terms() const { return terms_; }
    C coefficient(Mask mask) const;
    /// Degree-0 value.
    C value() const { return coefficient(0); }
    bool is_zero() const { return terms_.empty(); }

    /// Adds c to the coefficient of `mask`; structurally zero results are dropped.
    void add(Mask mask, const C& c);

    Form operator-() const;
    Form& operator+=(const Form& b);
    Form& operator-=(const Form& b);
    friend Form operator+(Form a, const Form& b) { return a += b; }
    friend Form operator-(Form a, const Form& b) { return a -= b; }
    friend Form operator*(const C& c, const Form& a) { return a.scaled(c); }
    Form scaled(const C& c) const;

    template <class F>
    auto map(F&& f) const -> Form<decltype(f(std::declval<C>()))> {
        Form<decltype(f(std::declval<C>()))> out(m_, degree_);
        for (const auto& [mask, c] : terms_) out.add(mask, f(c));
        return out;
    }

    friend bool operator==(const Form& a, const Form& b) {
        return a.m_ == b.m_ && a.degree_ == b.degree_ && a.terms_ == b.terms_;
    }

private:
    int m_ = 0;
    int degree_ = 0;
    std::map<Mask, C> terms_;
};

/// Vector field on TM: components over ∂x^1..∂x^m, ∂v^1..∂v^m.
template <class C>
class VectorField {
public:
    VectorField() = default;
    explicit VectorField(int m) : m_(m), comps_(static_cast<std::size_t>(2 * m)) {}
    VectorField(int m, std::vector<C> components);

    static VectorField coordinate(int m, int slot);

    int dim() const { return m_; }
    const std::vector<C>& components() const { return comps_; }
    const C& operator[](int slot) const { return comps_[static_cast<std::size_t>(slot)]; }
    C& operator[](int slot) { return comps_[static_cast<std::size_t>(slot)]; }
    bool is_zero() const;
    /// All ∂x components vanish structurally.
    bool is_vertical() const;

    VectorField operator-() const;
    VectorField& operator+=(const VectorField& b);
    VectorField& operator-=(const VectorField& b);
    friend VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
    friend VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
    friend VectorField operator*(const C& c, const VectorField& a) { return a.scaled(c); }
    VectorField scaled(const C& c) const;

    template <class F>
    auto map(F&& f) const -> VectorField<decltype(f(std::declval<C>()))> {
        VectorField<decltype(f(std::declval<C>()))> out(m_);
        for (int s = 0; s < 2 * m_; ++s) out[s] = f(comps_[static_cast<std::size_t>(s)]);
        return out;
    }

    friend bool operator==(const VectorField& a, const VectorField& b) {
        return a.m_ == b.m_ && a.comps_ == b.comps_;
    }

private:
    int m_ = 0;
    std::vector<C> comps_;
};

/// TTM-valued form of degree k: one vector field per increasing multi-index.
template <class C>
class VVForm {
public:
    VVForm() = default;
    VVForm(int m, int degree) : m_(m), degree_(degree) {}

    /// Σ_s dy^s ⊗ column_s for a degree-1 form given by its columns K(∂_s).
    static VVForm from_columns(int m, const std::vector<VectorField<C>>& columns);
    static VVForm vector(const VectorField<C>& X);

    int dim() const { return m_; }
    int degree() const { return degree_; }
    const std::map<Mask, VectorField<C>>& terms() const { return terms_; }
    VectorField<C> value(Mask mask) const;
    bool is_zero() const { return terms_.empty(); }
    void add(Mask mask, const VectorField<C>& X);

    VVForm operator-() const;
    VVForm& operator+=(const VVForm& b);
    VVForm& operator-=(const VVForm& b);
    friend VVForm operator+(VVForm a, const VVForm& b) { return a += b; }
    friend VVForm operator-(VVForm a, const VVForm& b) { return a -= b; }
    friend VVForm operator*(const C& c, const VVForm& a) { return a.scaled(c); }
    VVForm scaled(const C& c) const;

    template <class F>
    auto map(F&& f) const -> VVForm<decltype(f(std::declval<C>()))> {
        VVForm<decltype(f(std::declval<C>()))> out(m_, degree_);
        for (const auto& [mask, X] : terms_) out.add(mask, X.map(f));
        return out;
    }

    friend bool operator==(const VVForm& a, const VVForm& b) {
        return a.m_ == b.m_ && a.degree_ == b.degree_ && a.terms_ == b.terms_;
    }

private:
    int m_ = 0;
    int degree_ = 0;
    std::map<Mask, VectorField<C>> terms_;
};

/// Form on the base M: only dx indices, base-only coefficients.
template <class C>
class BaseForm {
public:
    BaseForm() = default;
    /// Throws NotBaseOnly when `f` has a dv index or a fiber-dependent coefficient.
    explicit BaseForm(Form<C> f);
    static BaseForm zero(int m, int degree) { return BaseForm(Form<C>(m, degree)); }

    const Form<C>& form() const { return form_; }
    int dim() const { return form_.dim(); }
    int degree() const { return form_.degree(); }

    friend bool operator==(const BaseForm& a, const BaseForm& b) { return a.form_ == b.form_; }

private:
    Form<C> form_;
};

/// Vector field on the base M: m base-only components.
template <class C>
class BaseVectorField {
public:
    BaseVectorField() = default;
    /// Throws NotBaseOnly on a fiber-dependent component.
    BaseVectorField(int m, std::vector<C> components);

    int dim() const { return m_; }
    const std::vector<C>& components() const { return comps_; }
    const C& operator[](int i) const { return comps_[static_cast<std::size_t>(i)]; }

    friend bool operator==(const BaseVectorField& a, const BaseVectorField& b) {
        return a.m_ == b.m_ && a.comps_ == b.comps_;
    }

private:
    int m_ = 0;
    std::vector<C> comps_;
};

// ------------------------------------------------------------ calculus

template <class C> Form<C> wedge(const Form<C>& a, const Form<C>& b);
template <class C> Form<C> exterior_derivative(const Form<C>& a);
template <class C> Form<C> interior_product(const VectorField<C>& X, const Form<C>& a);
/// X·f for a function f.
template <class C> C apply(const VectorField<C>& X, const C& f);
template <class C> VectorField<C> lie_bracket(const VectorField<C>& X, const VectorField<C>& Y);
/// Computed with the coordinate Leibniz rule
/// L_X(f dy^I) = X(f) dy^I + f Σ_k dy^{i_1} ∧ … ∧ d(X^{i_k}) ∧ … ∧ dy^{i_p}.
template <class C> Form<C> lie_derivative_form(const VectorField<C>& X, const Form<C>& a);
/// Throws ArityMismatch unless vectors.size() == degree.
template <class C> C evaluate_form(const Form<C>& a, const std::vector<VectorField<C>>& vectors);

/// K(X) for K of degree 1.
template <class C> VectorField<C> apply(const VVForm<C>& K, const VectorField<C>& X);
/// K(X, Y) for K of degree 2.
template <class C> VectorField<C> apply(const VVForm<C>& K, const VectorField<C>& X, const VectorField<C>& Y);
/// K ∘ L for degree-1 endomorphisms.
template <class C> VVForm<C> compose(const VVForm<C>& K, const VVForm<C>& L);
/// L_W K for K of degree 1: Σ_a d(W^a) ⊗ K(∂_a) + dy^a ⊗ [W, K(∂_a)].
template <class C> VVForm<C> lie_derivative_vvform(const VectorField<C>& W, const VVForm<C>& K);

template <class C> VVForm<C> identity_endomorphism(int m);
template <class C> VVForm<C> mirror_map(int m);
template <class C> VectorField<C> tautological_field(int m);

// ----------------------------------------------------- base-level calculus

template <class C> BaseForm<C> base_wedge(const BaseForm<C>& a, const BaseForm<C>& b);
template <class C> BaseForm<C> base_exterior_derivative(const BaseForm<C>& a);
template <class C> C base_apply(const BaseVectorField<C>& X, const C& f);
template <class C> BaseVectorField<C> base_lie_bracket(const BaseVectorField<C>& X, const BaseVectorField<C>& Y);
/// α(X_1, …, X_p) on the base.
template <class C> C base_evaluate(const BaseForm<C>& a, const std::vector<BaseVectorField<C>>& vectors);
/// Degree-0 base form.
template <class C> BaseForm<C> base_scalar(int m, const C& f);

/// Is the coefficient free of fiber dependence (structurally, for FdScalar)?
namespace detail {
inline void require_same_dim(int a, int b) {
    if (a != b)
        throw Error(ErrorKind::DimensionMismatch,
                    "chart dimensions differ (" + std::to_string(a) + " vs " + std::to_string(b) + ")");
}
} // namespace detail

inline bool is_base_only(const ScalarExpr& e) { return e.is_base_only(); }
inline bool is_base_only(const FdScalar& e) { return e.is_base_only(); }

#define TMCALC_EXTERN_FORMS(C)                                                                               \
    extern template class Form<C>;                                                                           \
    extern template class VectorField<C>;                                                                    \
    extern template class VVForm<C>;                                                                         \
    extern template class BaseForm<C>;                                                                       \
    extern template class BaseVectorField<C>;                                                                \
    extern template Form<C> wedge(const Form<C>&, const Form<C>&);                                          \
    extern template Form<C> exterior_derivative(const Form<C>&);                                             \
    extern template Form<C> interior_product(const VectorField<C>&, const Form<C>&);                        \
    extern template C apply(const VectorField<C>&, const C&);                                               \
    extern template VectorField<C> lie_bracket(const VectorField<C>&, const VectorField<C>&);               \
    extern template Form<C> lie_derivative_form(const VectorField<C>&, const Form<C>&);                     \
    extern template C evaluate_form(const Form<C>&, const std::vector<VectorField<C>>&);                    \
    extern template VectorField<C> apply(const VVForm<C>&, const VectorField<C>&);                          \
    extern template VectorField<C> apply(const VVForm<C>&, const VectorField<C>&, const VectorField<C>&);   \
    extern template VVForm<C> compose(const VVForm<C>&, const VVForm<C>&);                                  \
    extern template VVForm<C> lie_derivative_vvform(const VectorField<C>&, const VVForm<C>&);               \
    extern template VVForm<C> identity_endomorphism(int);                                                   \
    extern template VVForm<C> mirror_map(int);                                                               \
    extern template VectorField<C> tautological_field(int);                                                 \
    extern template BaseForm<C> base_wedge(const BaseForm<C>&, const BaseForm<C>&);                         \
    extern template BaseForm<C> base_exterior_derivative(const BaseForm<C>&);                               \
    extern template C base_apply(const BaseVectorField<C>&, const C&);                                      \
    extern template BaseVectorField<C> base_lie_bracket(const BaseVectorField<C>&, const BaseVectorField<C>&); \
    extern template C base_evaluate(const BaseForm<C>&, const std::vector<BaseVectorField<C>>&);            \
    extern template BaseForm<C> base_scalar(int, const C&);

TMCALC_EXTERN_FORMS(ScalarExpr)
TMCALC_EXTERN_FORMS(FdScalar)

} // namespace tmcalc

#pragma once

#include "tmcalc/forms.hpp"

#include <map>
#include <optional>
#include <vector>

namespace tmcalc {

// ------------------------------------------------------------ basic lifts

template <class C>
Form<C> pullback(const BaseForm<C>& a) {
    return a.form();
}

template <class C>
VectorField<C> vertical_lift(const BaseVectorField<C>& X) {
    const int m = X.dim();
    VectorField<C> out(m);
    for (int i = 0; i < m; ++i) out[m + i] = X[i];
    return out;
}

/// The base field viewed on TM with no fiber components (the trivial embedding, not a lift).
template <class C>
VectorField<C> horizontal_embedding(const BaseVectorField<C>& X) {
    VectorField<C> out(X.dim());
    for (int i = 0; i < X.dim(); ++i) out[i] = X[i];
    return out;
}

/// f~ = v^j df/dx^j.
template <class C>
C complete_lift_function(const C& f, int m) {
    if (!is_base_only(f)) throw Error(ErrorKind::NotBaseOnly, "complete lift of a fiber-dependent function");
    C out;
    for (int j = 1; j <= m; ++j) {
        C df = partial(f, CoordinateId::base(j));
        if (!df.is_zero()) out += C::coordinate(CoordinateId::fiber(j)) * df;
    }
    return out;
}

template <class C>
VectorField<C> complete_lift(const BaseVectorField<C>& X) {
    const int m = X.dim();
    VectorField<C> out(m);
    for (int i = 0; i < m; ++i) {
        out[i] = X[i];
        out[m + i] = complete_lift_function(X[i], m);
    }
    return out;
}

/// Sum over I of a_I~ dx^I plus, for each slot of I, a_I times dx^I with that dx replaced by dv.
template <class C>
Form<C> complete_lift(const BaseForm<C>& a) {
    const int m = a.dim();
    Form<C> out(m, a.degree());
    for (const auto& [mask, f] : a.form().terms()) {
        out.add(mask, complete_lift_function(f, m));
        for (int s : mask_slots(mask)) {
            const Mask rest = mask & ~slot_bit(s);
            const int sign = wedge_sign(slot_bit(s), rest) * wedge_sign(slot_bit(m + s), rest);
            out.add(rest | slot_bit(m + s), sign < 0 ? -f : f);
        }
    }
    return out;
}

// ------------------------------------------------------------ tensors

/// Mixed tensor on TM: components indexed by
/// r contravariant slots followed by s covariant slots.
template <class C>
struct Tensor {
    int m = 0;
    int contravariant = 0;
    int covariant = 0;
    std::map<std::vector<int>, C> components;

    void add(const std::vector<int>& index, const C& c) {
        if (c.is_zero()) return;
        auto [it, inserted] = components.try_emplace(index, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) components.erase(it);
        }
    }
    Tensor& operator+=(const Tensor& b) {
        if (b.m != m || b.contravariant != contravariant || b.covariant != covariant)
            throw Error(ErrorKind::TypeMismatch, "adding tensors of different type");
        for (const auto& [idx, c] : b.components) add(idx, c);
        return *this;
    }
    friend bool operator==(const Tensor& a, const Tensor& b) {
        return a.m == b.m && a.contravariant == b.contravariant && a.covariant == b.covariant &&
               a.components == b.components;
    }
};

/// Tensor product of fields and 1-forms on TM, contravariant factors first.
template <class C>
Tensor<C> tensor_product(int m, const std::vector<VectorField<C>>& vectors, const std::vector<Form<C>>& covectors) {
    Tensor<C> out{m, static_cast<int>(vectors.size()), static_cast<int>(covectors.size()), {}};
    std::map<std::vector<int>, C> acc{{{}, C(1)}};
    for (const auto& X : vectors) {
        std::map<std::vector<int>, C> next;
        for (const auto& [idx, c] : acc)
            for (int s = 0; s < 2 * m; ++s)
                if (!X[s].is_zero()) {
                    auto j = idx;
                    j.push_back(s);
                    next[j] = c * X[s];
                }
        acc = std::move(next);
    }
    for (const auto& a : covectors) {
        if (a.degree() != 1) throw Error(ErrorKind::TypeMismatch, "tensor factors must be 1-forms");
        std::map<std::vector<int>, C> next;
        for (const auto& [idx, c] : acc)
            for (const auto& [mask, f] : a.terms()) {
                auto j = idx;
                j.push_back(std::countr_zero(mask));
                next[j] = c * f;
            }
        acc = std::move(next);
    }
    for (const auto& [idx, c] : acc) out.add(idx, c);
    return out;
}

/// A vector-valued 1-form as a (1,1) tensor: component (a, b) = K(d/db)^a.
template <class C>
Tensor<C> as_tensor(const VVForm<C>& K) {
    if (K.degree() != 1) throw Error(ErrorKind::UnsupportedDegree, "only endomorphisms convert to (1,1) tensors");
    Tensor<C> out{K.dim(), 1, 1, {}};
    for (const auto& [mask, X] : K.terms())
        for (int a = 0; a < 2 * K.dim(); ++a) out.add({a, std::countr_zero(mask)}, X[a]);
    return out;
}

/// One product term of a base tensor: vector-field factors, then 1-form factors.
template <class C>
struct BaseTensorTerm {
    std::vector<BaseVectorField<C>> vectors;
    std::vector<BaseForm<C>> covectors;
};

enum class LiftMode { Vertical, Complete };

/// Vertical mode lifts every factor by the star lift (pullback on 1-forms,
/// vertical lift on fields). Complete mode sums, over each factor in turn,
/// the product with that factor complete-lifted and the others star-lifted.
template <class C>
Tensor<C> lift_tensor(const std::vector<BaseTensorTerm<C>>& terms, LiftMode mode) {
    if (terms.empty()) throw Error(ErrorKind::InvalidArgument, "empty tensor");
    const auto& first = terms.front();
    const int m = first.vectors.empty() ? first.covectors.at(0).dim() : first.vectors.front().dim();
    Tensor<C> out{m, static_cast<int>(first.vectors.size()), static_cast<int>(first.covectors.size()), {}};
    for (const auto& term : terms) {
        const std::size_t r = term.vectors.size(), n = r + term.covectors.size();
        auto product = [&](std::size_t complete_factor) {
            std::vector<VectorField<C>> P;
            std::vector<Form<C>> Q;
            for (std::size_t k = 0; k < r; ++k)
                P.push_back(k == complete_factor ? complete_lift(term.vectors[k]) : vertical_lift(term.vectors[k]));
            for (std::size_t k = r; k < n; ++k)
                Q.push_back(k == complete_factor ? complete_lift(term.covectors[k - r])
                                                 : pullback(term.covectors[k - r]));
            return tensor_product(m, P, Q);
        };
        if (mode == LiftMode::Vertical) out += product(n);
        else
            for (std::size_t k = 0; k < n; ++k) out += product(k);
    }
    return out;
}

// ------------------------------------------------------------ decisions (exact only)

/// B(S) equals the tautological field.
bool is_spray(const VectorField<ScalarExpr>& S);

/// lambda with L_W B = lambda * B, when L_W B is a scalar multiple of B.
std::optional<ScalarExpr> is_lambda_mirror(const VectorField<ScalarExpr>& W);

} // namespace tmcalc

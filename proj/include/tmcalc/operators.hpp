#pragma once

#include "tmcalc/forms.hpp"
#include "tmcalc/lifts.hpp"

#include <algorithm>
#include <optional>
#include <vector>

namespace tmcalc {

// ------------------------------------------------------------ circ-wedge

/// dy^a o K as a 1-form: sum over c of K(d/dy^c)^a dy^c.
template <class C>
Form<C> covector_after(int slot, const VVForm<C>& K) {
    Form<C> out(K.dim(), 1);
    for (const auto& [mask, column] : K.terms()) out.add(mask, column[slot]);
    return out;
}

/// eta o (K_1 ^ ... ^ K_p), extended linearly from decomposable eta by the
/// sum over permutations of eta_1 o K_s1 ^ ... ^ eta_p o K_sp. No 1/p!.
template <class C>
Form<C> circ_wedge(const Form<C>& eta, const std::vector<VVForm<C>>& endos) {
    const int m = eta.dim(), p = eta.degree();
    if (static_cast<int>(endos.size()) != p)
        throw Error(ErrorKind::ArityMismatch, "circ-wedge of a " + std::to_string(p) + "-form needs " +
                                                  std::to_string(p) + " endomorphisms");
    for (const auto& K : endos)
        if (K.degree() != 1) throw Error(ErrorKind::UnsupportedDegree, "circ-wedge needs vector-valued 1-forms");
    if (p == 0) return eta;
    Form<C> out(m, p);
    for (const auto& [mask, f] : eta.terms()) {
        const auto slots = mask_slots(mask);
        // pieces[k][j] = dy^{slots[k]} o K_j
        std::vector<std::vector<Form<C>>> pieces(slots.size());
        for (std::size_t k = 0; k < slots.size(); ++k)
            for (const auto& K : endos) pieces[k].push_back(covector_after(slots[k], K));
        std::vector<int> sigma(static_cast<std::size_t>(p));
        for (int j = 0; j < p; ++j) sigma[static_cast<std::size_t>(j)] = j;
        do {
            Form<C> product = Form<C>::scalar(m, f);
            for (std::size_t k = 0; k < slots.size() && !product.is_zero(); ++k)
                product = wedge(product, pieces[k][static_cast<std::size_t>(sigma[k])]);
            if (!product.is_zero()) out += product;
        } while (std::next_permutation(sigma.begin(), sigma.end()));
    }
    return out;
}

/// The list (K x i, 1 x (p - i)).
template <class C>
std::vector<VVForm<C>> mixed_endomorphisms(const VVForm<C>& K, int i, int p) {
    std::vector<VVForm<C>> out(static_cast<std::size_t>(i), K);
    for (int k = i; k < p; ++k) out.push_back(identity_endomorphism<C>(K.dim()));
    return out;
}

// ------------------------------------------------------------ derivations

/// Algebraic derivation i_K for a vector-valued q-form K (q <= 2 by the
/// callers, any q works): on sorted frame indices J,
///   (i_K w)(d_J) = sum over S in J with |S| = q of sgn(S, J\S) w(K(d_S), d_{J\S}).
template <class C>
Form<C> insertion_derivation(const VVForm<C>& K, const Form<C>& w) {
    detail::require_same_dim(K.dim(), w.dim());
    const int m = w.dim(), q = K.degree(), p = w.degree();
    if (p == 0) return Form<C>(m, std::max(q - 1, 0));
    Form<C> out(m, q + p - 1);
    if (q + p - 1 > 2 * m) return out;
    for (const auto& [M, f] : w.terms()) {
        int position = 0;
        for (int a : mask_slots(M)) {
            const Mask rest = M & ~slot_bit(a);
            const C lead = position % 2 ? -f : f;
            ++position;
            for (const auto& [S, V] : K.terms()) {
                if (S & rest || V[a].is_zero()) continue;
                const int sign = wedge_sign(S, rest);
                const C c = V[a] * lead;
                out.add(S | rest, sign < 0 ? -c : c);
            }
        }
    }
    return out;
}

/// d_B w: d_B f = df/dv^i dx^i and d_B kills dx^i, dv^i.
template <class C>
Form<C> db(const Form<C>& w) {
    const int m = w.dim();
    Form<C> out(m, w.degree() + 1);
    if (w.degree() + 1 > 2 * m) return out;
    for (const auto& [mask, f] : w.terms())
        for (int i = 0; i < m; ++i) {
            if (mask & slot_bit(i)) continue;
            C g = partial(f, CoordinateId::fiber(i + 1));
            if (g.is_zero()) continue;
            out.add(mask | slot_bit(i), wedge_sign(slot_bit(i), mask) < 0 ? -g : g);
        }
    return out;
}

/// L_K = i_K d - (-1)^(q-1) d i_K for K of form degree q <= 1.
template <class C>
Form<C> lie_derivation(const VVForm<C>& K, const Form<C>& w) {
    const int q = K.degree();
    if (q > 1) throw Error(ErrorKind::UnsupportedDegree, "Lie derivation is implemented for degree 0 and 1 only");
    Form<C> out = insertion_derivation(K, exterior_derivative(w));
    if (w.degree() == 0 && q == 0) return out;
    Form<C> second = exterior_derivative(insertion_derivation(K, w));
    if (q == 0) out += second;
    else out -= second;
    return out;
}

/// (1/2)[K,K] on coordinate pairs, so the result is
/// [K,K](X,Y) = 2([KX,KY] - K[KX,Y] - K[X,KY] + K^2[X,Y]).
template <class C>
VVForm<C> fn_self_bracket(const VVForm<C>& K) {
    if (K.degree() != 1) throw Error(ErrorKind::UnsupportedDegree, "FN self-bracket needs a vector-valued 1-form");
    const int m = K.dim();
    VVForm<C> out(m, 2);
    if (2 * m < 2) return out;
    std::vector<VectorField<C>> KX;
    for (int s = 0; s < 2 * m; ++s) KX.push_back(K.value(slot_bit(s)));
    for (int a = 0; a < 2 * m; ++a)
        for (int b = a + 1; b < 2 * m; ++b) {
            const auto Xa = VectorField<C>::coordinate(m, a), Xb = VectorField<C>::coordinate(m, b);
            VectorField<C> v = lie_bracket(KX[a], KX[b]) - apply(K, lie_bracket(KX[a], Xb)) -
                               apply(K, lie_bracket(Xa, KX[b]));
            out.add(slot_bit(a) | slot_bit(b), v.scaled(C(2)));
        }
    return out;
}

/// The operator c1 d + c2 d_B with rational constants.
struct DOperator {
    Rational c1;
    Rational c2;
};

/// e1 d w + e2 d_B w for arbitrary function coefficients.
template <class C>
Form<C> apply_D(const C& e1, const C& e2, const Form<C>& w) {
    Form<C> out = exterior_derivative(w).scaled(e1);
    out += db(w).scaled(e2);
    return out;
}

template <class C>
Form<C> apply_D(const DOperator& D, const Form<C>& w) {
    return apply_D(C(D.c1), C(D.c2), w);
}

// ------------------------------------------------------------ semi-basic machinery

/// First multi-index carrying more than k fiber (dv) slots with a nonzero coefficient.
template <class C>
std::optional<Mask> semi_basic_defect(const Form<C>& w, int k) {
    const Mask fiber = fiber_block(w.dim());
    for (const auto& [mask, f] : w.terms())
        if (mask_size(mask & fiber) > k) return mask;
    return std::nullopt;
}

/// a_i v^i + c for mu = a_i dx^i, computed as xi contracted into mu~.
template <class C>
C make_f_mu(const BaseForm<C>& mu, const C& c) {
    if (mu.degree() != 1) throw Error(ErrorKind::UnsupportedDegree, "f_mu needs a base 1-form");
    if (!is_base_only(c)) throw Error(ErrorKind::NotBaseOnly, "the constant term of f_mu must be base-only");
    return interior_product(tautological_field<C>(mu.dim()), complete_lift(mu)).value() + c;
}

/// xi contracted into w~, whose d is w~ when w is closed.
template <class C>
Form<C> lifted_cohomology_witness(const BaseForm<C>& w) {
    if (!exterior_derivative(w.form()).is_zero()) throw Error(ErrorKind::NotClosed, "the base form is not closed");
    return interior_product(tautological_field<C>(w.dim()), complete_lift(w));
}

/// w o B^p / p! when that is a pullback.
template <class C>
std::optional<BaseForm<C>> extract_mu(const Form<C>& w) {
    const int p = w.degree();
    Form<C> image = circ_wedge(w, mixed_endomorphisms(mirror_map<C>(w.dim()), p, p));
    Rational factorial(1);
    for (int k = 2; k <= p; ++k) factorial *= k;
    image = image.scaled(C(1 / factorial));
    if (semi_basic_defect(image, 0)) return std::nullopt;
    for (const auto& [mask, f] : image.terms())
        if (!is_base_only(f)) return std::nullopt;
    return BaseForm<C>(image);
}

/// A closed candidate 1-form claimed to lie above mu.
template <class C>
struct AlphaMuForm {
    Form<C> omega;
    BaseForm<C> mu;
};

/// Theta(alpha_mu) = g_i dx^i with g_i = h_i - (d a_k / d x^i) v^k, where
/// omega = h_i dx^i + a_i dv^i and mu = a_i dx^i.
template <class C>
BaseForm<C> theta(const AlphaMuForm<C>& a) {
    const int m = a.omega.dim();
    if (a.omega.degree() != 1 || a.mu.degree() != 1) throw Error(ErrorKind::UnsupportedDegree, "Theta acts on 1-forms");
    if (!(circ_wedge(a.omega, {mirror_map<C>(m)}) == pullback(a.mu)))
        throw Error(ErrorKind::NotAboveMu, "omega o B differs from the pullback of mu");
    if (!exterior_derivative(a.omega).is_zero()) throw Error(ErrorKind::NotClosed, "alpha_mu is not closed");
    Form<C> g(m, 1);
    for (int i = 0; i < m; ++i) {
        C gi = a.omega.coefficient(slot_bit(i));
        for (int k = 0; k < m; ++k) {
            C dak = partial(a.mu.form().coefficient(slot_bit(k)), CoordinateId::base(i + 1));
            if (!dak.is_zero()) gi -= dak * C::coordinate(CoordinateId::fiber(k + 1));
        }
        g.add(slot_bit(i), gi);
    }
    return BaseForm<C>(g);
}

// ------------------------------------------------------------ exact solvers

/// Semi-basic alpha with d_B alpha = w, by the fiber homotopy at v = 0.
/// w must be semi-basic, d_B-closed, and polynomial in the fiber coordinates.
Form<ScalarExpr> db_poincare(const Form<ScalarExpr>& w);

/// (mu, c) with f = a_i v^i + c when every second fiber partial of f vanishes.
std::optional<std::pair<BaseForm<ScalarExpr>, ScalarExpr>> is_fiber_affine(const ScalarExpr& f, int m);

} // namespace tmcalc

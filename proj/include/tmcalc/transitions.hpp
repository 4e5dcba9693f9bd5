#pragma once

#include "tmcalc/forms.hpp"
#include "tmcalc/operators.hpp"

#include <string>
#include <variant>
#include <vector>

namespace tmcalc {

using Expr = ScalarExpr;
using Matrix = std::vector<std::vector<Expr>>;

/// A base chart change x' = F(x) with its exact inverse x = G(x'). Both
/// charts use the names x1..xm; the round trip is verified at construction.
class ChartTransition {
public:
    ChartTransition(std::vector<Expr> forward, std::vector<Expr> inverse);
    static ChartTransition identity(int m);

    int dim() const { return static_cast<int>(forward_.size()); }
    const std::vector<Expr>& forward() const { return forward_; }
    const std::vector<Expr>& inverse() const { return inverse_; }

    ChartTransition inverted() const { return ChartTransition(inverse_, forward_); }
    /// This change followed by `next`.
    ChartTransition then(const ChartTransition& next) const;

    /// dx'^a/dx^j in the source chart.
    Matrix jacobian() const;
    /// dx^i/dx'^a in the target chart.
    Matrix inverse_jacobian() const { return inverted().jacobian(); }
    /// All second derivatives of F vanish.
    bool is_affine() const;

    /// (x', v') = (F(x), v^j dF/dx^j) as 2m expressions in the source (x, v).
    std::vector<Expr> tangent_map() const;

private:
    std::vector<Expr> forward_, inverse_;
};

/// Composition outer(inner(z)) of maps given by 2m (or m) component lists.
std::vector<Expr> compose_maps(const std::vector<Expr>& outer, const std::vector<Expr>& inner, int m);

/// Pullback of a form along the map y -> map(y) (components by slot).
Form<Expr> pullback_along(const std::vector<Expr>& map, const Form<Expr>& w);

enum class Direction { Forward, Backward };

/// Express a TM object given in the source chart in the target chart
/// (Backward: the other way round).
Form<Expr> transform(const Form<Expr>& w, const ChartTransition& T, Direction d = Direction::Forward);
VectorField<Expr> transform(const VectorField<Expr>& X, const ChartTransition& T, Direction d = Direction::Forward);
VVForm<Expr> transform(const VVForm<Expr>& K, const ChartTransition& T, Direction d = Direction::Forward);

/// The same for base objects, along the base change only.
BaseForm<Expr> transform(const BaseForm<Expr>& a, const ChartTransition& T, Direction d = Direction::Forward);
BaseVectorField<Expr> transform(const BaseVectorField<Expr>& X, const ChartTransition& T,
                                Direction d = Direction::Forward);

/// v'^b dx'^a/dx^k d2x^j/dx'^a dx'^b + v^l dx^j/dx'^a d2x'^a/dx^k dx^l for all j, k
/// (row-major), in the source chart. Every entry vanishes for a valid change.
std::vector<Expr> consistency_terms(const ChartTransition& T);
bool check_consistency_identity(const ChartTransition& T);

enum class LiftKind { Pullback, Vertical, Complete, Xi, B };
/// "pullback", "vertical", "complete", "xi", "B"; UnknownLift otherwise.
LiftKind parse_lift_kind(const std::string& name);
std::string lift_kind_name(LiftKind kind);

using BaseObject = std::variant<std::monostate, BaseForm<Expr>, BaseVectorField<Expr>>;

/// Lift-then-transform equals transform-then-lift, exactly. The base object
/// must match the lift (a form for pullback, a field for vertical, either
/// for complete, nothing needed for xi and B).
bool check_naturality(LiftKind kind, const BaseObject& object, const ChartTransition& T);
bool check_naturality(const std::string& lift_name, const BaseObject& object, const ChartTransition& T);

/// Coefficient c with Phi^*(dx'^1..dx'^m dv'^1..dv'^m) = c dx^1..dv^m.
Expr volume_factor(const ChartTransition& T);
Expr jacobian_determinant(const ChartTransition& T);

/// The image of dv'^a in the source chart has dx terms only through second
/// derivatives of F; true when it has none for every a.
bool dv_rule_is_flat(const ChartTransition& T);

/// Tangent map of the composition equals composition of the tangent maps.
bool check_tangent_composition(const ChartTransition& S, const ChartTransition& T);

/// Theta commutes with the chart change (g'_p = dx^i/dx'^p g_i).
bool check_theta_globality(const AlphaMuForm<Expr>& a, const ChartTransition& T);

} // namespace tmcalc

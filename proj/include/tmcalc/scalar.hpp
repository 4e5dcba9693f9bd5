#pragma once

#include "tmcalc/generator.hpp"
#include "tmcalc/polynomial.hpp"
#include "tmcalc/rational.hpp"

#include <iosfwd>
#include <map>
#include <string>

namespace tmcalc {

/// Element of the differential field Q(x, v, f_{,I}): a reduced fraction of
/// polynomials whose denominator has leading coefficient 1. Canonical, so
/// `==` is mathematical equality.
class ScalarExpr {
public:
    ScalarExpr() = default;
    ScalarExpr(const Rational& c) : num_(c), den_(Rational(1)) {}  // NOLINT
    ScalarExpr(long c) : ScalarExpr(Rational(c)) {}                 // NOLINT

    static ScalarExpr coordinate(CoordinateId c);
    static ScalarExpr base(int i) { return coordinate(CoordinateId::base(i)); }
    static ScalarExpr fiber(int i) { return coordinate(CoordinateId::fiber(i)); }
    static ScalarExpr symbol(const FunctionSymbol& f, std::vector<CoordinateId> partials = {});
    static ScalarExpr generator(Generator g);
    static ScalarExpr constant(const Rational& c) { return ScalarExpr(c); }

    /// Canonical form of num/den; throws ZeroDenominator when den == 0.
    static ScalarExpr fraction(Polynomial num, Polynomial den);

    const Polynomial& numerator() const { return num_; }
    const Polynomial& denominator() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
    Rational constant_value() const { return num_.constant_value(); }
    bool is_polynomial() const { return den_.is_constant(); }

    /// No fiber coordinate and no full-dependence symbol anywhere.
    bool is_base_only() const;
    bool depends_on(CoordinateId c) const;

    ScalarExpr operator-() const;
    ScalarExpr& operator+=(const ScalarExpr& b) { return *this = *this + b; }
    ScalarExpr& operator-=(const ScalarExpr& b) { return *this = *this - b; }
    ScalarExpr& operator*=(const ScalarExpr& b) { return *this = *this * b; }
    ScalarExpr& operator/=(const ScalarExpr& b) { return *this = *this / b; }

    friend ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b);
    friend ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b);
    friend ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b);
    friend ScalarExpr operator/(const ScalarExpr& a, const ScalarExpr& b);
    ScalarExpr pow(unsigned e) const;

    friend bool operator==(const ScalarExpr& a, const ScalarExpr& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

private:
    // num/den already coprime; only fixes the denominator's unit.
    static ScalarExpr from_coprime(Polynomial num, Polynomial den);

    Polynomial num_;
    Polynomial den_{Rational(1)};
};

/// Equality decided by normalizing the cross difference num1*den2 - num2*den1.
bool equals(const ScalarExpr& a, const ScalarExpr& b);

/// Re-derive the canonical representative (idempotent).
ScalarExpr normalize(const ScalarExpr& e);

/// Exact partial derivative (quotient rule; f_{,I} -> f_{,I+c}).
ScalarExpr partial(const ScalarExpr& e, CoordinateId c);

/// Simultaneous substitution.
///
/// Function bindings are expressed in the current chart: a bound symbol f
/// (or bound partial f_{,I}) rewrites every f_{,J} with I ⊆ J to the
/// corresponding derivative of the binding. Coordinate bindings are then
/// applied to the result simultaneously.
struct Bindings {
    std::map<CoordinateId, ScalarExpr> coordinates;
    std::map<Generator, ScalarExpr> functions;  // keys: function generators (any partial order)

    Bindings& bind(CoordinateId c, ScalarExpr e) {
        coordinates[c] = std::move(e);
        return *this;
    }
    Bindings& bind(const FunctionSymbol& f, ScalarExpr e) {
        functions[Generator::function(f)] = std::move(e);
        return *this;
    }
    Bindings& bind(Generator partial, ScalarExpr e) {
        functions[partial] = std::move(e);
        return *this;
    }
};

ScalarExpr substitute(const ScalarExpr& e, const Bindings& bindings);

/// Exact value at a rational point; every generator of e must be bound.
/// Throws UnboundGenerator or PoleAtPoint.
Rational eval_numeric(const ScalarExpr& e, const std::map<Generator, Rational>& point);

/// Same, with a dense lookup for hot loops: value(g) for each generator g.
template <class Lookup>
Rational eval_numeric_with(const ScalarExpr& e, Lookup&& value);

/// Plain-text form accepted back by the DSL parser, e.g. "(x1*v2 - x2*v1)/(x1^2 + x2^2)".
std::string to_text(const Polynomial& p);
std::string to_text(const ScalarExpr& e);
std::ostream& operator<<(std::ostream& os, const ScalarExpr& e);
/// LaTeX form, e.g. "\\frac{x^{1} v^{2}-x^{2} v^{1}}{(x^{1})^{2}+(x^{2})^{2}}".
std::string to_latex(const Polynomial& p);
std::string to_latex(const ScalarExpr& e);

[[noreturn]] void throw_pole_at_point();

// ---------------------------------------------------------------- inline

template <class Lookup>
Rational eval_numeric_with(const ScalarExpr& e, Lookup&& value) {
    Rational den = e.denominator().evaluate<Rational>(value);
    if (sgn(den) == 0) throw_pole_at_point();
    return e.numerator().evaluate<Rational>(value) / den;
}

} // namespace tmcalc

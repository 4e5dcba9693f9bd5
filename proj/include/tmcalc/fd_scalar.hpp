#pragma once

#include "tmcalc/generator.hpp"
#include "tmcalc/rational.hpp"
#include "tmcalc/scalar.hpp"

#include <memory>
#include <vector>

namespace tmcalc {

/// Point of the chart domain of TM: values of x^1..x^m, v^1..v^m by slot.
struct ChartPoint {
    int m = 0;
    std::vector<Rational> values;

    Rational& operator[](CoordinateId c) { return values[static_cast<std::size_t>(c.slot(m))]; }
    const Rational& operator[](CoordinateId c) const { return values[static_cast<std::size_t>(c.slot(m))]; }
};

/// Coefficient type of the numeric cross-check. Arithmetic builds a lazy
/// expression graph whose leaves are exact ScalarExpr values; partial
/// derivatives are *not* taken symbolically but evaluated by central
/// differences (step kStep) at evaluation time, in exact rational arithmetic.
class FdScalar {
public:
    static const Rational& step();
    /// Denominators with magnitude below this are treated as poles.
    static const Rational& pole_margin();

    FdScalar() = default;
    FdScalar(const Rational& c);  // NOLINT
    FdScalar(long c) : FdScalar(Rational(c)) {}  // NOLINT
    explicit FdScalar(const ScalarExpr& e);

    static FdScalar coordinate(CoordinateId c) { return FdScalar(ScalarExpr::coordinate(c)); }

    /// Structural zero (the constant 0); a graph that evaluates to zero is not detected.
    bool is_zero() const;
    bool is_constant() const;
    /// No leaf depends on a fiber coordinate.
    bool is_base_only() const;

    FdScalar operator-() const;
    FdScalar& operator+=(const FdScalar& b) { return *this = *this + b; }
    FdScalar& operator-=(const FdScalar& b) { return *this = *this - b; }
    FdScalar& operator*=(const FdScalar& b) { return *this = *this * b; }
    FdScalar& operator/=(const FdScalar& b) { return *this = *this / b; }
    friend FdScalar operator+(const FdScalar& a, const FdScalar& b);
    friend FdScalar operator-(const FdScalar& a, const FdScalar& b);
    friend FdScalar operator*(const FdScalar& a, const FdScalar& b);
    friend FdScalar operator/(const FdScalar& a, const FdScalar& b);

    friend FdScalar partial(const FdScalar& e, CoordinateId c);

    /// Exact value of the finite-difference graph at p. Throws PoleAtPoint
    /// when any denominator met during evaluation is within pole_margin() of 0.
    Rational evaluate(const ChartPoint& p) const;

    struct Node;

private:
    explicit FdScalar(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;  // null means 0
};

} // namespace tmcalc

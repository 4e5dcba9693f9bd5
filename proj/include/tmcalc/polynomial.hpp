#pragma once

#include "tmcalc/generator.hpp"
#include "tmcalc/rational.hpp"

#include <cstdint>
#include <functional>
#include <set>
#include <utility>
#include <vector>

namespace tmcalc {

/// Power product of generators, stored as (id, exponent) pairs sorted by id.
class Monomial {
public:
    using Factor = std::pair<GenId, std::uint32_t>;

    Monomial() = default;
    static Monomial of(GenId g, std::uint32_t e = 1);

    const std::vector<Factor>& factors() const { return factors_; }
    bool is_one() const { return factors_.empty(); }
    std::uint32_t exponent(GenId g) const;
    std::uint32_t total_degree() const;

    Monomial without(GenId g) const;
    bool divides(const Monomial& other) const;
    /// other / this; requires divides(other).
    Monomial quotient_of(const Monomial& other) const;
    Monomial gcd(const Monomial& other) const;

    friend Monomial operator*(const Monomial& a, const Monomial& b);
    friend bool operator==(const Monomial&, const Monomial&) = default;

private:
    std::vector<Factor> factors_;
};

/// Lexicographic order with smaller generator ids more significant.
/// Returns <0, 0, >0 as a is smaller, equal, larger than b.
int lex_compare(const Monomial& a, const Monomial& b);

struct Term {
    Monomial monomial;
    Rational coeff;
};

/// Sparse multivariate polynomial over Q. Terms are kept in strictly
/// decreasing lex order with no zero coefficients, so structural equality
/// is mathematical equality.
class Polynomial {
public:
    Polynomial() = default;
    Polynomial(const Rational& c);  // NOLINT: constants convert implicitly
    Polynomial(long c) : Polynomial(Rational(c)) {}
    static Polynomial of(Generator g, std::uint32_t e = 1);
    static Polynomial from_terms(std::vector<Term> terms);  // any order, duplicates merged

    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].monomial.is_one()); }
    bool is_monomial() const { return terms_.size() == 1; }
    Rational constant_value() const;  // only meaningful when is_constant()
    const Term& leading() const { return terms_.front(); }

    std::set<GenId> generators() const;
    bool contains(GenId g) const;
    std::uint32_t degree_in(GenId g) const;

    Polynomial operator-() const;
    friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    Polynomial scaled(const Rational& c) const;
    Polynomial times(const Monomial& m, const Rational& c) const;

    /// Exact quotient; throws Error(InexactDivision) when b does not divide.
    Polynomial divided_by(const Polynomial& b) const;

    /// Formal partial derivative (chain rule into function generators).
    Polynomial derivative(CoordinateId c) const;

    /// Same polynomial scaled so the leading coefficient is 1 (0 stays 0).
    Polynomial monic() const;

    /// Evaluate with a caller-supplied generator valuation.
    template <class Value, class Lookup>
    Value evaluate(Lookup&& lookup) const;

    friend bool operator==(const Polynomial&, const Polynomial&);

private:
    std::vector<Term> terms_;
};

/// Monic greatest common divisor over Q (gcd(0, 0) = 0).
Polynomial gcd(const Polynomial& a, const Polynomial& b);

template <class Value, class Lookup>
Value Polynomial::evaluate(Lookup&& lookup) const {
    Value total(0);
    for (const auto& t : terms_) {
        Value v(t.coeff);
        for (const auto& [g, e] : t.monomial.factors()) {
            Value base = lookup(g);
            for (std::uint32_t k = 0; k < e; ++k) v *= base;
        }
        total += v;
    }
    return total;
}

} // namespace tmcalc

#include "tmcalc/scalar.hpp"

#include "tmcalc/error.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

namespace tmcalc {


[[noreturn]] void throw_pole_at_point() {
    throw Error(ErrorKind::PoleAtPoint, "denominator vanishes at the evaluation point");
}

ScalarExpr ScalarExpr::from_coprime(Polynomial num, Polynomial den) {
    if (den.is_zero()) throw Error(ErrorKind::ZeroDenominator, "denominator normalizes to 0");
    ScalarExpr e;
    if (num.is_zero()) return e;
    const Rational lc = den.leading().coeff;
    if (den.is_constant()) {
        e.num_ = num.scaled(Rational(1) / lc);
        return e;
    }
    if (lc != 1) {
        const Rational inv = Rational(1) / lc;
        num = num.scaled(inv);
        den = den.scaled(inv);
    }
    e.num_ = std::move(num);
    e.den_ = std::move(den);
    return e;
}

ScalarExpr ScalarExpr::coordinate(CoordinateId c) { return generator(Generator::coordinate(c)); }

ScalarExpr ScalarExpr::symbol(const FunctionSymbol& f, std::vector<CoordinateId> partials) {
    return generator(Generator::function(f, std::move(partials)));
}

ScalarExpr ScalarExpr::generator(Generator g) {
    ScalarExpr e;
    e.num_ = Polynomial::of(g);
    return e;
}

ScalarExpr ScalarExpr::fraction(Polynomial num, Polynomial den) {
    if (den.is_zero()) throw Error(ErrorKind::ZeroDenominator, "denominator normalizes to 0");
    ScalarExpr e;
    if (num.is_zero()) return e;
    if (den.is_constant()) {
        e.num_ = num.scaled(Rational(1) / den.constant_value());
        return e;
    }
    Polynomial g = gcd(num, den);
    if (!g.is_constant()) {
        num = num.divided_by(g);
        den = den.divided_by(g);
    }
    if (den.is_constant()) {
        e.num_ = num.scaled(Rational(1) / den.constant_value());
        return e;
    }
    const Rational lc = den.leading().coeff;
    if (lc != 1) {
        const Rational inv = Rational(1) / lc;
        num = num.scaled(inv);
        den = den.scaled(inv);
    }
    e.num_ = std::move(num);
    e.den_ = std::move(den);
    return e;
}

bool ScalarExpr::is_base_only() const {
    auto check = [](const Polynomial& p) {
        for (GenId id : p.generators()) {
            Generator g = Generator::from_id(id);
            if (g.is_coordinate() ? g.coordinate_id().is_fiber() : !g.symbol().base_only()) return false;
        }
        return true;
    };
    return check(num_) && check(den_);
}

bool ScalarExpr::depends_on(CoordinateId c) const {
    auto check = [&](const Polynomial& p) {
        for (GenId id : p.generators()) {
            Generator g = Generator::from_id(id);
            if (g.is_coordinate() ? g.coordinate_id() == c : (c.is_base() || !g.symbol().base_only()))
                return true;
        }
        return false;
    };
    return check(num_) || check(den_);
}

ScalarExpr ScalarExpr::operator-() const {
    ScalarExpr e = *this;
    e.num_ = -e.num_;
    return e;
}

ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.den_.is_constant() && b.den_.is_constant()) {
        ScalarExpr e;
        e.num_ = a.num_ + b.num_;
        return e;
    }
    if (a.den_ == b.den_) return ScalarExpr::fraction(a.num_ + b.num_, a.den_);
    return ScalarExpr::fraction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b) { return a + (-b); }

ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b) {
    if (a.is_zero() || b.is_zero()) return ScalarExpr();
    if (a.den_.is_constant() && b.den_.is_constant()) {
        ScalarExpr e;
        e.num_ = a.num_ * b.num_;
        return e;
    }
    Polynomial g1 = gcd(a.num_, b.den_);
    Polynomial g2 = gcd(b.num_, a.den_);
    return ScalarExpr::from_coprime(a.num_.divided_by(g1) * b.num_.divided_by(g2), a.den_.divided_by(g2) * b.den_.divided_by(g1));
}

ScalarExpr operator/(const ScalarExpr& a, const ScalarExpr& b) {
    if (b.is_zero()) throw Error(ErrorKind::ZeroDenominator, "division by zero expression");
    return a * ScalarExpr::from_coprime(b.den_, b.num_);
}

ScalarExpr ScalarExpr::pow(unsigned e) const {
    ScalarExpr out(1);
    for (unsigned k = 0; k < e; ++k) out *= *this;
    return out;
}

bool equals(const ScalarExpr& a, const ScalarExpr& b) {
    return (a.numerator() * b.denominator() - b.numerator() * a.denominator()).is_zero();
}

ScalarExpr normalize(const ScalarExpr& e) { return ScalarExpr::fraction(e.numerator(), e.denominator()); }

ScalarExpr partial(const ScalarExpr& e, CoordinateId c) {
    if (e.is_zero()) return e;
    Polynomial dn = e.numerator().derivative(c);
    if (e.denominator().is_constant()) return ScalarExpr::fraction(std::move(dn), Polynomial(Rational(1)));
    Polynomial dd = e.denominator().derivative(c);
    if (dd.is_zero()) return ScalarExpr::fraction(std::move(dn), e.denominator());
    return ScalarExpr::fraction(dn * e.denominator() - e.numerator() * dd, e.denominator() * e.denominator());
}

// ------------------------------------------------------------ substitution

namespace {

bool is_sub_multiset(const std::vector<CoordinateId>& small, const std::vector<CoordinateId>& big) {
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

std::vector<CoordinateId> multiset_difference(const std::vector<CoordinateId>& big,
                                              const std::vector<CoordinateId>& small) {
    std::vector<CoordinateId> out;
    std::set_difference(big.begin(), big.end(), small.begin(), small.end(), std::back_inserter(out));
    return out;
}

ScalarExpr partial_along(ScalarExpr e, const std::vector<CoordinateId>& coords) {
    for (const auto& c : coords) e = partial(e, c);
    return e;
}

ScalarExpr substitute_generators(const ScalarExpr& e, const std::map<GenId, ScalarExpr>& images) {
    auto lookup = [&](GenId g) {
        auto it = images.find(g);
        return it != images.end() ? it->second : ScalarExpr::generator(Generator::from_id(g));
    };
    ScalarExpr num = e.numerator().evaluate<ScalarExpr>(lookup);
    if (e.denominator().is_constant()) return num;
    return num / e.denominator().evaluate<ScalarExpr>(lookup);
}

} // namespace

ScalarExpr substitute(const ScalarExpr& e, const Bindings& bindings) {
    // Validate function bindings: dependence, and consistency between nested partials.
    for (const auto& [g, image] : bindings.functions) {
        if (g.is_coordinate())
            throw Error(ErrorKind::InvalidArgument, "coordinate bound as a function: " + g.name());
        if (g.symbol().base_only() && !image.is_base_only())
            throw Error(ErrorKind::InconsistentBinding,
                        "base-only symbol " + g.name() + " bound to a fiber-dependent expression");
        for (const auto& [h, other] : bindings.functions) {
            if (h == g || h.is_coordinate() || !(h.symbol() == g.symbol())) continue;
            if (is_sub_multiset(g.partials(), h.partials()) &&
                !(partial_along(image, multiset_difference(h.partials(), g.partials())) == other))
                throw Error(ErrorKind::InconsistentBinding, h.name() + " conflicts with the binding of " + g.name());
        }
    }

    ScalarExpr out = e;
    if (!bindings.functions.empty()) {
        std::set<GenId> gens = e.numerator().generators();
        for (GenId id : e.denominator().generators()) gens.insert(id);
        std::map<GenId, ScalarExpr> images;
        for (GenId id : gens) {
            Generator g = Generator::from_id(id);
            if (g.is_coordinate()) continue;
            const Generator* best = nullptr;
            const ScalarExpr* best_image = nullptr;
            for (const auto& [h, image] : bindings.functions) {
                if (!(h.symbol() == g.symbol()) || !is_sub_multiset(h.partials(), g.partials())) continue;
                if (!best || h.partials().size() > best->partials().size()) {
                    best = &h;
                    best_image = &image;
                }
            }
            if (best) images.emplace(id, partial_along(*best_image, multiset_difference(g.partials(), best->partials())));
        }
        if (!images.empty()) out = substitute_generators(out, images);
    }
    if (!bindings.coordinates.empty()) {
        std::map<GenId, ScalarExpr> images;
        for (const auto& [c, image] : bindings.coordinates) images.emplace(Generator::coordinate(c).id(), image);
        out = substitute_generators(out, images);
    }
    return out;
}

Rational eval_numeric(const ScalarExpr& e, const std::map<Generator, Rational>& point) {
    return eval_numeric_with(e, [&](GenId g) -> const Rational& {
        auto it = point.find(Generator::from_id(g));
        if (it == point.end())
            throw Error(ErrorKind::UnboundGenerator, Generator::from_id(g).name() + " has no value");
        return it->second;
    });
}

// -------------------------------------------------------------------- text

namespace {

bool print_before(const Monomial& a, const Monomial& b) {
    // Lex order on generators sorted by value order, larger monomials first.
    auto key = [](const Monomial& m) {
        std::vector<std::pair<Generator, std::uint32_t>> k;
        for (const auto& [g, e] : m.factors()) k.emplace_back(Generator::from_id(g), e);
        std::sort(k.begin(), k.end(), [](const auto& x, const auto& y) { return Generator::value_less(x.first, y.first); });
        return k;
    };
    auto ka = key(a), kb = key(b);
    for (std::size_t i = 0; i < ka.size() && i < kb.size(); ++i) {
        if (!(ka[i].first == kb[i].first)) return Generator::value_less(ka[i].first, kb[i].first);
        if (ka[i].second != kb[i].second) return ka[i].second > kb[i].second;
    }
    return ka.size() > kb.size();
}

std::string monomial_text(const Monomial& m) {
    std::vector<std::pair<Generator, std::uint32_t>> k;
    for (const auto& [g, e] : m.factors()) k.emplace_back(Generator::from_id(g), e);
    std::sort(k.begin(), k.end(), [](const auto& x, const auto& y) { return Generator::value_less(x.first, y.first); });
    std::string out;
    for (const auto& [g, e] : k) {
        if (!out.empty()) out += "*";
        out += g.name();
        if (e > 1) out += "^" + std::to_string(e);
    }
    return out;
}

} // namespace

std::string to_text(const Polynomial& p) {
    if (p.is_zero()) return "0";
    std::vector<const Term*> terms;
    for (const auto& t : p.terms()) terms.push_back(&t);
    std::stable_sort(terms.begin(), terms.end(), [](const Term* a, const Term* b) { return print_before(a->monomial, b->monomial); });
    std::string out;
    for (const Term* t : terms) {
        const bool negative = sgn(t->coeff) < 0;
        const Rational mag = abs(t->coeff);
        if (out.empty()) out += negative ? "-" : "";
        else out += negative ? " - " : " + ";
        if (t->monomial.is_one()) out += mag.get_str();
        else if (mag == 1) out += monomial_text(t->monomial);
        else out += mag.get_str() + "*" + monomial_text(t->monomial);
    }
    return out;
}

std::string to_text(const ScalarExpr& e) {
    if (e.is_polynomial()) return to_text(e.numerator());
    return "(" + to_text(e.numerator()) + ")/(" + to_text(e.denominator()) + ")";
}

std::ostream& operator<<(std::ostream& os, const ScalarExpr& e) { return os << to_text(e); }

namespace {

std::string generator_latex(Generator g) {
    if (g.is_coordinate()) {
        CoordinateId c = g.coordinate_id();
        return std::string(c.is_base() ? "x" : "v") + "^{" + std::to_string(c.index) + "}";
    }
    std::string out;
    for (const auto& c : g.partials()) out += "\\partial_{" + generator_latex(Generator::coordinate(c)) + "}";
    return out + g.symbol().name;
}

std::string monomial_latex(const Monomial& m) {
    std::vector<std::pair<Generator, std::uint32_t>> k;
    for (const auto& [g, e] : m.factors()) k.emplace_back(Generator::from_id(g), e);
    std::sort(k.begin(), k.end(), [](const auto& x, const auto& y) { return Generator::value_less(x.first, y.first); });
    std::string out;
    for (const auto& [g, e] : k) {
        if (!out.empty()) out += " ";
        if (e > 1) out += "(" + generator_latex(g) + ")^{" + std::to_string(e) + "}";
        else out += generator_latex(g);
    }
    return out;
}

std::string rational_latex(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return "\\frac{" + q.get_num().get_str() + "}{" + q.get_den().get_str() + "}";
}

} // namespace

std::string to_latex(const Polynomial& p) {
    if (p.is_zero()) return "0";
    std::vector<const Term*> terms;
    for (const auto& t : p.terms()) terms.push_back(&t);
    std::stable_sort(terms.begin(), terms.end(), [](const Term* a, const Term* b) { return print_before(a->monomial, b->monomial); });
    std::string out;
    for (const Term* t : terms) {
        const bool negative = sgn(t->coeff) < 0;
        const Rational mag = abs(t->coeff);
        if (out.empty()) out += negative ? "-" : "";
        else out += negative ? "-" : "+";
        if (t->monomial.is_one()) out += rational_latex(mag);
        else if (mag == 1) out += monomial_latex(t->monomial);
        else out += rational_latex(mag) + " " + monomial_latex(t->monomial);
    }
    return out;
}

std::string to_latex(const ScalarExpr& e) {
    if (e.is_polynomial()) return to_latex(e.numerator());
    return "\\frac{" + to_latex(e.numerator()) + "}{" + to_latex(e.denominator()) + "}";
}


Rational parse_rational(const std::string& text) {
    try {
        Rational q(text, 10);
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument&) {
        throw Error(ErrorKind::InvalidArgument, "not a rational literal: '" + text + "'");
    }
}

} // namespace tmcalc

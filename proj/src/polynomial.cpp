#include "tmcalc/polynomial.hpp"

#include "tmcalc/error.hpp"

#include <algorithm>
#include <optional>

namespace tmcalc {

// ---------------------------------------------------------------- Monomial

Monomial Monomial::of(GenId g, std::uint32_t e) {
    Monomial m;
    if (e > 0) m.factors_.emplace_back(g, e);
    return m;
}

std::uint32_t Monomial::exponent(GenId g) const {
    for (const auto& [id, e] : factors_)
        if (id == g) return e;
    return 0;
}

std::uint32_t Monomial::total_degree() const {
    std::uint32_t d = 0;
    for (const auto& f : factors_) d += f.second;
    return d;
}

Monomial Monomial::without(GenId g) const {
    Monomial m;
    for (const auto& f : factors_)
        if (f.first != g) m.factors_.push_back(f);
    return m;
}

bool Monomial::divides(const Monomial& other) const {
    auto it = other.factors_.begin();
    for (const auto& [g, e] : factors_) {
        while (it != other.factors_.end() && it->first < g) ++it;
        if (it == other.factors_.end() || it->first != g || it->second < e) return false;
    }
    return true;
}

Monomial Monomial::quotient_of(const Monomial& other) const {
    Monomial q;
    auto it = factors_.begin();
    for (const auto& [g, e] : other.factors_) {
        std::uint32_t sub = 0;
        if (it != factors_.end() && it->first == g) {
            sub = it->second;
            ++it;
        }
        if (e > sub) q.factors_.emplace_back(g, e - sub);
    }
    return q;
}

Monomial Monomial::gcd(const Monomial& other) const {
    Monomial g;
    auto a = factors_.begin();
    auto b = other.factors_.begin();
    while (a != factors_.end() && b != other.factors_.end()) {
        if (a->first < b->first) ++a;
        else if (b->first < a->first) ++b;
        else {
            g.factors_.emplace_back(a->first, std::min(a->second, b->second));
            ++a;
            ++b;
        }
    }
    return g;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial m;
    m.factors_.reserve(a.factors_.size() + b.factors_.size());
    auto i = a.factors_.begin();
    auto j = b.factors_.begin();
    while (i != a.factors_.end() || j != b.factors_.end()) {
        if (j == b.factors_.end() || (i != a.factors_.end() && i->first < j->first)) m.factors_.push_back(*i++);
        else if (i == a.factors_.end() || j->first < i->first) m.factors_.push_back(*j++);
        else {
            m.factors_.emplace_back(i->first, i->second + j->second);
            ++i;
            ++j;
        }
    }
    return m;
}

int lex_compare(const Monomial& a, const Monomial& b) {
    const auto& fa = a.factors();
    const auto& fb = b.factors();
    std::size_t i = 0;
    for (; i < fa.size() && i < fb.size(); ++i) {
        if (fa[i].first != fb[i].first) return fa[i].first < fb[i].first ? 1 : -1;
        if (fa[i].second != fb[i].second) return fa[i].second > fb[i].second ? 1 : -1;
    }
    if (i < fa.size()) return 1;
    if (i < fb.size()) return -1;
    return 0;
}

// -------------------------------------------------------------- Polynomial

namespace {

bool term_greater(const Term& a, const Term& b) { return lex_compare(a.monomial, b.monomial) > 0; }

// Merge two sorted term lists, b scaled by `sign`.
std::vector<Term> merge(const std::vector<Term>& a, const std::vector<Term>& b, int sign) {
    std::vector<Term> out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        int c = i == a.size() ? -1 : j == b.size() ? 1 : lex_compare(a[i].monomial, b[j].monomial);
        if (c > 0) out.push_back(a[i++]);
        else if (c < 0) {
            out.push_back(b[j++]);
            if (sign < 0) out.back().coeff = -out.back().coeff;
        } else {
            Rational s = sign < 0 ? Rational(a[i].coeff - b[j].coeff) : Rational(a[i].coeff + b[j].coeff);
            if (sgn(s) != 0) out.push_back({a[i].monomial, std::move(s)});
            ++i;
            ++j;
        }
    }
    return out;
}

} // namespace

Polynomial::Polynomial(const Rational& c) {
    if (sgn(c) != 0) terms_.push_back({Monomial(), c});
}

Polynomial Polynomial::of(Generator g, std::uint32_t e) {
    Polynomial p;
    p.terms_.push_back({Monomial::of(g.id(), e), Rational(1)});
    return p;
}

Polynomial Polynomial::from_terms(std::vector<Term> terms) {
    std::sort(terms.begin(), terms.end(), term_greater);
    Polynomial p;
    for (auto& t : terms) {
        if (!p.terms_.empty() && p.terms_.back().monomial == t.monomial) {
            p.terms_.back().coeff += t.coeff;
            if (sgn(p.terms_.back().coeff) == 0) p.terms_.pop_back();
        } else if (sgn(t.coeff) != 0) {
            p.terms_.push_back(std::move(t));
        }
    }
    return p;
}

Rational Polynomial::constant_value() const {
    if (terms_.empty()) return Rational(0);
    return terms_.back().monomial.is_one() ? terms_.back().coeff : Rational(0);
}

std::set<GenId> Polynomial::generators() const {
    std::set<GenId> out;
    for (const auto& t : terms_)
        for (const auto& f : t.monomial.factors()) out.insert(f.first);
    return out;
}

bool Polynomial::contains(GenId g) const {
    for (const auto& t : terms_)
        if (t.monomial.exponent(g) > 0) return true;
    return false;
}

std::uint32_t Polynomial::degree_in(GenId g) const {
    std::uint32_t d = 0;
    for (const auto& t : terms_) d = std::max(d, t.monomial.exponent(g));
    return d;
}

Polynomial Polynomial::operator-() const {
    Polynomial p = *this;
    for (auto& t : p.terms_) t.coeff = -t.coeff;
    return p;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    Polynomial p;
    p.terms_ = merge(a.terms_, b.terms_, 1);
    return p;
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    Polynomial p;
    p.terms_ = merge(a.terms_, b.terms_, -1);
    return p;
}

Polynomial Polynomial::times(const Monomial& m, const Rational& c) const {
    Polynomial p;
    if (sgn(c) == 0) return p;
    p.terms_.reserve(terms_.size());
    for (const auto& t : terms_) p.terms_.push_back({t.monomial * m, t.coeff * c});
    return p;  // multiplying by a monomial preserves lex order
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    if (a.terms_.size() == 1) return b.times(a.terms_[0].monomial, a.terms_[0].coeff);
    if (b.terms_.size() == 1) return a.times(b.terms_[0].monomial, b.terms_[0].coeff);
    std::vector<Term> prod;
    prod.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& s : a.terms_)
        for (const auto& t : b.terms_) prod.push_back({s.monomial * t.monomial, s.coeff * t.coeff});
    return Polynomial::from_terms(std::move(prod));
}

Polynomial Polynomial::scaled(const Rational& c) const { return times(Monomial(), c); }

Polynomial Polynomial::monic() const {
    if (is_zero() || leading().coeff == 1) return *this;
    return scaled(Rational(1) / leading().coeff);
}

Polynomial Polynomial::divided_by(const Polynomial& b) const {
    if (b.is_zero()) throw Error(ErrorKind::ZeroDenominator, "polynomial division by zero");
    if (b.is_constant()) return scaled(Rational(1) / b.constant_value());
    const Term& lead = b.leading();
    std::vector<Term> quotient;
    Polynomial rem = *this;
    while (!rem.is_zero()) {
        const Term& r = rem.leading();
        if (!lead.monomial.divides(r.monomial))
            throw Error(ErrorKind::InexactDivision, "polynomial division leaves a remainder");
        Term q{lead.monomial.quotient_of(r.monomial), r.coeff / lead.coeff};
        rem = rem - b.times(q.monomial, q.coeff);
        quotient.push_back(std::move(q));
    }
    Polynomial p;
    p.terms_ = std::move(quotient);  // produced in decreasing order
    return p;
}

Polynomial Polynomial::derivative(CoordinateId c) const {
    std::vector<Term> out;
    for (const auto& t : terms_) {
        const auto& fs = t.monomial.factors();
        for (std::size_t k = 0; k < fs.size(); ++k) {
            auto d = Generator::from_id(fs[k].first).derivative(c);
            if (!d.unit && !d.generator) continue;
            Monomial rest = t.monomial.without(fs[k].first) * Monomial::of(fs[k].first, fs[k].second - 1);
            if (d.generator) rest = rest * Monomial::of(d.generator->id());
            out.push_back({std::move(rest), t.coeff * fs[k].second});
        }
    }
    return from_terms(std::move(out));
}

bool operator==(const Polynomial& a, const Polynomial& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
        if (a.terms_[i].coeff != b.terms_[i].coeff || !(a.terms_[i].monomial == b.terms_[i].monomial))
            return false;
    return true;
}

// --------------------------------------------------------------------- gcd
//
// Recursive primitive-PRS gcd. A polynomial is viewed as univariate in its
// most significant generator with coefficients in the remaining ones.

namespace {

using Univariate = std::vector<Polynomial>;  // index = degree

Univariate to_univariate(const Polynomial& p, GenId var) {
    Univariate u(p.degree_in(var) + 1);
    std::vector<std::vector<Term>> buckets(u.size());
    for (const auto& t : p.terms()) buckets[t.monomial.exponent(var)].push_back({t.monomial.without(var), t.coeff});
    for (std::size_t k = 0; k < u.size(); ++k) u[k] = Polynomial::from_terms(std::move(buckets[k]));
    return u;
}

Polynomial from_univariate(const Univariate& u, GenId var) {
    Polynomial p;
    for (std::size_t k = 0; k < u.size(); ++k)
        if (!u[k].is_zero()) p = p + u[k].times(Monomial::of(var, static_cast<std::uint32_t>(k)), Rational(1));
    return p;
}

void trim(Univariate& u) {
    while (!u.empty() && u.back().is_zero()) u.pop_back();
}

Polynomial content(const Univariate& u) {
    Polynomial c;
    for (const auto& coeff : u) {
        if (coeff.is_zero()) continue;
        c = gcd(c, coeff);
        if (c.is_constant()) break;
    }
    return c;
}

Univariate primitive(const Univariate& u) {
    Polynomial c = content(u);
    Univariate out;
    out.reserve(u.size());
    for (const auto& coeff : u) out.push_back(coeff.divided_by(c));
    // fix the numeric unit so coefficients stay small
    Rational lc = out.back().leading().coeff;
    if (lc != 1)
        for (auto& coeff : out) coeff = coeff.scaled(Rational(1) / lc);
    return out;
}

// Pseudo-remainder of a by b (both trimmed, deg a >= deg b).
Univariate pseudo_remainder(Univariate a, const Univariate& b) {
    const Polynomial& lb = b.back();
    while (!a.empty() && a.size() >= b.size()) {
        const std::size_t shift = a.size() - b.size();
        const Polynomial la = a.back();
        for (auto& coeff : a) coeff = coeff * lb;
        for (std::size_t k = 0; k < b.size(); ++k) a[k + shift] = a[k + shift] - b[k] * la;
        trim(a);
    }
    return a;
}

Polynomial monomial_gcd(const Monomial& m, const Polynomial& p) {
    Monomial g = m;
    for (const auto& t : p.terms()) {
        g = g.gcd(t.monomial);
        if (g.is_one()) break;
    }
    return Polynomial(Rational(1)).times(g, Rational(1));
}

GenId most_significant(const Polynomial& p) {
    GenId best = ~GenId{0};
    for (const auto& t : p.terms())
        if (!t.monomial.is_one()) best = std::min(best, t.monomial.factors().front().first);
    return best;
}

Polynomial prs_gcd(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero()) return b.monic();
    if (b.is_zero()) return a.monic();
    if (a.is_constant() || b.is_constant()) return Polynomial(Rational(1));
    if (a == b) return a.monic();
    if (a.is_monomial()) return monomial_gcd(a.leading().monomial, b);
    if (b.is_monomial()) return monomial_gcd(b.leading().monomial, a);

    const GenId va = most_significant(a);
    const GenId vb = most_significant(b);
    const GenId var = std::min(va, vb);
    if (!a.contains(var)) return gcd(a, content(to_univariate(b, var)));
    if (!b.contains(var)) return gcd(content(to_univariate(a, var)), b);

    Univariate ua = to_univariate(a, var);
    Univariate ub = to_univariate(b, var);
    Polynomial c = gcd(content(ua), content(ub));
    ua = primitive(ua);
    ub = primitive(ub);
    if (ua.size() < ub.size()) std::swap(ua, ub);
    while (!ub.empty()) {
        if (ub.size() == 1) {  // degree 0 in var: primitive part is a unit
            ua = Univariate{Polynomial(Rational(1))};
            break;
        }
        Univariate r = pseudo_remainder(ua, ub);
        ua = std::move(ub);
        if (r.empty()) {
            ub.clear();
        } else {
            ub = primitive(r);
        }
    }
    return (from_univariate(ua, var) * c).monic();
}

// Heuristic gcd over Z: evaluate one generator at a large integer, recurse,
// rebuild the candidate from its balanced xi-adic digits and accept it only
// if it divides both inputs. Inputs must have integer coefficients.

mpz_class integer_content(const Polynomial& p) {
    mpz_class g = 0;
    for (const auto& t : p.terms()) {
        g = gcd(g, mpz_class(t.coeff.get_num()));
        if (g == 1) break;
    }
    return g;
}

mpz_class max_norm(const Polynomial& p) {
    mpz_class n = 0;
    for (const auto& t : p.terms()) n = std::max(n, mpz_class(abs(t.coeff.get_num())));
    return n;
}

Polynomial integral_primitive(const Polynomial& p) {
    mpz_class l = 1;
    for (const auto& t : p.terms()) l = lcm(l, mpz_class(t.coeff.get_den()));
    Polynomial q = p.scaled(Rational(l));
    return q.scaled(Rational(1) / Rational(integer_content(q)));
}

Polynomial evaluate_at(const Polynomial& p, GenId var, const mpz_class& xi) {
    std::vector<Term> out;
    out.reserve(p.terms().size());
    mpz_class power;
    for (const auto& t : p.terms()) {
        mpz_pow_ui(power.get_mpz_t(), xi.get_mpz_t(), t.monomial.exponent(var));
        out.push_back({t.monomial.without(var), t.coeff * power});
    }
    return Polynomial::from_terms(std::move(out));
}

Polynomial interpolate(const Polynomial& gamma, GenId var, const mpz_class& xi) {
    std::vector<Term> out;
    const mpz_class half = xi / 2;
    for (const auto& t : gamma.terms()) {
        mpz_class c = t.coeff.get_num();
        for (std::uint32_t k = 0; c != 0; ++k) {
            mpz_class e = c % xi;  // truncated; move into (-xi/2, xi/2]
            if (e > half) e -= xi;
            else if (e <= -half) e += xi;
            if (e != 0) out.push_back({t.monomial * Monomial::of(var, k), Rational(e)});
            c = (c - e) / xi;
        }
    }
    return Polynomial::from_terms(std::move(out));
}

bool divides(const Polynomial& g, const Polynomial& p) {
    try {
        (void)p.divided_by(g);
        return true;
    } catch (const Error&) {
        return false;
    }
}

Polynomial integer_gcd(const Polynomial& a, const Polynomial& b);

std::optional<Polynomial> heuristic_gcd(const Polynomial& a, const Polynomial& b) {
    const GenId var = std::max(*a.generators().rbegin(), *b.generators().rbegin());
    const std::uint32_t degree = std::max(a.degree_in(var), b.degree_in(var));
    mpz_class xi = 2 * std::min(max_norm(a), max_norm(b)) + 29;
    for (int attempt = 0; attempt < 6; ++attempt) {
        if (mpz_sizeinbase(xi.get_mpz_t(), 2) * std::max<std::uint32_t>(degree, 1) > 6000) break;
        Polynomial gamma = integer_gcd(evaluate_at(a, var, xi), evaluate_at(b, var, xi));
        Polynomial g = interpolate(gamma, var, xi);
        if (!g.is_zero()) {
            g = g.scaled(Rational(1) / Rational(integer_content(g)));
            if (divides(g, a) && divides(g, b)) return g;
        }
        xi = xi * 73794 / 27011;
    }
    return std::nullopt;
}

// gcd over Z[generators], sign unnormalized.
Polynomial integer_gcd(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const mpz_class ca = integer_content(a);
    const mpz_class cb = integer_content(b);
    const Rational c(gcd(ca, cb));
    if (a.is_constant() || b.is_constant()) return Polynomial(c);
    Polynomial pa = a.scaled(Rational(1) / Rational(ca));
    Polynomial pb = b.scaled(Rational(1) / Rational(cb));
    if (pa.is_monomial() || pb.is_monomial() || pa == pb) return prs_gcd(pa, pb).scaled(c);
    if (auto g = heuristic_gcd(pa, pb)) return g->scaled(c);
    return integral_primitive(prs_gcd(pa, pb)).scaled(c);
}

} // namespace

Polynomial gcd(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero()) return b.monic();
    if (b.is_zero()) return a.monic();
    if (a.is_constant() || b.is_constant()) return Polynomial(Rational(1));
    if (a == b) return a.monic();
    if (a.is_monomial()) return monomial_gcd(a.leading().monomial, b);
    if (b.is_monomial()) return monomial_gcd(b.leading().monomial, a);
    return integer_gcd(integral_primitive(a), integral_primitive(b)).monic();
}

} // namespace tmcalc

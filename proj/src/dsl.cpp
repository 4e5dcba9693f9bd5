#include "tmcalc/dsl.hpp"

#include "tmcalc/error.hpp"
#include "tmcalc/lifts.hpp"
#include "tmcalc/operators.hpp"
#include "tmcalc/transitions.hpp"

#include <cctype>
#include <regex>
#include <set>

namespace tmcalc {

namespace {

using F = Form<ScalarExpr>;
using V = VectorField<ScalarExpr>;
using K = VVForm<ScalarExpr>;

enum class Tok { Int, Ident, Op, Sep, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    int line = 1, col = 1;
};

const std::set<std::string> kReserved = {"m",    "fun",   "let", "d",  "db",     "pull", "clift",   "vlift",
                                         "ins",  "lie",   "xi",  "B",  "id",     "tensor", "D",     "bracket",
                                         "fn",   "base",  "full"};

bool continues_line(const std::vector<Token>& toks) {
    if (toks.empty()) return true;
    const Token& t = toks.back();
    if (t.kind == Tok::Sep) return true;
    return t.kind == Tok::Op && std::string("+-*/^,=:(").find(t.text) != std::string::npos;
}

std::vector<Token> lex(std::string_view s) {
    std::vector<Token> out;
    int line = 1, col = 1, depth = 0;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (s[i] == '\n') ++line, col = 1;
            else ++col;
        }
    };
    while (i < s.size()) {
        const char c = s[i];
        if (c == '#') {
            while (i < s.size() && s[i] != '\n') advance(1);
            continue;
        }
        if (c == '\n') {
            if (depth == 0 && !continues_line(out)) out.push_back({Tok::Sep, "\n", line, col});
            advance(1);
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        Token t{Tok::Op, "", line, col};
        std::size_t n = 1;
        if (std::isdigit(static_cast<unsigned char>(c))) {
            while (i + n < s.size() && std::isdigit(static_cast<unsigned char>(s[i + n]))) ++n;
            t.kind = Tok::Int;
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (i + n < s.size() && (std::isalnum(static_cast<unsigned char>(s[i + n])) || s[i + n] == '_')) ++n;
            t.kind = Tok::Ident;
        } else if (c == ';') {
            t.kind = Tok::Sep;
        } else if (std::string("+-*/^(),=:").find(c) == std::string::npos) {
            throw Error(ErrorKind::SyntaxError, "line " + std::to_string(line) + ", column " + std::to_string(col) +
                                                    ": unexpected character '" + std::string(1, c) + "'");
        }
        if (c == '(') ++depth;
        if (c == ')' && depth > 0) --depth;
        t.text = std::string(s.substr(i, n));
        out.push_back(t);
        advance(n);
    }
    out.push_back({Tok::End, "", line, col});
    return out;
}

std::string describe(const Token& t) {
    switch (t.kind) {
    case Tok::End: return "end of input";
    case Tok::Sep: return t.text == ";" ? "';'" : "line break";
    default: return "'" + t.text + "'";
    }
}

bool is_scalar(const Value& v) {
    const auto* f = std::get_if<F>(&v);
    return f && f->degree() == 0;
}

class Parser {
public:
    Parser(std::string_view text, std::optional<int> default_m) : toks_(lex(text)), default_m_(default_m) {}

    DslDocument run() {
        for (;;) {
            while (peek().kind == Tok::Sep) ++pos_;
            if (peek().kind == Tok::End) break;
            statement();
            if (peek().kind != Tok::End && peek().kind != Tok::Sep) fail(peek(), "expected ';' or line break");
        }
        if (doc_.m == 0 && default_m_) set_m(*default_m_, peek());
        return std::move(doc_);
    }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::optional<int> default_m_;
    DslDocument doc_;
    bool used_m_ = false;

    const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
    const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

    [[noreturn]] static void fail(const Token& t, const std::string& what, ErrorKind kind = ErrorKind::SyntaxError) {
        throw Error(kind, "line " + std::to_string(t.line) + ", column " + std::to_string(t.col) + ": " + what +
                              (kind == ErrorKind::SyntaxError ? ", found " + describe(t) : ""));
    }

    bool accept(const std::string& op) {
        if (peek().kind == Tok::Op && peek().text == op) return ++pos_, true;
        return false;
    }
    void expect(const std::string& op) {
        if (!accept(op)) fail(peek(), "expected '" + op + "'");
    }
    std::string identifier() {
        if (peek().kind != Tok::Ident) fail(peek(), "expected a name");
        return next().text;
    }

    void set_m(int m, const Token& at) {
        if (m < 1 || m > kMaxDim)
            fail(at, "dimension must lie in 1.." + std::to_string(kMaxDim), ErrorKind::IndexOutOfRange);
        doc_.m = m;
    }

    int dim(const Token& at) {
        if (doc_.m == 0) {
            if (!default_m_) fail(at, "dimension not set (start with m = <n>)");
            set_m(*default_m_, at);
        }
        used_m_ = true;
        return doc_.m;
    }

    void statement() {
        const Token& head = peek();
        if (head.kind == Tok::Ident && head.text == "m" && peek(1).text == "=") {
            pos_ += 2;
            const Token& n = peek();
            if (n.kind != Tok::Int) fail(n, "expected the dimension");
            if (used_m_ || doc_.m != 0) fail(head, "the dimension may be set once, before any expression");
            set_m(std::stoi(next().text), n);
            return;
        }
        if (head.kind == Tok::Ident && head.text == "fun") {
            ++pos_;
            std::vector<Token> names;
            do {
                names.push_back(peek());
                check_new_name(identifier(), names.back());
            } while (accept(","));
            expect(":");
            const Token& dep = peek();
            const std::string kind = identifier();
            if (kind != "base" && kind != "full") fail(dep, "expected 'base' or 'full'");
            for (const auto& n : names)
                doc_.functions[n.text] = FunctionSymbol{n.text, kind == "base" ? Dependence::BaseOnly : Dependence::Full};
            return;
        }
        if (head.kind == Tok::Ident && head.text == "let") {
            ++pos_;
            const Token& at = peek();
            const std::string name = identifier();
            check_new_name(name, at);
            expect("=");
            doc_.bindings[name] = expression();
            return;
        }
        doc_.result = expression();
    }

    void check_new_name(const std::string& name, const Token& at) {
        static const std::regex coord("(d|p)?(x|v)[0-9]+");
        if (kReserved.count(name) || std::regex_match(name, coord)) fail(at, "'" + name + "' is reserved");
        if (doc_.functions.count(name) || doc_.bindings.count(name)) fail(at, "'" + name + "' is already declared");
    }

    // expression := term (('+' | '-') term)*
    Value expression() {
        Value acc = term();
        for (;;) {
            const Token& at = peek();
            if (accept("+")) acc = add(acc, term(), false, at);
            else if (accept("-")) acc = add(acc, term(), true, at);
            else return acc;
        }
    }

    // term := unary (('*' | '/') unary)*
    Value term() {
        Value acc = unary();
        for (;;) {
            const Token& at = peek();
            if (accept("*")) acc = multiply(acc, unary(), at);
            else if (accept("/")) acc = divide(acc, unary(), at);
            else return acc;
        }
    }

    // unary := '-' unary | power
    Value unary() {
        if (accept("-")) return std::visit([](const auto& x) -> Value { return -x; }, unary());
        return power();
    }

    // power := primary ('^' (integer | '-' integer | primary))*
    Value power() {
        Value acc = primary();
        for (;;) {
            const Token& at = peek();
            if (!accept("^")) return acc;
            const bool negative = peek().kind == Tok::Op && peek().text == "-" && peek(1).kind == Tok::Int;
            if (is_scalar(acc) && (peek().kind == Tok::Int || negative)) {
                if (negative) ++pos_;
                const unsigned long e = std::stoul(next().text);
                const F& base = std::get<F>(acc);
                ScalarExpr p = base.value().pow(static_cast<unsigned>(e));
                if (negative) p = ScalarExpr(1) / p;
                acc = F::scalar(base.dim(), p);
                continue;
            }
            acc = wedge_values(acc, primary(), at);
        }
    }

    Value primary() {
        const Token& t = peek();
        if (t.kind == Tok::Int) {
            ++pos_;
            return F::scalar(dim(t), ScalarExpr(Rational(t.text)));
        }
        if (accept("(")) {
            Value v = expression();
            expect(")");
            return v;
        }
        if (t.kind != Tok::Ident) fail(t, "expected an expression");
        ++pos_;
        const std::string& name = t.text;
        if (auto v = coordinate_like(name, t)) return *v;
        if (name == "xi") return tautological_field<ScalarExpr>(dim(t));
        if (name == "B") return mirror_map<ScalarExpr>(dim(t));
        if (name == "id") return identity_endomorphism<ScalarExpr>(dim(t));
        if (auto it = doc_.bindings.find(name); it != doc_.bindings.end()) return it->second;
        if (auto it = doc_.functions.find(name); it != doc_.functions.end())
            return F::scalar(dim(t), ScalarExpr::symbol(it->second));
        if (kReserved.count(name) && name != "m" && name != "fun" && name != "let" && name != "base" && name != "full")
            return call(name, t);
        if (name.size() == 1 && std::islower(static_cast<unsigned char>(name[0]))) {
            doc_.functions[name] = FunctionSymbol{name, Dependence::Full};
            return F::scalar(dim(t), ScalarExpr::symbol(doc_.functions[name]));
        }
        fail(t, "'" + name + "' is not declared", ErrorKind::UndeclaredName);
    }

    std::optional<Value> coordinate_like(const std::string& name, const Token& t) {
        static const std::regex coord("(d|p)?(x|v)([0-9]+)");
        std::smatch match;
        if (!std::regex_match(name, match, coord)) return std::nullopt;
        const int m = dim(t);
        const std::string digits = match[3].str();
        const int i = digits.size() > 3 ? 0 : std::stoi(digits);
        if (i < 1 || i > m)
            fail(t, "index of '" + name + "' outside 1.." + std::to_string(m), ErrorKind::IndexOutOfRange);
        const bool fiber = match[2] == "v";
        const int slot = fiber ? m + i - 1 : i - 1;
        if (match[1] == "d") return F::monomial(m, slot_bit(slot));
        if (match[1] == "p") return V::coordinate(m, slot);
        return F::scalar(m, fiber ? ScalarExpr::fiber(i) : ScalarExpr::base(i));
    }

    std::vector<Value> arguments(const Token& at, std::size_t count) {
        expect("(");
        std::vector<Value> args{expression()};
        while (accept(",")) args.push_back(expression());
        expect(")");
        if (args.size() != count)
            fail(at, "'" + at.text + "' takes " + std::to_string(count) + " argument" + (count == 1 ? "" : "s"),
                 ErrorKind::ArityMismatch);
        return args;
    }

    Value call(const std::string& name, const Token& at) {
        if (name == "D") return formal_partial(at);
        const std::size_t arity = name == "ins" || name == "lie" || name == "tensor" || name == "bracket" ? 2 : 1;
        const auto args = arguments(at, arity);
        const Value& a = args[0];
        if (name == "d") return exterior_derivative(as_form(a, at));
        if (name == "db") return db(as_form(a, at));
        if (name == "pull") return pullback(BaseForm<ScalarExpr>(as_form(a, at)));
        if (name == "vlift") return vertical_lift(as_base_field(a, at));
        if (name == "fn") return fn_self_bracket(as_vvform(a, at));
        if (name == "clift") {
            if (const auto* f = std::get_if<F>(&a)) {
                if (f->degree() == 0) return F::scalar(f->dim(), complete_lift_function(f->value(), f->dim()));
                return complete_lift(BaseForm<ScalarExpr>(*f));
            }
            return complete_lift(as_base_field(a, at));
        }
        const Value& b = args[1];
        if (name == "bracket") return lie_bracket(as_field(a, at), as_field(b, at));
        if (name == "tensor") {
            const F& w = as_form(a, at);
            const V& X = as_field(b, at);
            K out(w.dim(), w.degree());
            for (const auto& [mask, c] : w.terms()) out.add(mask, X.scaled(c));
            return out;
        }
        if (name == "ins") {
            if (const auto* K1 = std::get_if<K>(&a)) return insertion_derivation(*K1, as_form(b, at));
            return interior_product(as_field(a, at), as_form(b, at));
        }
        // lie
        if (const auto* K1 = std::get_if<K>(&a)) return lie_derivation(*K1, as_form(b, at));
        const V& X = as_field(a, at);
        if (const auto* K2 = std::get_if<K>(&b)) return lie_derivative_vvform(X, *K2);
        if (const auto* Y = std::get_if<V>(&b)) return lie_bracket(X, *Y);
        return lie_derivative_form(X, as_form(b, at));
    }

    Value formal_partial(const Token& at) {
        expect("(");
        ScalarExpr e = as_form(expression(), at).value();
        const int m = dim(at);
        if (!accept(",")) fail(peek(), "expected ',' and a coordinate");
        do {
            const Token& c = peek();
            const Value v = coordinate_like(identifier(), c).value_or(Value{});
            const auto* f = std::get_if<F>(&v);
            if (!f || f->degree() != 0 || !f->value().is_polynomial() || f->value().numerator().generators().size() != 1)
                fail(c, "expected a coordinate x1..x" + std::to_string(m) + " or v1..v" + std::to_string(m));
            const GenId g = *f->value().numerator().generators().begin();
            e = partial(e, Generator::from_id(g).coordinate_id());
        } while (accept(","));
        expect(")");
        return F::scalar(m, e);
    }

    static const F& as_form(const Value& v, const Token& at) {
        if (const auto* f = std::get_if<F>(&v)) return *f;
        fail(at, "expected a form, got a " + value_kind(v), ErrorKind::TypeMismatch);
    }
    static const V& as_field(const Value& v, const Token& at) {
        if (const auto* X = std::get_if<V>(&v)) return *X;
        fail(at, "expected a vector field, got a " + value_kind(v), ErrorKind::TypeMismatch);
    }
    static const K& as_vvform(const Value& v, const Token& at) {
        if (const auto* k = std::get_if<K>(&v)) return *k;
        fail(at, "expected a vector-valued form, got a " + value_kind(v), ErrorKind::TypeMismatch);
    }
    static BaseVectorField<ScalarExpr> as_base_field(const Value& v, const Token& at) {
        const V& X = as_field(v, at);
        const int m = X.dim();
        for (int s = m; s < 2 * m; ++s)
            if (!X[s].is_zero()) fail(at, "base vector field with a pv component", ErrorKind::NotBaseOnly);
        return BaseVectorField<ScalarExpr>(m, std::vector<ScalarExpr>(X.components().begin(), X.components().begin() + m));
    }

    static Value add(const Value& a, const Value& b, bool subtract, const Token& at) {
        if (a.index() != b.index())
            fail(at, "cannot add a " + value_kind(a) + " and a " + value_kind(b), ErrorKind::TypeMismatch);
        if (const auto* f = std::get_if<F>(&a); f && f->degree() != std::get<F>(b).degree())
            fail(at, "cannot add forms of degree " + std::to_string(f->degree()) + " and " +
                         std::to_string(std::get<F>(b).degree()), ErrorKind::TypeMismatch);
        if (const auto* k = std::get_if<K>(&a); k && k->degree() != std::get<K>(b).degree())
            fail(at, "cannot add vector-valued forms of different degrees", ErrorKind::TypeMismatch);
        return std::visit(
            [&](const auto& x) -> Value {
                using T = std::decay_t<decltype(x)>;
                return subtract ? Value(x - std::get<T>(b)) : Value(x + std::get<T>(b));
            },
            a);
    }

    static Value scale(const Value& v, const ScalarExpr& c) {
        return std::visit([&](const auto& x) -> Value { return x.scaled(c); }, v);
    }

    static Value multiply(const Value& a, const Value& b, const Token& at) {
        if (is_scalar(a)) return scale(b, std::get<F>(a).value());
        if (is_scalar(b)) return scale(a, std::get<F>(b).value());
        fail(at, "'*' needs a scalar factor (use '^' for the wedge product)", ErrorKind::TypeMismatch);
    }

    static Value divide(const Value& a, const Value& b, const Token& at) {
        if (!is_scalar(b)) fail(at, "can only divide by a scalar", ErrorKind::TypeMismatch);
        return scale(a, ScalarExpr(1) / std::get<F>(b).value());
    }

    static Value wedge_values(const Value& a, const Value& b, const Token& at) {
        return wedge(as_form(a, at), as_form(b, at));
    }
};

} // namespace

DslDocument parse(std::string_view text, std::optional<int> default_m) { return Parser(text, default_m).run(); }

Value evaluate(std::string_view text, std::optional<int> default_m) {
    DslDocument doc = parse(text, default_m);
    if (!doc.result) throw Error(ErrorKind::SyntaxError, "no expression to evaluate");
    return std::move(*doc.result);
}

Form<ScalarExpr> parse_form(std::string_view text, int m) {
    Value v = evaluate(text, m);
    if (auto* f = std::get_if<F>(&v)) return std::move(*f);
    throw Error(ErrorKind::TypeMismatch, "expected a form, got a " + value_kind(v));
}

VectorField<ScalarExpr> parse_field(std::string_view text, int m) {
    Value v = evaluate(text, m);
    if (auto* X = std::get_if<V>(&v)) return std::move(*X);
    throw Error(ErrorKind::TypeMismatch, "expected a vector field, got a " + value_kind(v));
}

BaseForm<ScalarExpr> as_base_form(const Value& v) {
    if (const auto* f = std::get_if<F>(&v)) return BaseForm<ScalarExpr>(*f);
    throw Error(ErrorKind::TypeMismatch, "expected a base form, got a " + value_kind(v));
}

BaseVectorField<ScalarExpr> as_base_field(const Value& v) {
    const auto* X = std::get_if<V>(&v);
    if (!X) throw Error(ErrorKind::TypeMismatch, "expected a base vector field, got a " + value_kind(v));
    const int m = X->dim();
    for (int s = m; s < 2 * m; ++s)
        if (!(*X)[s].is_zero()) throw Error(ErrorKind::NotBaseOnly, "base vector field with a pv component");
    return BaseVectorField<ScalarExpr>(m, std::vector<ScalarExpr>(X->components().begin(), X->components().begin() + m));
}

static int dim_of(const Value& v) {
    return std::visit([](const auto& x) { return x.dim(); }, v);
}

Value apply_lift(const std::string& kind_name, const std::optional<Value>& input, std::optional<int> m) {
    const LiftKind kind = parse_lift_kind(kind_name);
    const auto need_input = [&]() -> const Value& {
        if (!input) throw Error(ErrorKind::InvalidArgument, "the " + kind_name + " lift needs a base object");
        return *input;
    };
    const auto need_m = [&] {
        if (input) return dim_of(*input);
        if (!m) throw Error(ErrorKind::InvalidArgument, "--m is required");
        return *m;
    };
    switch (kind) {
    case LiftKind::Pullback: return pullback(as_base_form(need_input()));
    case LiftKind::Vertical: return vertical_lift(as_base_field(need_input()));
    case LiftKind::Complete: {
        const Value& v = need_input();
        if (std::holds_alternative<VectorField<ScalarExpr>>(v)) return complete_lift(as_base_field(v));
        const auto& f = std::get<Form<ScalarExpr>>(v);
        if (f.degree() == 0) {
            as_base_form(v);
            return Form<ScalarExpr>::scalar(f.dim(), complete_lift_function(f.value(), f.dim()));
        }
        return complete_lift(as_base_form(v));
    }
    case LiftKind::Xi: return tautological_field<ScalarExpr>(need_m());
    case LiftKind::B: return mirror_map<ScalarExpr>(need_m());
    }
    return {};
}

static const Form<ScalarExpr>& as_value_form(const Value& v) {
    if (const auto* f = std::get_if<Form<ScalarExpr>>(&v)) return *f;
    throw Error(ErrorKind::TypeMismatch, "expected a form, got a " + value_kind(v));
}

Value apply_lie(const Value& along, const Value& target) {
    if (const auto* K = std::get_if<VVForm<ScalarExpr>>(&along)) return lie_derivation(*K, as_value_form(target));
    const auto* X = std::get_if<VectorField<ScalarExpr>>(&along);
    if (!X) throw Error(ErrorKind::TypeMismatch, "lie needs a vector field or a vector-valued form");
    if (const auto* K = std::get_if<VVForm<ScalarExpr>>(&target)) return lie_derivative_vvform(*X, *K);
    if (const auto* Y = std::get_if<VectorField<ScalarExpr>>(&target)) return lie_bracket(*X, *Y);
    return lie_derivative_form(*X, as_value_form(target));
}

Value apply_d(const Value& v) { return exterior_derivative(as_value_form(v)); }

Value apply_db(const Value& v) { return db(as_value_form(v)); }

std::string render(const Value& v, Format format) {
    return std::visit([&](const auto& x) { return render(x, format); }, v);
}

std::string value_kind(const Value& v) {
    if (is_scalar(v)) return "scalar";
    switch (v.index()) {
    case 0: return "form";
    case 1: return "field";
    default: return "vvform";
    }
}

} // namespace tmcalc

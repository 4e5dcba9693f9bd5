#include "tmcalc/fd_scalar.hpp"

#include "tmcalc/error.hpp"

#include <unordered_map>

namespace tmcalc {

struct FdScalar::Node {
    enum class Op { Constant, Leaf, Add, Sub, Mul, Div, Neg, Partial } op;
    Rational constant;
    ScalarExpr leaf;
    std::shared_ptr<const Node> a, b;
    CoordinateId direction;
};

namespace {

using NodePtr = std::shared_ptr<const FdScalar::Node>;
using Op = FdScalar::Node::Op;

NodePtr make(Op op, NodePtr a, NodePtr b = nullptr, CoordinateId direction = {}) {
    auto n = std::make_shared<FdScalar::Node>();
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    n->direction = direction;
    return n;
}

NodePtr constant_node(const Rational& c) {
    if (sgn(c) == 0) return nullptr;
    auto n = std::make_shared<FdScalar::Node>();
    n->op = Op::Constant;
    n->constant = c;
    return n;
}

bool is_constant_node(const NodePtr& n) { return !n || n->op == Op::Constant; }
Rational constant_of(const NodePtr& n) { return n ? n->constant : Rational(0); }

void check_margin(const Rational& den) {
    if (abs(den) < FdScalar::pole_margin()) throw_pole_at_point();
}

class Evaluator {
public:
    explicit Evaluator(const ChartPoint& p) : point_(p) {}

    Rational operator()(const NodePtr& n) {
        if (!n) return Rational(0);
        if (auto it = cache_.find(n.get()); it != cache_.end()) return it->second;
        Rational r = compute(*n);
        cache_.emplace(n.get(), r);
        return r;
    }

private:
    Rational compute(const FdScalar::Node& n) {
        switch (n.op) {
        case Op::Constant: return n.constant;
        case Op::Leaf: {
            auto lookup = [this](GenId g) -> Rational {
                Generator gen = Generator::from_id(g);
                if (!gen.is_coordinate())
                    throw Error(ErrorKind::UnboundGenerator, "numeric mode cannot evaluate " + gen.name());
                CoordinateId c = gen.coordinate_id();
                if (c.index > point_.m) throw Error(ErrorKind::UnboundGenerator, c.name() + " outside the chart");
                return point_[c];
            };
            Rational den = n.leaf.denominator().evaluate<Rational>(lookup);
            check_margin(den);
            return n.leaf.numerator().evaluate<Rational>(lookup) / den;
        }
        case Op::Add: return (*this)(n.a) + (*this)(n.b);
        case Op::Sub: return (*this)(n.a) - (*this)(n.b);
        case Op::Mul: return (*this)(n.a) * (*this)(n.b);
        case Op::Neg: return -(*this)(n.a);
        case Op::Div: {
            Rational den = (*this)(n.b);
            check_margin(den);
            return (*this)(n.a) / den;
        }
        case Op::Partial: {
            ChartPoint plus = point_, minus = point_;
            plus[n.direction] += FdScalar::step();
            minus[n.direction] -= FdScalar::step();
            Rational up = Evaluator(plus)(n.a);
            Rational down = Evaluator(minus)(n.a);
            return (up - down) / (2 * FdScalar::step());
        }
        }
        return Rational(0);
    }

    const ChartPoint& point_;
    std::unordered_map<const FdScalar::Node*, Rational> cache_;
};

bool base_only(const NodePtr& n) {
    if (!n) return true;
    switch (n->op) {
    case Op::Constant: return true;
    case Op::Leaf: return n->leaf.is_base_only();
    default: return base_only(n->a) && base_only(n->b);
    }
}

} // namespace

const Rational& FdScalar::step() {
    static const Rational h(1, 10000);
    return h;
}

const Rational& FdScalar::pole_margin() {
    static const Rational eps(1, 100);
    return eps;
}

FdScalar::FdScalar(const Rational& c) : node_(constant_node(c)) {}

FdScalar::FdScalar(const ScalarExpr& e) {
    if (e.is_constant()) {
        node_ = constant_node(e.constant_value());
        return;
    }
    auto n = std::make_shared<Node>();
    n->op = Node::Op::Leaf;
    n->leaf = e;
    node_ = std::move(n);
}

bool FdScalar::is_zero() const { return !node_; }
bool FdScalar::is_constant() const { return is_constant_node(node_); }
bool FdScalar::is_base_only() const { return base_only(node_); }

FdScalar FdScalar::operator-() const {
    if (is_constant()) return FdScalar(-constant_of(node_));
    return FdScalar(make(Op::Neg, node_));
}

FdScalar operator+(const FdScalar& a, const FdScalar& b) {
    if (a.is_constant() && b.is_constant()) return FdScalar(constant_of(a.node_) + constant_of(b.node_));
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    return FdScalar(make(Op::Add, a.node_, b.node_));
}

FdScalar operator-(const FdScalar& a, const FdScalar& b) {
    if (a.is_constant() && b.is_constant()) return FdScalar(constant_of(a.node_) - constant_of(b.node_));
    if (b.is_zero()) return a;
    if (a.is_zero()) return -b;
    return FdScalar(make(Op::Sub, a.node_, b.node_));
}

FdScalar operator*(const FdScalar& a, const FdScalar& b) {
    if (a.is_constant() && b.is_constant()) return FdScalar(constant_of(a.node_) * constant_of(b.node_));
    if (a.is_zero() || b.is_zero()) return FdScalar();
    if (a.is_constant() && constant_of(a.node_) == 1) return b;
    if (b.is_constant() && constant_of(b.node_) == 1) return a;
    return FdScalar(make(Op::Mul, a.node_, b.node_));
}

FdScalar operator/(const FdScalar& a, const FdScalar& b) {
    if (b.is_zero()) throw Error(ErrorKind::ZeroDenominator, "division by the zero constant");
    if (a.is_constant() && b.is_constant()) return FdScalar(constant_of(a.node_) / constant_of(b.node_));
    if (a.is_zero()) return FdScalar();
    if (b.is_constant() && constant_of(b.node_) == 1) return a;
    return FdScalar(make(Op::Div, a.node_, b.node_));
}

FdScalar partial(const FdScalar& e, CoordinateId c) {
    if (e.is_constant()) return FdScalar();
    return FdScalar(make(Op::Partial, e.node_, nullptr, c));
}

Rational FdScalar::evaluate(const ChartPoint& p) const { return Evaluator(p)(node_); }

} // namespace tmcalc

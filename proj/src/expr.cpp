#include "weilkit/expr.hpp"

#include <functional>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace weilkit {

const char *to_string(Op op) {
    switch (op) {
    case Op::Const: return "const";
    case Op::Var: return "var";
    case Op::Add: return "add";
    case Op::Sub: return "sub";
    case Op::Mul: return "mul";
    case Op::Div: return "div";
    case Op::Pow: return "pow";
    case Op::Neg: return "neg";
    case Op::Exp: return "exp";
    case Op::Log: return "log";
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Sqrt: return "sqrt";
    }
    return "?";
}

bool is_transcendental(Op op) {
    return op == Op::Exp || op == Op::Log || op == Op::Sin || op == Op::Cos || op == Op::Sqrt;
}

Expr Expr::make(ExprNode n) { return Expr(std::make_shared<const ExprNode>(std::move(n))); }

Expr Expr::constant(Rational q) {
    ExprNode n;
    n.op = Op::Const;
    q.canonicalize();
    n.value = std::move(q);
    return make(std::move(n));
}

Expr Expr::variable(std::size_t index) {
    ExprNode n;
    n.op = Op::Var;
    n.var = index;
    return make(std::move(n));
}

Op Expr::op() const {
    if (!node_)
        throw std::logic_error("empty expression");
    return node_->op;
}

bool Expr::is_constant(const Rational &q) const { return is_constant() && node_->value == q; }

namespace {

Expr binary(Op op, const Expr &a, const Expr &b, const std::function<Expr(ExprNode)> &make) {
    ExprNode n;
    n.op = op;
    n.a = a;
    n.b = b;
    return make(std::move(n));
}

} // namespace

Expr operator+(const Expr &a, const Expr &b) {
    if (a.is_constant() && b.is_constant())
        return Expr::constant(a.node().value + b.node().value);
    if (a.is_constant(0))
        return b;
    if (b.is_constant(0))
        return a;
    return binary(Op::Add, a, b, Expr::make);
}

Expr operator-(const Expr &a, const Expr &b) {
    if (a.is_constant() && b.is_constant())
        return Expr::constant(a.node().value - b.node().value);
    if (b.is_constant(0))
        return a;
    if (a.is_constant(0))
        return -b;
    return binary(Op::Sub, a, b, Expr::make);
}

Expr operator*(const Expr &a, const Expr &b) {
    if (a.is_constant() && b.is_constant())
        return Expr::constant(a.node().value * b.node().value);
    if (a.is_constant(0) || b.is_constant(0))
        return Expr::constant(0);
    if (a.is_constant(1))
        return b;
    if (b.is_constant(1))
        return a;
    return binary(Op::Mul, a, b, Expr::make);
}

Expr operator/(const Expr &a, const Expr &b) {
    if (a.is_constant() && b.is_constant() && b.node().value != 0)
        return Expr::constant(a.node().value / b.node().value);
    if (b.is_constant(1))
        return a;
    return binary(Op::Div, a, b, Expr::make);
}

Expr Expr::operator-() const {
    if (is_constant())
        return constant(-node_->value);
    if (op() == Op::Neg)
        return node_->a;
    ExprNode n;
    n.op = Op::Neg;
    n.a = *this;
    return make(std::move(n));
}

Expr Expr::pow(const Expr &base, long exponent) {
    if (exponent == 1)
        return base;
    if (exponent == 0)
        return constant(1);
    if (base.is_constant() && (exponent > 0 || base.node().value != 0)) {
        Rational acc = 1;
        Rational b = exponent > 0 ? base.node().value : Rational(1) / base.node().value;
        for (long i = 0; i < std::labs(exponent); ++i)
            acc *= b;
        return constant(acc);
    }
    ExprNode n;
    n.op = Op::Pow;
    n.a = base;
    n.exponent = exponent;
    return make(std::move(n));
}

Expr Expr::apply(Op op, const Expr &arg) {
    if (!is_transcendental(op))
        throw std::invalid_argument(std::string("not a unary function: ") + to_string(op));
    ExprNode n;
    n.op = op;
    n.a = arg;
    return make(std::move(n));
}

Expr exp(const Expr &e) { return Expr::apply(Op::Exp, e); }
Expr log(const Expr &e) { return Expr::apply(Op::Log, e); }
Expr sin(const Expr &e) { return Expr::apply(Op::Sin, e); }
Expr cos(const Expr &e) { return Expr::apply(Op::Cos, e); }
Expr sqrt(const Expr &e) { return Expr::apply(Op::Sqrt, e); }

bool same_expr(const Expr &a, const Expr &b) {
    if (a.id() == b.id())
        return true;
    const ExprNode &x = a.node(), &y = b.node();
    if (x.op != y.op)
        return false;
    switch (x.op) {
    case Op::Const: return x.value == y.value;
    case Op::Var: return x.var == y.var;
    case Op::Pow: return x.exponent == y.exponent && same_expr(x.a, y.a);
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div: return same_expr(x.a, y.a) && same_expr(x.b, y.b);
    default: return same_expr(x.a, y.a);
    }
}

namespace {

void visit(const Expr &e, std::set<const ExprNode *> &seen, const std::function<void(const ExprNode &)> &f) {
    if (!seen.insert(e.id()).second)
        return;
    const ExprNode &n = e.node();
    f(n);
    if (n.a.id())
        visit(n.a, seen, f);
    if (n.b.id())
        visit(n.b, seen, f);
}

} // namespace

bool has_transcendental(const Expr &e) {
    bool found = false;
    std::set<const ExprNode *> seen;
    visit(e, seen, [&](const ExprNode &n) { found = found || is_transcendental(n.op); });
    return found;
}

std::size_t variable_bound(const Expr &e) {
    std::size_t bound = 0;
    std::set<const ExprNode *> seen;
    visit(e, seen, [&](const ExprNode &n) {
        if (n.op == Op::Var)
            bound = std::max(bound, n.var + 1);
    });
    return bound;
}

std::size_t node_count(const Expr &e) {
    std::set<const ExprNode *> seen;
    visit(e, seen, [](const ExprNode &) {});
    return seen.size();
}

Expr substitute(const Expr &e, const std::vector<Expr> &args) {
    std::unordered_map<const ExprNode *, Expr> memo;
    std::function<Expr(const Expr &)> go = [&](const Expr &x) -> Expr {
        if (auto it = memo.find(x.id()); it != memo.end())
            return it->second;
        const ExprNode &n = x.node();
        Expr out;
        switch (n.op) {
        case Op::Const: out = x; break;
        case Op::Var:
            if (n.var >= args.size())
                throw std::out_of_range("substitute: variable index out of range");
            out = args[n.var];
            break;
        case Op::Add: out = go(n.a) + go(n.b); break;
        case Op::Sub: out = go(n.a) - go(n.b); break;
        case Op::Mul: out = go(n.a) * go(n.b); break;
        case Op::Div: out = go(n.a) / go(n.b); break;
        case Op::Pow: out = Expr::pow(go(n.a), n.exponent); break;
        case Op::Neg: out = -go(n.a); break;
        default: out = Expr::apply(n.op, go(n.a)); break;
        }
        memo.emplace(x.id(), out);
        return out;
    };
    return go(e);
}

// ---------------------------------------------------------------------------
// Printing. Levels: 1 additive, 2 multiplicative, 3 unary minus, 4 power,
// 5 atom.

namespace {

int precedence(const ExprNode &n) {
    switch (n.op) {
    case Op::Add:
    case Op::Sub: return 1;
    case Op::Mul:
    case Op::Div: return 2;
    case Op::Neg: return 3;
    case Op::Pow: return 4;
    case Op::Const:
        if (n.value.get_den() != 1)
            return 2;
        return n.value < 0 ? 3 : 5;
    default: return 5;
    }
}

std::string print_at(const Expr &e, const std::vector<std::string> &names, int min_prec);

std::string print_node(const Expr &e, const std::vector<std::string> &names) {
    const ExprNode &n = e.node();
    switch (n.op) {
    case Op::Const: return n.value.get_str();
    case Op::Var: return n.var < names.size() ? names[n.var] : "u" + std::to_string(n.var);
    case Op::Add: return print_at(n.a, names, 1) + " + " + print_at(n.b, names, 2);
    case Op::Sub: return print_at(n.a, names, 1) + " - " + print_at(n.b, names, 2);
    case Op::Mul: return print_at(n.a, names, 2) + "*" + print_at(n.b, names, 3);
    case Op::Div: return print_at(n.a, names, 2) + "/" + print_at(n.b, names, 3);
    case Op::Neg: return "-" + print_at(n.a, names, 3);
    case Op::Pow: {
        std::string exponent = n.exponent < 0 ? "(" + std::to_string(n.exponent) + ")"
                                              : std::to_string(n.exponent);
        return print_at(n.a, names, 5) + "^" + exponent;
    }
    default: return std::string(to_string(n.op)) + "(" + print_at(n.a, names, 0) + ")";
    }
}

std::string print_at(const Expr &e, const std::vector<std::string> &names, int min_prec) {
    std::string s = print_node(e, names);
    return precedence(e.node()) < min_prec ? "(" + s + ")" : s;
}

} // namespace

std::string print(const Expr &e, const std::vector<std::string> &names) {
    return print_at(e, names, 0);
}

// ---------------------------------------------------------------------------

std::vector<std::string> default_variable_names(std::size_t m) {
    static const char *small[] = {"u", "v", "w"};
    std::vector<std::string> out;
    for (std::size_t i = 0; i < m; ++i)
        out.push_back(m <= 3 ? small[i] : "u" + std::to_string(i + 1));
    return out;
}

SmoothMap::SmoothMap(std::string name, std::vector<std::string> variables, std::vector<Expr> outputs)
    : name_(std::move(name)), variables_(std::move(variables)), outputs_(std::move(outputs)) {
    std::set<std::string> unique(variables_.begin(), variables_.end());
    if (unique.size() != variables_.size())
        throw std::invalid_argument("map '" + name_ + "' repeats a variable name");
    for (const auto &e : outputs_) {
        if (!e.id())
            throw std::invalid_argument("map '" + name_ + "' has an empty output");
        if (variable_bound(e) > variables_.size())
            throw std::invalid_argument("map '" + name_ + "' uses a variable outside its arity");
    }
}

SmoothMap SmoothMap::identity(std::size_t m) {
    std::vector<Expr> out;
    for (std::size_t i = 0; i < m; ++i)
        out.push_back(Expr::variable(i));
    return SmoothMap("id", default_variable_names(m), std::move(out));
}

SmoothMap SmoothMap::projection(std::size_t m, const std::vector<std::size_t> &indices) {
    std::vector<Expr> out;
    for (std::size_t i : indices) {
        if (i >= m)
            throw std::out_of_range("projection index out of range");
        out.push_back(Expr::variable(i));
    }
    return SmoothMap("pr", default_variable_names(m), std::move(out));
}

bool SmoothMap::has_transcendental() const {
    for (const auto &e : outputs_)
        if (weilkit::has_transcendental(e))
            return true;
    return false;
}

SmoothMap SmoothMap::renamed(std::string name) const {
    SmoothMap copy = *this;
    copy.name_ = std::move(name);
    return copy;
}

std::string SmoothMap::str() const {
    std::string s = "map " + name_ + "(";
    for (std::size_t i = 0; i < variables_.size(); ++i)
        s += (i ? "," : "") + variables_[i];
    s += ") -> (";
    for (std::size_t i = 0; i < outputs_.size(); ++i)
        s += (i ? ", " : "") + print(outputs_[i], variables_);
    return s + ")";
}

SmoothMap compose(const SmoothMap &g, const SmoothMap &f) {
    if (g.arity_in() != f.arity_out())
        throw std::invalid_argument("compose: arity mismatch (" + g.name() + " takes " +
                                    std::to_string(g.arity_in()) + ", " + f.name() + " gives " +
                                    std::to_string(f.arity_out()) + ")");
    std::vector<Expr> out;
    for (const auto &e : g.outputs())
        out.push_back(substitute(e, f.outputs()));
    return SmoothMap(g.name() + "." + f.name(), f.variables(), std::move(out));
}

SmoothMap pairing(const SmoothMap &f, const SmoothMap &g) {
    if (f.arity_in() != g.arity_in())
        throw std::invalid_argument("pairing: arity mismatch");
    std::vector<Expr> out = f.outputs();
    out.insert(out.end(), g.outputs().begin(), g.outputs().end());
    return SmoothMap("<" + f.name() + "," + g.name() + ">", f.variables(), std::move(out));
}

} // namespace weilkit

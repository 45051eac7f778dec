#include "weilkit/polynomial.hpp"

#include <functional>
#include <stdexcept>
#include <unordered_map>

namespace weilkit {

Polynomial Polynomial::constant(std::size_t nvars, const Rational &c) {
    Polynomial p(nvars);
    p.add_term(Monomial(nvars, 0), c);
    return p;
}

Polynomial Polynomial::variable(std::size_t nvars, std::size_t i) {
    Polynomial p(nvars);
    Monomial m(nvars, 0);
    m.at(i) = 1;
    p.add_term(m, 1);
    return p;
}

void Polynomial::add_term(const Monomial &m, const Rational &c) {
    if (c == 0)
        return;
    auto [it, fresh] = terms_.emplace(m, c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0)
            terms_.erase(it);
    }
}

unsigned Polynomial::degree() const {
    unsigned d = 0;
    for (const auto &[m, c] : terms_) {
        unsigned t = 0;
        for (unsigned e : m)
            t += e;
        d = std::max(d, t);
    }
    return d;
}

Rational Polynomial::coefficient(const Monomial &m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
}

Polynomial &Polynomial::operator+=(const Polynomial &o) {
    if (o.nvars_ != nvars_)
        throw std::invalid_argument("polynomial variable counts differ");
    for (const auto &[m, c] : o.terms_)
        add_term(m, c);
    return *this;
}

Polynomial &Polynomial::operator-=(const Polynomial &o) {
    if (o.nvars_ != nvars_)
        throw std::invalid_argument("polynomial variable counts differ");
    for (const auto &[m, c] : o.terms_)
        add_term(m, -c);
    return *this;
}

Polynomial operator*(const Polynomial &a, const Polynomial &b) {
    if (a.nvars_ != b.nvars_)
        throw std::invalid_argument("polynomial variable counts differ");
    Polynomial out(a.nvars_);
    for (const auto &[ma, ca] : a.terms_)
        for (const auto &[mb, cb] : b.terms_) {
            Polynomial::Monomial m(a.nvars_);
            for (std::size_t i = 0; i < m.size(); ++i)
                m[i] = ma[i] + mb[i];
            out.add_term(m, ca * cb);
        }
    return out;
}

Polynomial Polynomial::operator-() const { return scaled(-1); }

Polynomial Polynomial::scaled(const Rational &c) const {
    Polynomial out(nvars_);
    for (const auto &[m, v] : terms_)
        out.add_term(m, v * c);
    return out;
}

Polynomial Polynomial::pow(unsigned n) const {
    Polynomial acc = constant(nvars_, 1), base = *this;
    while (n) {
        if (n & 1)
            acc = acc * base;
        n >>= 1;
        if (n)
            base = base * base;
    }
    return acc;
}

Polynomial Polynomial::derivative(std::size_t var) const {
    Polynomial out(nvars_);
    for (const auto &[m, c] : terms_) {
        if (m[var] == 0)
            continue;
        Monomial d = m;
        --d[var];
        out.add_term(d, c * static_cast<unsigned long>(m[var]));
    }
    return out;
}

Rational Polynomial::evaluate(const QVector &point) const {
    if (point.size() != nvars_)
        throw std::invalid_argument("polynomial evaluated at a point of the wrong length");
    Rational acc = 0;
    for (const auto &[m, c] : terms_) {
        Rational t = c;
        for (std::size_t i = 0; i < nvars_; ++i)
            for (unsigned k = 0; k < m[i]; ++k)
                t *= point[i];
        acc += t;
    }
    return acc;
}

std::string Polynomial::str(const std::vector<std::string> &names) const {
    if (terms_.empty())
        return "0";
    std::string s;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto &[m, c] = *it;
        std::string mono;
        for (std::size_t i = 0; i < nvars_; ++i) {
            if (!m[i])
                continue;
            if (!mono.empty())
                mono += "*";
            mono += i < names.size() ? names[i] : "u" + std::to_string(i);
            if (m[i] > 1)
                mono += "^" + std::to_string(m[i]);
        }
        Rational mag = abs(c);
        std::string coef = mag.get_str();
        std::string term = mono.empty() ? coef : (mag == 1 ? mono : coef + "*" + mono);
        if (first)
            s = (c < 0 ? "-" : "") + term;
        else
            s += (c < 0 ? " - " : " + ") + term;
        first = false;
    }
    return s;
}

std::optional<Polynomial> to_polynomial(const Expr &e, std::size_t nvars) {
    std::unordered_map<const ExprNode *, std::optional<Polynomial>> memo;
    std::function<std::optional<Polynomial>(const Expr &)> go = [&](const Expr &x) -> std::optional<Polynomial> {
        if (auto it = memo.find(x.id()); it != memo.end())
            return it->second;
        const ExprNode &n = x.node();
        std::optional<Polynomial> out;
        switch (n.op) {
        case Op::Const: out = Polynomial::constant(nvars, n.value); break;
        case Op::Var:
            if (n.var < nvars)
                out = Polynomial::variable(nvars, n.var);
            break;
        case Op::Add:
        case Op::Sub:
        case Op::Mul: {
            auto a = go(n.a), b = go(n.b);
            if (a && b)
                out = n.op == Op::Add ? *a + *b : n.op == Op::Sub ? *a - *b : *a * *b;
            break;
        }
        case Op::Div: {
            auto a = go(n.a);
            if (a && n.b.is_constant() && n.b.node().value != 0)
                out = a->scaled(1 / n.b.node().value);
            break;
        }
        case Op::Pow: {
            auto a = go(n.a);
            if (a && n.exponent >= 0)
                out = a->pow(static_cast<unsigned>(n.exponent));
            break;
        }
        case Op::Neg: {
            auto a = go(n.a);
            if (a)
                out = -*a;
            break;
        }
        default: break;
        }
        memo.emplace(x.id(), out);
        return out;
    };
    return go(e);
}

std::optional<std::vector<Polynomial>> to_polynomials(const SmoothMap &f) {
    std::vector<Polynomial> out;
    for (const auto &e : f.outputs()) {
        auto p = to_polynomial(e, f.arity_in());
        if (!p)
            return std::nullopt;
        out.push_back(std::move(*p));
    }
    return out;
}

std::optional<AffineForm> affine_form(const SmoothMap &f) {
    auto polys = to_polynomials(f);
    if (!polys)
        return std::nullopt;
    const std::size_t m = f.arity_in(), n = f.arity_out();
    AffineForm a{QMatrix(n, m), QVector(n)};
    for (std::size_t r = 0; r < n; ++r) {
        if (!(*polys)[r].is_affine())
            return std::nullopt;
        a.offset[r] = (*polys)[r].coefficient(Polynomial::Monomial(m, 0));
        for (std::size_t c = 0; c < m; ++c) {
            Polynomial::Monomial mono(m, 0);
            mono[c] = 1;
            a.linear(r, c) = (*polys)[r].coefficient(mono);
        }
    }
    return a;
}

QMatrix jacobian(const std::vector<Polynomial> &f, const QVector &point) {
    const std::size_t m = point.size();
    QMatrix j(f.size(), m);
    for (std::size_t r = 0; r < f.size(); ++r)
        for (std::size_t c = 0; c < m; ++c)
            j(r, c) = f[r].derivative(c).evaluate(point);
    return j;
}

} // namespace weilkit

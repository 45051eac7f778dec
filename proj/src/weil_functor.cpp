#include "weilkit/weil_functor.hpp"

#include "weilkit/sampling.hpp"

#include <cmath>
#include <sstream>
#include <unordered_map>

namespace weilkit {

// ---------------------------------------------------------------------------
// WeilPoint

WeilPoint::WeilPoint(WeilAlgebra algebra, std::vector<WeilElement> coords, ScalarMode mode)
    : algebra_(std::move(algebra)), coords_(std::move(coords)), mode_(mode) {
    for (const auto &c : coords_) {
        if (c.algebra().impl() != algebra_.impl() && c.algebra() != algebra_)
            throw WeilError("point coordinates live in different algebras");
        if (c.mode() != mode_)
            throw ModeError("point coordinates do not share the point's scalar mode");
    }
}

WeilPoint WeilPoint::constant(const WeilAlgebra &w, const Vector &x) {
    ScalarMode mode = x.empty() ? ScalarMode::ExactRational : x[0].mode();
    std::vector<WeilElement> coords;
    for (const auto &s : x)
        coords.push_back(WeilElement::constant(w, s));
    return WeilPoint(w, std::move(coords), mode);
}

Vector WeilPoint::flatten() const {
    Vector out;
    out.reserve(coords_.size() * algebra_.dimension());
    for (const auto &c : coords_)
        out.insert(out.end(), c.coeffs().begin(), c.coeffs().end());
    return out;
}

WeilPoint WeilPoint::unflatten(const WeilAlgebra &w, std::size_t d, const Vector &flat) {
    const std::size_t n = w.dimension();
    if (flat.size() != d * n)
        throw WeilError("flattened point has the wrong length");
    ScalarMode mode = flat.empty() ? ScalarMode::ExactRational : flat[0].mode();
    std::vector<WeilElement> coords;
    for (std::size_t c = 0; c < d; ++c)
        coords.emplace_back(w, Vector(flat.begin() + static_cast<long>(c * n),
                                      flat.begin() + static_cast<long>((c + 1) * n)));
    return WeilPoint(w, std::move(coords), mode);
}

bool operator==(const WeilPoint &a, const WeilPoint &b) {
    return a.mode_ == b.mode_ && a.coords_.size() == b.coords_.size() && a.algebra_ == b.algebra_ &&
           a.coords_ == b.coords_;
}

std::string WeilPoint::str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < coords_.size(); ++i)
        s += (i ? ", " : "") + coords_[i].str();
    return s + ")";
}

// ---------------------------------------------------------------------------
// Lifting, generic over the coefficient type: Scalar for numeric points and
// Expr for the symbolic lift T^W f.

namespace {

template <class C> struct Ops;

template <> struct Ops<Scalar> {
    ScalarMode mode;

    Scalar from(const Rational &q) const { return Scalar::from_rational(q, mode); }
    bool is_zero(const Scalar &s) const { return s.is_zero(); }
    Scalar inv(const Scalar &a, const std::string &where) const {
        if (a.is_zero())
            throw NonInvertibleError("division by an element with zero augmentation in node '" + where + "'");
        return from(1) / a;
    }
    Scalar func(Op op, const Scalar &a, const std::string &where) const {
        if (mode == ScalarMode::ExactRational)
            throw ModeError(std::string("transcendental node '") + to_string(op) +
                            "' cannot be evaluated in exact mode (in '" + where + "')");
        double x = a.to_double();
        switch (op) {
        case Op::Exp: return Scalar(std::exp(x));
        case Op::Sin: return Scalar(std::sin(x));
        case Op::Cos: return Scalar(std::cos(x));
        case Op::Log:
            if (!(x > 0))
                throw std::domain_error("log of a non-positive augmentation in node '" + where + "'");
            return Scalar(std::log(x));
        default:
            if (!(x > 0))
                throw std::domain_error("sqrt of a non-positive augmentation in node '" + where + "'");
            return Scalar(std::sqrt(x));
        }
    }
};

template <> struct Ops<Expr> {
    Expr from(const Rational &q) const { return Expr::constant(q); }
    bool is_zero(const Expr &e) const { return e.is_constant(0); }
    Expr inv(const Expr &a, const std::string &where) const {
        if (a.is_constant(0))
            throw NonInvertibleError("division by an element with zero augmentation in node '" + where + "'");
        return Expr::pow(a, -1);
    }
    Expr func(Op op, const Expr &a, const std::string &) const { return Expr::apply(op, a); }
};

template <class C> class Lifter {
public:
    using Elem = std::vector<C>;

    Lifter(const WeilAlgebra &w, Ops<C> ops, std::vector<Elem> inputs, const std::vector<std::string> &names)
        : w_(w), n_(w.dimension()), ops_(std::move(ops)), inputs_(std::move(inputs)), names_(names) {}

    Elem eval(const Expr &e) {
        if (auto it = memo_.find(e.id()); it != memo_.end())
            return it->second;
        const ExprNode &node = e.node();
        Elem out;
        switch (node.op) {
        case Op::Const: out = constant(ops_.from(node.value)); break;
        case Op::Var:
            if (node.var >= inputs_.size())
                throw std::out_of_range("expression variable outside the point's dimension");
            out = inputs_[node.var];
            break;
        case Op::Add: out = add(eval(node.a), eval(node.b)); break;
        case Op::Sub: out = add(eval(node.a), neg(eval(node.b))); break;
        case Op::Mul: out = mul(eval(node.a), eval(node.b)); break;
        case Op::Div: out = mul(eval(node.a), inverse(eval(node.b), e)); break;
        case Op::Neg: out = neg(eval(node.a)); break;
        case Op::Pow: out = power(eval(node.a), node.exponent, e); break;
        default: out = analytic(node.op, eval(node.a), e); break;
        }
        memo_.emplace(e.id(), out);
        return out;
    }

private:
    std::string where(const Expr &e) const { return print(e, names_); }

    Elem zero() const { return Elem(n_, ops_.from(0)); }

    Elem constant(const C &c) const {
        Elem out = zero();
        out[0] = c;
        return out;
    }

    Elem add(Elem a, const Elem &b) const {
        for (std::size_t i = 0; i < n_; ++i)
            a[i] = a[i] + b[i];
        return a;
    }

    Elem neg(Elem a) const {
        for (auto &c : a)
            c = -c;
        return a;
    }

    Elem scale(Elem a, const C &s) const {
        for (auto &c : a)
            c = c * s;
        return a;
    }

    Elem mul(const Elem &a, const Elem &b) const {
        Elem out = zero();
        for (std::size_t i = 0; i < n_; ++i) {
            if (ops_.is_zero(a[i]))
                continue;
            for (std::size_t j = 0; j < n_; ++j) {
                if (ops_.is_zero(b[j]))
                    continue;
                C ab = a[i] * b[j];
                for (const auto &entry : w_.product(i, j))
                    out[entry.index] =
                        out[entry.index] + (entry.coeff == 1 ? ab : ab * ops_.from(entry.coeff));
            }
        }
        return out;
    }

    C augmentation(const Elem &a) const {
        C acc = ops_.from(0);
        const QVector &aug = w_.augmentation();
        for (std::size_t i = 0; i < n_; ++i)
            if (aug[i] != 0)
                acc = acc + (aug[i] == 1 ? a[i] : a[i] * ops_.from(aug[i]));
        return acc;
    }

    // sum_j d[j] nu^j with nu = x - aug(x); d has length <= nilpotency degree.
    Elem series(const Elem &x, const C &a, const std::vector<C> &d) const {
        Elem nu = x;
        nu[0] = nu[0] - a;
        Elem out = constant(d[0]);
        Elem p = nu;
        for (std::size_t j = 1; j < d.size(); ++j) {
            out = add(out, scale(p, d[j]));
            if (j + 1 < d.size())
                p = mul(p, nu);
        }
        return out;
    }

    std::size_t terms() const { return w_.nilpotency_degree(); }

    Elem inverse(const Elem &x, const Expr &e) const {
        C a = augmentation(x);
        C ia = ops_.inv(a, where(e));
        std::vector<C> d;
        C p = ia;
        for (std::size_t j = 0; j < terms(); ++j) {
            d.push_back(j % 2 ? -p : p);
            p = p * ia;
        }
        return series(x, a, d);
    }

    Elem power(const Elem &x, long k, const Expr &e) const {
        Elem base = k < 0 ? inverse(x, e) : x;
        unsigned long n = static_cast<unsigned long>(k < 0 ? -k : k);
        Elem acc = constant(ops_.from(1));
        while (n) {
            if (n & 1)
                acc = mul(acc, base);
            n >>= 1;
            if (n)
                base = mul(base, base);
        }
        return acc;
    }

    Elem analytic(Op op, const Elem &x, const Expr &e) const {
        const std::string at = where(e);
        C a = augmentation(x);
        std::vector<C> d;
        Rational fact = 1;
        switch (op) {
        case Op::Exp: {
            C ea = ops_.func(Op::Exp, a, at);
            for (std::size_t j = 0; j < terms(); ++j) {
                if (j)
                    fact *= static_cast<unsigned long>(j);
                d.push_back(ea * ops_.from(1 / fact));
            }
            break;
        }
        case Op::Sin:
        case Op::Cos: {
            C s = ops_.func(Op::Sin, a, at), c = ops_.func(Op::Cos, a, at);
            // Derivatives cycle sin, cos, -sin, -cos (cos starts one step later).
            std::size_t shift = op == Op::Sin ? 0 : 1;
            for (std::size_t j = 0; j < terms(); ++j) {
                if (j)
                    fact *= static_cast<unsigned long>(j);
                C v = ((j + shift) % 4 == 0) ? s : ((j + shift) % 4 == 1) ? c : ((j + shift) % 4 == 2) ? -s : -c;
                d.push_back(v * ops_.from(1 / fact));
            }
            break;
        }
        case Op::Log: {
            d.push_back(ops_.func(Op::Log, a, at));
            if (terms() > 1) {
                C ia = ops_.inv(a, at);
                C p = ia;
                for (std::size_t j = 1; j < terms(); ++j) {
                    Rational k(j % 2 ? 1 : -1, static_cast<long>(j));
                    k.canonicalize();
                    d.push_back(p * ops_.from(k));
                    p = p * ia;
                }
            }
            break;
        }
        default: { // sqrt
            C r = ops_.func(Op::Sqrt, a, at);
            d.push_back(r);
            if (terms() > 1) {
                C ia = ops_.inv(a, at);
                C p = r * ia;
                Rational binom = 1;
                for (std::size_t j = 1; j < terms(); ++j) {
                    binom *= Rational(1, 2) - Rational(static_cast<long>(j) - 1);
                    binom /= static_cast<unsigned long>(j);
                    d.push_back(p * ops_.from(binom));
                    p = p * ia;
                }
            }
            break;
        }
        }
        return series(x, a, d);
    }

    const WeilAlgebra &w_;
    std::size_t n_;
    Ops<C> ops_;
    std::vector<Elem> inputs_;
    const std::vector<std::string> &names_;
    std::unordered_map<const ExprNode *, Elem> memo_;
};

void require_arity(const SmoothMap &f, std::size_t d) {
    if (d != f.arity_in())
        throw std::invalid_argument("map '" + f.name() + "' takes " + std::to_string(f.arity_in()) +
                                    " inputs but the point has dimension " + std::to_string(d));
}

} // namespace

WeilPoint lift_eval(const SmoothMap &f, const WeilPoint &x) {
    require_arity(f, x.dimension());
    std::vector<Vector> inputs;
    for (const auto &c : x.coords())
        inputs.push_back(c.coeffs());
    Lifter<Scalar> lifter(x.algebra(), Ops<Scalar>{x.mode()}, std::move(inputs), f.variables());
    std::vector<WeilElement> out;
    for (const auto &e : f.outputs())
        out.emplace_back(x.algebra(), lifter.eval(e));
    return WeilPoint(x.algebra(), std::move(out), x.mode());
}

Vector evaluate(const SmoothMap &f, const Vector &x) {
    WeilPoint p = lift_eval(f, WeilPoint::constant(WeilAlgebra::k(), x));
    Vector out;
    for (const auto &c : p.coords())
        out.push_back(c[0]);
    return out;
}

SmoothMap lift_map(const SmoothMap &f, const WeilAlgebra &w) {
    const std::size_t n = w.dimension(), m = f.arity_in();
    std::vector<std::vector<Expr>> inputs(m, std::vector<Expr>(n));
    std::vector<std::string> names;
    for (std::size_t c = 0; c < m; ++c)
        for (std::size_t i = 0; i < n; ++i) {
            inputs[c][i] = Expr::variable(c * n + i);
            names.push_back(f.variables()[c] + "_" + std::to_string(i));
        }
    Lifter<Expr> lifter(w, Ops<Expr>{}, std::move(inputs), f.variables());
    std::vector<Expr> out;
    for (const auto &e : f.outputs()) {
        auto v = lifter.eval(e);
        out.insert(out.end(), v.begin(), v.end());
    }
    return SmoothMap("T" + f.name(), std::move(names), std::move(out));
}

WeilPoint alpha(const WeilMorphism &phi, const WeilPoint &x) {
    if (x.algebra() != phi.source())
        throw WeilError("alpha: point is not over the morphism's source");
    std::vector<WeilElement> out;
    for (const auto &c : x.coords())
        out.push_back(phi.apply(c));
    return WeilPoint(phi.target(), std::move(out), x.mode());
}

WeilPoint tau(const WeilPoint &x) { return alpha(augmentation(x.algebra()), x); }

WeilPoint iota(const WeilAlgebra &w, const WeilPoint &x) { return alpha(unit_map(w), x); }

WeilPoint reassociate(const WeilPoint &x) {
    const TensorInfo *info = x.algebra().tensor_info();
    if (!info)
        throw WeilError("reassociate needs a point over an algebra built by tensor()");
    WeilAlgebra w1 = x.algebra().tensor_left(), w2 = x.algebra().tensor_right();
    const std::size_t n1 = w1.dimension(), n2 = w2.dimension();
    std::vector<WeilElement> out;
    for (const auto &c : x.coords())
        for (std::size_t i = 0; i < n1; ++i) {
            Vector coeffs;
            for (std::size_t j = 0; j < n2; ++j)
                coeffs.push_back(c[info->index_of_pair[i * n2 + j]]);
            out.emplace_back(w2, std::move(coeffs));
        }
    return WeilPoint(w2, std::move(out), x.mode());
}

WeilPoint unreassociate(const WeilPoint &nested, const WeilAlgebra &t) {
    const TensorInfo *info = t.tensor_info();
    if (!info)
        throw WeilError("unreassociate needs an algebra built by tensor()");
    WeilAlgebra w1 = t.tensor_left(), w2 = t.tensor_right();
    const std::size_t n1 = w1.dimension(), n2 = w2.dimension();
    if (nested.algebra() != w2 || nested.dimension() % n1 != 0)
        throw WeilError("nested point does not match the tensor factors");
    const std::size_t d = nested.dimension() / n1;
    std::vector<WeilElement> out;
    for (std::size_t c = 0; c < d; ++c) {
        Vector coeffs(t.dimension(), Scalar::zero(nested.mode()));
        for (std::size_t i = 0; i < n1; ++i)
            for (std::size_t j = 0; j < n2; ++j)
                coeffs[info->index_of_pair[i * n2 + j]] = nested[c * n1 + i][j];
        out.emplace_back(t, std::move(coeffs));
    }
    return WeilPoint(t, std::move(out), nested.mode());
}

bool points_agree(const WeilPoint &a, const WeilPoint &b, double rel_tol) {
    if (a.dimension() != b.dimension() || a.mode() != b.mode() ||
        a.algebra().dimension() != b.algebra().dimension())
        return false;
    if (a.mode() == ScalarMode::ExactRational)
        return a.flatten() == b.flatten();
    Vector fa = a.flatten(), fb = b.flatten();
    for (std::size_t i = 0; i < fa.size(); ++i)
        if (!approx_equal(fa[i], fb[i], rel_tol))
            return false;
    return true;
}

namespace {

struct Tally {
    std::size_t agreed = 0, skipped = 0;
    std::vector<std::string> counterexamples;

    ReportEntry entry(std::string check, std::string instance, std::size_t total, ScalarMode mode) const {
        bool pass = counterexamples.empty() && agreed > 0;
        std::ostringstream cert;
        cert << agreed << "/" << total << " samples agree "
             << (mode == ScalarMode::ExactRational ? "exactly" : "within rel 1e-9");
        if (skipped)
            cert << ", " << skipped << " skipped (non-invertible)";
        for (std::size_t i = 0; i < counterexamples.size() && i < 3; ++i)
            cert << "; counterexample x=" << counterexamples[i];
        return {std::move(check), std::move(instance), pass, cert.str()};
    }
};

} // namespace

ReportEntry check_functor_composition(const SmoothMap &f, const WeilAlgebra &w1, const WeilAlgebra &w2,
                                      const SampleSpec &samples) {
    TensorProduct t = tensor(w1, w2);
    ScalarMode mode = f.has_transcendental() ? ScalarMode::Float64 : ScalarMode::ExactRational;
    SmoothMap tf = lift_map(f, w1);
    Sampler rng(samples.seed);
    Tally tally;
    for (std::size_t k = 0; k < samples.count; ++k) {
        WeilPoint x = rng.point(t.algebra, f.arity_in(), mode, mode == ScalarMode::Float64);
        try {
            WeilPoint direct = lift_eval(f, x);
            WeilPoint nested = unreassociate(lift_eval(tf, reassociate(x)), t.algebra);
            if (points_agree(direct, nested))
                ++tally.agreed;
            else
                tally.counterexamples.push_back(x.str());
        } catch (const NonInvertibleError &) {
            ++tally.skipped;
        }
    }
    return tally.entry("functor-composition",
                       f.str() + "; W1=" + w1.describe() + "; W2=" + w2.describe(), samples.count, mode);
}

ReportEntry check_bifunctor(const SmoothMap &f, const WeilMorphism &phi, const SampleSpec &samples) {
    ScalarMode mode = f.has_transcendental() ? ScalarMode::Float64 : ScalarMode::ExactRational;
    Sampler rng(samples.seed);
    Tally tally;
    for (std::size_t k = 0; k < samples.count; ++k) {
        WeilPoint x = rng.point(phi.source(), f.arity_in(), mode, mode == ScalarMode::Float64);
        try {
            WeilPoint lhs = alpha(phi, lift_eval(f, x));
            WeilPoint rhs = lift_eval(f, alpha(phi, x));
            if (points_agree(lhs, rhs))
                ++tally.agreed;
            else
                tally.counterexamples.push_back(x.str());
        } catch (const NonInvertibleError &) {
            ++tally.skipped;
        }
    }
    return tally.entry("bifunctor-square",
                       f.str() + "; phi: " + phi.source().describe() + " -> " + phi.target().describe(),
                       samples.count, mode);
}

Jet jet(const SmoothMap &f, const Scalar &point, unsigned order) {
    if (f.arity_in() != 1)
        throw std::invalid_argument("univariate jet needs a map of one variable");
    return jet(f, Vector{point}, order);
}

Jet jet(const SmoothMap &f, const Vector &point, unsigned order) {
    require_arity(f, point.size());
    static const char *names[] = {"x", "y", "z", "w", "s", "t"};
    WeilAlgebra w = WeilAlgebra::k();
    for (std::size_t i = 0; i < point.size(); ++i) {
        std::string name = i < 6 ? names[i] : "x" + std::to_string(i + 1);
        WeilAlgebra line = WeilAlgebra::truncated_line(order, name);
        w = i == 0 ? line : tensor(w, line).algebra;
    }
    ScalarMode mode = point.empty() ? ScalarMode::ExactRational : point[0].mode();
    std::vector<WeilElement> coords;
    for (std::size_t i = 0; i < point.size(); ++i) {
        WeilElement c = WeilElement::constant(w, point[i]);
        if (order > 0) {
            Exponents e(point.size(), 0);
            e[i] = 1;
            c += WeilElement::basis(w, *w.monomial_index(e), mode);
        }
        coords.push_back(std::move(c));
    }
    WeilPoint out = lift_eval(f, WeilPoint(w, std::move(coords), mode));
    return {w, out.coords()};
}

} // namespace weilkit

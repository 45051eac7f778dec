#include "weilkit/weil_algebra.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

namespace weilkit {

namespace {

unsigned degree(const Exponents &e) { return std::accumulate(e.begin(), e.end(), 0u); }

bool divides(const Exponents &d, const Exponents &e) {
    for (std::size_t i = 0; i < d.size(); ++i)
        if (d[i] > e[i])
            return false;
    return true;
}

// Graded order: total degree, then lexicographically larger exponent first
// (so x precedes y and x*y precedes y^2).
bool graded_less(const Exponents &a, const Exponents &b) {
    unsigned da = degree(a), db = degree(b);
    if (da != db)
        return da < db;
    return a > b;
}

std::string monomial_string(const std::vector<std::string> &gens, const Exponents &e) {
    std::string out;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0)
            continue;
        if (!out.empty())
            out += "*";
        out += gens[i];
        if (e[i] > 1)
            out += "^" + std::to_string(e[i]);
    }
    return out.empty() ? "1" : out;
}

QVector multiply_vectors(const WeilAlgebraImpl &a, const QVector &x, const QVector &y) {
    QVector out(a.dim);
    for (std::size_t i = 0; i < a.dim; ++i) {
        if (sgn(x[i]) == 0)
            continue;
        for (std::size_t j = 0; j < a.dim; ++j) {
            if (sgn(y[j]) == 0)
                continue;
            for (const auto &entry : a.products[i * a.dim + j])
                out[entry.index] += entry.coeff * x[i] * y[j];
        }
    }
    return out;
}

QVector unit_vector(std::size_t n, std::size_t i) {
    QVector v(n);
    v[i] = 1;
    return v;
}

void validate_and_finish(WeilAlgebraImpl &a) {
    const std::size_t n = a.dim;
    if (n == 0)
        throw WeilError("a Weil algebra has at least the unit in its basis");
    if (a.augmentation.size() != n)
        throw WeilError("augmentation covector has wrong length");
    // Unit.
    for (std::size_t j = 0; j < n; ++j) {
        const auto &p = a.products[j];
        if (p.size() != 1 || p[0].index != j || p[0].coeff != 1)
            throw WeilError("basis element 0 is not a unit (fails on e" + std::to_string(j) + ")");
    }
    if (a.augmentation[0] != 1)
        throw WeilError("augmentation does not send 1 to 1");
    // Augmentation is multiplicative on basis pairs.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Rational lhs = 0;
            for (const auto &e : a.products[i * n + j])
                lhs += e.coeff * a.augmentation[e.index];
            if (lhs != a.augmentation[i] * a.augmentation[j])
                throw WeilError("augmentation is not multiplicative");
        }
    // Commutativity and associativity on the basis.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto &p = a.products[i * n + j];
            const auto &q = a.products[j * n + i];
            if (p.size() != q.size())
                throw WeilError("multiplication is not commutative");
            for (std::size_t t = 0; t < p.size(); ++t)
                if (p[t].index != q[t].index || p[t].coeff != q[t].coeff)
                    throw WeilError("multiplication is not commutative");
        }
    {
        QVector left(n), right(n);
        std::vector<std::size_t> touched;
        for (std::size_t i = 1; i < n; ++i)
            for (std::size_t j = 1; j < n; ++j)
                for (std::size_t k = 1; k < n; ++k) {
                    touched.clear();
                    for (const auto &e : a.products[i * n + j])
                        for (const auto &f : a.products[e.index * n + k]) {
                            left[f.index] += e.coeff * f.coeff;
                            touched.push_back(f.index);
                        }
                    for (const auto &e : a.products[j * n + k])
                        for (const auto &f : a.products[i * n + e.index]) {
                            right[f.index] += e.coeff * f.coeff;
                            touched.push_back(f.index);
                        }
                    bool same = true;
                    for (std::size_t t : touched) {
                        if (left[t] != right[t])
                            same = false;
                        left[t] = 0;
                        right[t] = 0;
                    }
                    if (!same)
                        throw WeilError("multiplication is not associative");
                }
    }
    // Powers of the maximal ideal.
    std::vector<QVector> ideal;
    for (std::size_t i = 1; i < n; ++i) {
        QVector v = unit_vector(n, i);
        v[0] -= a.augmentation[i];
        ideal.push_back(std::move(v));
    }
    Subspace current = Subspace::span(n, ideal);
    a.ideal_powers.clear();
    while (current.dimension() > 0) {
        a.ideal_powers.push_back(current);
        std::vector<QVector> next;
        for (const auto &x : current.basis())
            for (const auto &y : ideal)
                if (auto p = multiply_vectors(a, x, y); !is_zero(p))
                    next.push_back(std::move(p));
        Subspace following = Subspace::span(n, next);
        if (following.dimension() == current.dimension())
            throw WeilError("maximal ideal is not nilpotent");
        current = std::move(following);
    }
    a.nilpotency = a.ideal_powers.size() + 1;
    // Adapted basis of m: complements of m^(j+1) inside m^j.
    a.graded_layers.clear();
    for (std::size_t j = 0; j < a.ideal_powers.size(); ++j) {
        std::vector<QVector> chosen =
            j + 1 < a.ideal_powers.size() ? a.ideal_powers[j + 1].basis() : std::vector<QVector>{};
        std::size_t base = chosen.size();
        std::vector<QVector> layer;
        for (const auto &cand : a.ideal_powers[j].basis()) {
            std::vector<QVector> trial = chosen;
            trial.push_back(cand);
            if (Subspace::span(n, trial).dimension() == trial.size()) {
                chosen = std::move(trial);
                layer.push_back(cand);
            }
        }
        if (chosen.size() != a.ideal_powers[j].dimension() || layer.size() + base != chosen.size())
            throw WeilError("internal: filtration complement failed");
        a.graded_layers.push_back(std::move(layer));
    }
}

} // namespace

WeilAlgebra WeilAlgebra::k() {
    static const WeilAlgebra base = presented({}, {});
    return base;
}

WeilAlgebra WeilAlgebra::presented(std::vector<std::string> generators,
                                   std::vector<Exponents> relations) {
    auto impl = std::make_shared<WeilAlgebraImpl>();
    impl->flavor = Flavor::Presented;
    const std::size_t g = generators.size();
    std::set<std::string> seen;
    for (const auto &name : generators) {
        if (name.empty() || !seen.insert(name).second)
            throw WeilError("generator names must be nonempty and distinct ('" + name + "')");
    }
    for (const auto &r : relations) {
        if (r.size() != g)
            throw WeilError("relation exponent vector has wrong length");
        if (degree(r) == 0)
            throw WeilError("relation 1 collapses the algebra to zero");
    }
    Exponents bound(g, 0);
    for (std::size_t i = 0; i < g; ++i) {
        unsigned best = 0;
        for (const auto &r : relations) {
            if (degree(r) == r[i] && (best == 0 || r[i] < best))
                best = r[i];
        }
        if (best == 0)
            throw WeilError("generator '" + generators[i] +
                            "' has no pure-power relation; the quotient is infinite-dimensional");
        bound[i] = best;
    }
    // Standard monomials: exponents below the pure-power bounds, not divisible
    // by any relation.
    std::vector<Exponents> basis;
    Exponents e(g, 0);
    while (true) {
        bool in_ideal = std::any_of(relations.begin(), relations.end(),
                                    [&](const Exponents &r) { return divides(r, e); });
        if (!in_ideal)
            basis.push_back(e);
        std::size_t pos = 0;
        while (pos < g && ++e[pos] == bound[pos])
            e[pos++] = 0;
        if (pos == g)
            break;
    }
    std::sort(basis.begin(), basis.end(), graded_less);
    std::map<Exponents, std::size_t> index;
    for (std::size_t i = 0; i < basis.size(); ++i)
        index.emplace(basis[i], i);
    const std::size_t n = basis.size();
    impl->dim = n;
    impl->products.assign(n * n, {});
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Exponents s(g);
            for (std::size_t t = 0; t < g; ++t)
                s[t] = basis[i][t] + basis[j][t];
            if (auto it = index.find(s); it != index.end())
                impl->products[i * n + j].push_back({it->second, Rational(1)});
        }
    impl->augmentation = unit_vector(n, 0);
    impl->generators = std::move(generators);
    impl->relations = std::move(relations);
    impl->monomials = std::move(basis);
    {
        std::string rels;
        for (const auto &r : impl->relations)
            rels += (rels.empty() ? "" : ", ") + monomial_string(impl->generators, r);
        std::string gens;
        for (const auto &name : impl->generators)
            gens += (gens.empty() ? "" : ",") + name;
        impl->label = "Q[" + gens + "]/(" + rels + ")";
    }
    validate_and_finish(*impl);
    return WeilAlgebra(std::move(impl));
}

WeilAlgebra WeilAlgebra::truncated_line(unsigned order, std::string name) {
    return presented({std::move(name)}, {Exponents{order + 1}});
}

WeilAlgebra WeilAlgebra::dual_numbers(std::string name) { return truncated_line(1, std::move(name)); }

WeilAlgebra WeilAlgebra::first_order(unsigned n) {
    std::vector<std::string> gens;
    std::vector<Exponents> rels;
    for (unsigned i = 0; i < n; ++i)
        gens.push_back("d" + std::to_string(i + 1));
    for (unsigned i = 0; i < n; ++i)
        for (unsigned j = i; j < n; ++j) {
            Exponents e(n, 0);
            ++e[i];
            ++e[j];
            rels.push_back(std::move(e));
        }
    return presented(std::move(gens), std::move(rels));
}

WeilAlgebra WeilAlgebra::tabled(const TabledData &data) {
    auto impl = std::make_shared<WeilAlgebraImpl>();
    impl->flavor = Flavor::Tabled;
    const std::size_t n = data.dimension;
    if (n == 0)
        throw WeilError("tabled algebra must have positive dimension");
    if (data.unit_index != 0)
        throw WeilError("tabled algebra must list the unit as basis element 0");
    impl->dim = n;
    impl->augmentation = data.augmentation;
    std::vector<std::map<std::size_t, Rational>> acc(n * n);
    for (const auto &c : data.constants) {
        if (c.i >= n || c.j >= n || c.k >= n)
            throw WeilError("structure constant index out of range");
        if (acc[c.i * n + c.j].count(c.k))
            throw WeilError("duplicate structure constant c[" + std::to_string(c.i) + "][" +
                            std::to_string(c.j) + "][" + std::to_string(c.k) + "]");
        acc[c.i * n + c.j][c.k] = c.value;
    }
    impl->products.assign(n * n, {});
    for (std::size_t p = 0; p < n * n; ++p)
        for (const auto &[k, v] : acc[p])
            if (sgn(v) != 0)
                impl->products[p].push_back({k, v});
    impl->label = "tabled(dim=" + std::to_string(n) + ")";
    validate_and_finish(*impl);
    return WeilAlgebra(std::move(impl));
}

WeilAlgebra::Flavor WeilAlgebra::flavor() const { return impl_->flavor; }
std::size_t WeilAlgebra::dimension() const { return impl_->dim; }
std::size_t WeilAlgebra::nilpotency_degree() const { return impl_->nilpotency; }
const std::vector<std::string> &WeilAlgebra::generators() const { return impl_->generators; }
const std::vector<Exponents> &WeilAlgebra::relations() const { return impl_->relations; }
const std::vector<Exponents> &WeilAlgebra::monomials() const { return impl_->monomials; }

std::optional<std::size_t> WeilAlgebra::monomial_index(const Exponents &e) const {
    const auto &m = impl_->monomials;
    for (std::size_t i = 0; i < m.size(); ++i)
        if (m[i] == e)
            return i;
    return std::nullopt;
}

const std::vector<StructureEntry> &WeilAlgebra::product(std::size_t i, std::size_t j) const {
    return impl_->products[i * impl_->dim + j];
}

const QVector &WeilAlgebra::augmentation() const { return impl_->augmentation; }

const TensorInfo *WeilAlgebra::tensor_info() const {
    return impl_->tensor ? &*impl_->tensor : nullptr;
}

WeilAlgebra WeilAlgebra::tensor_left() const {
    if (!impl_->tensor)
        throw WeilError("algebra was not constructed as a tensor product");
    return WeilAlgebra(impl_->tensor->left);
}

WeilAlgebra WeilAlgebra::tensor_right() const {
    if (!impl_->tensor)
        throw WeilError("algebra was not constructed as a tensor product");
    return WeilAlgebra(impl_->tensor->right);
}

const std::vector<Subspace> &WeilAlgebra::ideal_powers() const { return impl_->ideal_powers; }
const std::vector<std::vector<QVector>> &WeilAlgebra::graded_layers() const {
    return impl_->graded_layers;
}

std::string WeilAlgebra::basis_label(std::size_t i) const {
    if (is_presented())
        return monomial_string(impl_->generators, impl_->monomials.at(i));
    if (impl_->tensor) {
        auto [l, r] = impl_->tensor->pairs.at(i);
        WeilAlgebra left(impl_->tensor->left), right(impl_->tensor->right);
        std::string ls = left.basis_label(l), rs = right.basis_label(r);
        if (ls == "1")
            return rs;
        if (rs == "1")
            return ls;
        return ls + "@" + rs;
    }
    return i == 0 ? "1" : "b" + std::to_string(i);
}

std::string WeilAlgebra::describe() const { return impl_->label; }

bool operator==(const WeilAlgebra &a, const WeilAlgebra &b) {
    if (a.impl_ == b.impl_)
        return true;
    const auto &x = *a.impl_;
    const auto &y = *b.impl_;
    if (x.dim != y.dim || x.augmentation != y.augmentation)
        return false;
    for (std::size_t p = 0; p < x.products.size(); ++p) {
        const auto &u = x.products[p];
        const auto &v = y.products[p];
        if (u.size() != v.size())
            return false;
        for (std::size_t t = 0; t < u.size(); ++t)
            if (u[t].index != v[t].index || u[t].coeff != v[t].coeff)
                return false;
    }
    return true;
}

bool WeilAlgebra::is_commutative() const {
    const std::size_t n = dimension();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            QVector a(n), b(n);
            for (const auto &e : product(i, j))
                a[e.index] += e.coeff;
            for (const auto &e : product(j, i))
                b[e.index] += e.coeff;
            if (a != b)
                return false;
        }
    return true;
}

bool WeilAlgebra::is_associative() const {
    const std::size_t n = dimension();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                QVector left(n), right(n);
                for (const auto &e : product(i, j))
                    for (const auto &f : product(e.index, k))
                        left[f.index] += e.coeff * f.coeff;
                for (const auto &e : product(j, k))
                    for (const auto &f : product(i, e.index))
                        right[f.index] += e.coeff * f.coeff;
                if (left != right)
                    return false;
            }
    return true;
}

// ---------------------------------------------------------------------------
// WeilElement

WeilElement::WeilElement(WeilAlgebra algebra, Vector coeffs)
    : algebra_(std::move(algebra)), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != algebra_.dimension())
        throw WeilError("coefficient vector length " + std::to_string(coeffs_.size()) +
                        " does not match algebra dimension " +
                        std::to_string(algebra_.dimension()));
    for (const auto &c : coeffs_)
        if (c.mode() != coeffs_[0].mode())
            throw ModeError("Weil element coefficients have mixed modes");
}

WeilElement WeilElement::zero(const WeilAlgebra &a, ScalarMode mode) {
    return WeilElement(a, Vector(a.dimension(), Scalar::zero(mode)));
}

WeilElement WeilElement::constant(const WeilAlgebra &a, const Scalar &c) {
    Vector v(a.dimension(), Scalar::zero(c.mode()));
    v[0] = c;
    return WeilElement(a, std::move(v));
}

WeilElement WeilElement::basis(const WeilAlgebra &a, std::size_t i, ScalarMode mode) {
    Vector v(a.dimension(), Scalar::zero(mode));
    v.at(i) = Scalar::one(mode);
    return WeilElement(a, std::move(v));
}

WeilElement WeilElement::from_rationals(const WeilAlgebra &a, const QVector &coeffs,
                                        ScalarMode mode) {
    Vector v;
    v.reserve(coeffs.size());
    for (const auto &q : coeffs)
        v.push_back(Scalar::from_rational(q, mode));
    return WeilElement(a, std::move(v));
}

ScalarMode WeilElement::mode() const { return coeffs_[0].mode(); }

QVector WeilElement::to_rational() const {
    QVector out;
    out.reserve(coeffs_.size());
    for (const auto &c : coeffs_)
        out.push_back(c.rational());
    return out;
}

Scalar WeilElement::augmentation() const {
    const auto &aug = algebra_.augmentation();
    Scalar s = Scalar::zero(mode());
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        if (sgn(aug[i]) != 0)
            s += Scalar::from_rational(aug[i], mode()) * coeffs_[i];
    return s;
}

WeilElement WeilElement::nilpotent_part() const {
    return *this - constant(algebra_, augmentation());
}

WeilElement WeilElement::inverse() const {
    Scalar a0 = augmentation();
    if (a0.is_zero())
        throw NonInvertibleError("element " + str() + " has zero augmentation and is not invertible");
    Scalar inv0 = Scalar::one(mode()) / a0;
    WeilElement step = nilpotent_part() * (-inv0);
    WeilElement term = constant(algebra_, Scalar::one(mode()));
    WeilElement sum = term;
    for (std::size_t j = 1; j < algebra_.nilpotency_degree(); ++j) {
        term = term * step;
        sum += term;
    }
    return sum * inv0;
}

WeilElement WeilElement::pow(long exponent) const {
    if (exponent < 0)
        return inverse().pow(-exponent);
    WeilElement result = constant(algebra_, Scalar::one(mode()));
    WeilElement base = *this;
    while (exponent > 0) {
        if (exponent & 1)
            result = result * base;
        exponent >>= 1;
        if (exponent)
            base = base * base;
    }
    return result;
}

void WeilElement::require_same_algebra(const WeilElement &o) const {
    if (algebra_.impl() != o.algebra_.impl() && algebra_ != o.algebra_)
        throw WeilError("elements belong to different algebras");
}

WeilElement WeilElement::operator-() const {
    WeilElement out = *this;
    for (auto &c : out.coeffs_)
        c = -c;
    return out;
}

WeilElement &WeilElement::operator+=(const WeilElement &o) {
    require_same_algebra(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        coeffs_[i] += o.coeffs_[i];
    return *this;
}

WeilElement &WeilElement::operator-=(const WeilElement &o) {
    require_same_algebra(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        coeffs_[i] -= o.coeffs_[i];
    return *this;
}

WeilElement &WeilElement::operator*=(const Scalar &s) {
    for (auto &c : coeffs_)
        c *= s;
    return *this;
}

WeilElement operator*(const WeilElement &a, const WeilElement &b) {
    a.require_same_algebra(b);
    const auto &alg = a.algebra_;
    const std::size_t n = alg.dimension();
    ScalarMode mode = a.mode();
    if (b.mode() != mode)
        throw ModeError("mixed exact/float Weil element product");
    Vector out(n, Scalar::zero(mode));
    for (std::size_t i = 0; i < n; ++i) {
        if (a.coeffs_[i].is_zero())
            continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (b.coeffs_[j].is_zero())
                continue;
            Scalar ab = a.coeffs_[i] * b.coeffs_[j];
            for (const auto &e : alg.product(i, j)) {
                if (e.coeff == 1)
                    out[e.index] += ab;
                else
                    out[e.index] += Scalar::from_rational(e.coeff, mode) * ab;
            }
        }
    }
    return WeilElement(alg, std::move(out));
}

bool operator==(const WeilElement &a, const WeilElement &b) {
    return a.algebra_ == b.algebra_ && a.coeffs_ == b.coeffs_;
}

std::string WeilElement::str() const {
    std::string out;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i].is_zero())
            continue;
        std::string c = coeffs_[i].str();
        std::string term = i == 0 ? c : (c == "1" ? "" : c + "*") + algebra_.basis_label(i);
        if (!out.empty())
            out += " + ";
        out += term;
    }
    return out.empty() ? "0" : out;
}

std::ostream &operator<<(std::ostream &os, const WeilElement &e) { return os << e.str(); }

} // namespace weilkit

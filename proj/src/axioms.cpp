#include "weilkit/axioms.hpp"

#include "weilkit/polynomial.hpp"

#include <sstream>

namespace weilkit {

namespace {

QVector unit_vector(std::size_t n, std::size_t i) {
    QVector e(n, 0);
    e[i] = 1;
    return e;
}

// v (x) e_i in coordinates c*n + i.
QVector kron(const QVector &v, std::size_t n, std::size_t i) {
    QVector out(v.size() * n, 0);
    for (std::size_t c = 0; c < v.size(); ++c)
        out[c * n + i] = v[c];
    return out;
}

QVector concat(const std::vector<QVector> &parts) {
    QVector out;
    for (const auto &p : parts)
        out.insert(out.end(), p.begin(), p.end());
    return out;
}

QVector subtract(QVector a, const QVector &b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        a[i] -= b[i];
    return a;
}

std::string join_dims(const std::vector<WeilAlgebra> &objs) {
    std::ostringstream os;
    for (std::size_t i = 0; i < objs.size(); ++i)
        os << (i ? ", " : "") << objs[i].describe();
    return os.str();
}

} // namespace

QMatrix tensor_equations(const QMatrix &c, std::size_t n) {
    QMatrix out(c.rows() * n, c.cols() * n);
    for (std::size_t r = 0; r < c.rows(); ++r)
        for (std::size_t col = 0; col < c.cols(); ++col)
            if (c(r, col) != 0)
                for (std::size_t i = 0; i < n; ++i)
                    out(r * n + i, col * n + i) = c(r, col);
    return out;
}

QVector tensor_rhs(const QVector &c, std::size_t n) {
    QVector out(c.size() * n, 0);
    for (std::size_t r = 0; r < c.size(); ++r)
        out[r * n] = c[r];
    return out;
}

QMatrix coordinatewise(const QMatrix &m, std::size_t d) {
    QMatrix out(d * m.rows(), d * m.cols());
    for (std::size_t c = 0; c < d; ++c)
        for (std::size_t r = 0; r < m.rows(); ++r)
            for (std::size_t s = 0; s < m.cols(); ++s)
                out(c * m.rows() + r, c * m.cols() + s) = m(r, s);
    return out;
}

// ---------------------------------------------------------------------------
// ModelObject

ModelObject ModelObject::coordinate(std::size_t d) {
    ModelObject x = affine(QMatrix(0, d), {}, "R^" + std::to_string(d));
    x.kind_ = Kind::Coordinate;
    return x;
}

ModelObject ModelObject::affine(QMatrix equations, QVector rhs, std::string description) {
    if (equations.rows() != rhs.size())
        throw std::invalid_argument("affine object: equation and right-hand side sizes differ");
    ModelObject x;
    x.kind_ = Kind::Affine;
    x.ambient_ = equations.cols();
    if (equations.rows() == 0)
        x.base_point_ = QVector(x.ambient_, 0);
    else
        x.base_point_ = solve_particular(equations, rhs);
    x.equations_ = std::move(equations);
    x.rhs_ = std::move(rhs);
    x.description_ = std::move(description);
    return x;
}

ModelObject ModelObject::limit_of(const ObjectDiagram &d) {
    std::vector<std::size_t> offset;
    std::size_t total = 0;
    for (const auto &o : d.objects) {
        offset.push_back(total);
        total += o.ambient();
    }
    std::vector<QVector> rows;
    QVector rhs;
    for (std::size_t k = 0; k < d.objects.size(); ++k) {
        const auto &o = d.objects[k];
        for (std::size_t r = 0; r < o.equations().rows(); ++r) {
            QVector row(total, 0);
            for (std::size_t c = 0; c < o.ambient(); ++c)
                row[offset[k] + c] = o.equations()(r, c);
            rows.push_back(std::move(row));
            rhs.push_back(o.rhs()[r]);
        }
    }
    for (const auto &a : d.arrows) {
        if (a.source >= d.objects.size() || a.target >= d.objects.size())
            throw WeilError("limit_of: arrow endpoint out of range");
        const auto &src = d.objects[a.source];
        const auto &tgt = d.objects[a.target];
        if (a.map.arity_in() != src.ambient() || a.map.arity_out() != tgt.ambient())
            throw WeilError("limit_of: arrow " + a.map.str() + " does not match its endpoints");
        auto form = affine_form(a.map);
        if (!form)
            throw WeilError("limit_of: arrow " + a.map.str() + " is not affine");
        for (std::size_t r = 0; r < tgt.ambient(); ++r) {
            QVector row(total, 0);
            for (std::size_t c = 0; c < src.ambient(); ++c)
                row[offset[a.source] + c] += form->linear(r, c);
            row[offset[a.target] + r] -= 1;
            rows.push_back(std::move(row));
            rhs.push_back(-form->offset[r]);
        }
    }
    QMatrix eq(rows.size(), total);
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < total; ++c)
            eq(r, c) = rows[r][c];
    std::ostringstream desc;
    desc << "lim(";
    for (std::size_t k = 0; k < d.objects.size(); ++k)
        desc << (k ? ", " : "") << d.objects[k].describe();
    desc << "; " << d.arrows.size() << " arrows)";
    ModelObject x = affine(std::move(eq), std::move(rhs), desc.str());
    x.kind_ = Kind::LimitOf;
    x.diagram_ = std::make_shared<const ObjectDiagram>(d);
    return x;
}

ModelObject ModelObject::tensor_with(const ModelObject &x, const WeilAlgebra &w) {
    const std::size_t n = w.dimension();
    ModelObject out = affine(tensor_equations(x.equations_, n), tensor_rhs(x.rhs_, n),
                             "(" + x.describe() + ") (x) " + w.describe());
    out.kind_ = Kind::TensorWith;
    return out;
}

ModelObject ModelObject::exponential(const ModelObject &x, const InfinitesimalExponent &y) {
    ModelObject out = tensor_with(x, y.algebra);
    out.kind_ = Kind::Exponential;
    out.description_ = "(" + x.describe() + ")^Spec " + y.algebra.describe();
    return out;
}

Subspace ModelObject::directions() const {
    if (equations_.rows() == 0) {
        std::vector<QVector> basis;
        for (std::size_t i = 0; i < ambient_; ++i)
            basis.push_back(unit_vector(ambient_, i));
        return Subspace::span(ambient_, basis);
    }
    return Subspace::kernel(equations_);
}

bool ModelObject::contains(std::span<const Rational> z) const {
    if (z.size() != ambient_)
        return false;
    for (std::size_t r = 0; r < equations_.rows(); ++r) {
        Rational acc = 0;
        for (std::size_t c = 0; c < ambient_; ++c)
            acc += equations_(r, c) * z[c];
        if (acc != rhs_[r])
            return false;
    }
    return true;
}

bool ModelObject::contains(const WeilPoint &x) const {
    if (x.dimension() != ambient_ || x.mode() != ScalarMode::ExactRational)
        return false;
    const std::size_t n = x.algebra().dimension();
    QVector flat;
    for (const auto &s : x.flatten())
        flat.push_back(s.rational());
    QMatrix eq = tensor_equations(equations_, n);
    QVector rhs = tensor_rhs(rhs_, n);
    QVector lhs = eq * flat;
    return lhs == rhs;
}

WeilPoint ModelObject::sample(Sampler &s, const WeilAlgebra &w) const {
    if (!base_point_)
        throw WeilError("cannot sample the empty object " + description_);
    const std::size_t n = w.dimension();
    QVector z = kron(*base_point_, n, 0);
    Subspace dirs = directions();
    for (const auto &v : dirs.basis())
        for (std::size_t i = 0; i < n; ++i) {
            Rational r = s.small_rational();
            for (std::size_t c = 0; c < ambient_; ++c)
                z[c * n + i] += r * v[c];
        }
    Vector flat;
    for (const auto &q : z)
        flat.emplace_back(q);
    return WeilPoint::unflatten(w, ambient_, flat);
}

// ---------------------------------------------------------------------------
// Microlinearity

std::string MicrolinearCertificate::summary() const {
    std::ostringstream os;
    os << (microlinear ? "limit" : "not a limit") << ": dim X(x)apex=" << apex_dimension
       << ", dim lim X(x)D=" << limit_dimension << ", rank=" << rank;
    if (!reason.empty())
        os << "; " << reason;
    return os.str();
}

DiagramInWeil with_terminal(const DiagramInWeil &d) {
    DiagramInWeil out = d;
    const std::size_t t = out.objects.size();
    out.objects.push_back(WeilAlgebra::k());
    for (std::size_t i = 0; i < t; ++i)
        out.arrows.push_back({i, t, augmentation(d.objects[i])});
    if (out.cone)
        out.cone->legs.push_back(augmentation(out.cone->apex));
    return out;
}

MicrolinearCertificate check_microlinear(const ModelObject &x, const DiagramInWeil &d, const SampleSpec &samples) {
    MicrolinearCertificate cert;
    d.validate();
    if (!d.cone) {
        cert.reason = "rejected: diagram has no cone";
        return cert;
    }
    const Cone &cone = *d.cone;
    if (!d.cone_commutes(cone)) {
        cert.reason = "rejected: cone does not commute";
        return cert;
    }
    LimitCertificate lc = is_limit_cone(d);
    cert.cone_is_limit = lc.is_limit;

    if (x.is_empty()) {
        cert.microlinear = cert.cone_is_limit;
        cert.reason = cert.cone_is_limit ? "X is empty" : "rejected: input cone is not a limit (" + lc.reason + ")";
        return cert;
    }

    // Weil_k has k as terminal object; spelling it out with the augmentations
    // leaves the limit unchanged but is what X (x) - has to preserve.
    const DiagramInWeil full = with_terminal(d);

    const std::size_t N = x.ambient();
    const Subspace dir = x.directions();

    // Directions of X (x) apex.
    const std::size_t na = full.cone->apex.dimension();
    std::vector<QVector> apex_dirs;
    for (const auto &v : dir.basis())
        for (std::size_t i = 0; i < na; ++i)
            apex_dirs.push_back(kron(v, na, i));

    // Directions of lim(X (x) D) inside the product of the X (x) W_i.
    std::vector<std::size_t> offset;
    std::size_t total = 0;
    for (const auto &w : full.objects) {
        offset.push_back(total);
        total += N * w.dimension();
    }
    std::vector<QVector> rows;
    for (std::size_t k = 0; k < full.objects.size(); ++k) {
        const std::size_t n = full.objects[k].dimension();
        QMatrix eq = tensor_equations(x.equations(), n);
        for (std::size_t r = 0; r < eq.rows(); ++r) {
            QVector row(total, 0);
            for (std::size_t c = 0; c < eq.cols(); ++c)
                row[offset[k] + c] = eq(r, c);
            rows.push_back(std::move(row));
        }
    }
    for (const auto &a : full.arrows) {
        QMatrix act = coordinatewise(a.morphism.matrix(), N);
        for (std::size_t r = 0; r < act.rows(); ++r) {
            QVector row(total, 0);
            for (std::size_t c = 0; c < act.cols(); ++c)
                row[offset[a.source] + c] += act(r, c);
            row[offset[a.target] + r] -= 1;
            rows.push_back(std::move(row));
        }
    }
    Subspace lim(total);
    if (rows.empty()) {
        std::vector<QVector> basis;
        for (std::size_t i = 0; i < total; ++i)
            basis.push_back(unit_vector(total, i));
        lim = Subspace::span(total, basis);
    } else {
        QMatrix m(rows.size(), total);
        for (std::size_t r = 0; r < rows.size(); ++r)
            for (std::size_t c = 0; c < total; ++c)
                m(r, c) = rows[r][c];
        lim = Subspace::kernel(m);
    }

    // The canonical map on directions, one column per apex direction.
    std::vector<QMatrix> leg_actions;
    for (const auto &leg : full.cone->legs)
        leg_actions.push_back(coordinatewise(leg.matrix(), N));
    std::vector<QVector> images;
    for (const auto &v : apex_dirs) {
        std::vector<QVector> parts;
        for (const auto &act : leg_actions)
            parts.push_back(act * v);
        images.push_back(concat(parts));
    }
    cert.apex_dimension = apex_dirs.size();
    cert.limit_dimension = lim.dimension();
    QMatrix canonical = from_columns(total, images);
    cert.rank = images.empty() ? 0 : rank(canonical);

    for (const auto &img : images)
        if (!lim.contains(img)) {
            cert.reason = "canonical map leaves the limit";
            return cert;
        }

    bool iso = cert.rank == cert.apex_dimension && cert.rank == cert.limit_dimension;
    if (!iso) {
        if (cert.rank < cert.apex_dimension) {
            auto ker = kernel_basis(canonical);
            QVector w(N * na, 0);
            for (std::size_t j = 0; j < apex_dirs.size(); ++j)
                for (std::size_t c = 0; c < w.size(); ++c)
                    w[c] += ker.front()[j] * apex_dirs[j][c];
            cert.witness = w;
            cert.reason = "canonical map collapses a direction of X(x)apex";
        } else {
            Subspace image = Subspace::span(total, images);
            for (const auto &b : lim.basis())
                if (!image.contains(b)) {
                    cert.witness = b;
                    break;
                }
            cert.reason = "canonical map misses a direction of the limit";
        }
    }

    // Sampled points of X (x) apex land in every X (x) W_i and commute.
    Sampler rng(samples.seed);
    for (std::size_t k = 0; k < samples.count && iso; ++k) {
        WeilPoint p = x.sample(rng, full.cone->apex);
        std::vector<WeilPoint> legs;
        for (const auto &leg : full.cone->legs) {
            legs.push_back(alpha(leg, p));
            if (!x.contains(legs.back())) {
                iso = false;
                cert.reason = "a leg maps a sample outside X(x)W";
            }
        }
        for (const auto &a : full.arrows)
            if (iso && !(alpha(a.morphism, legs[a.source]) == legs[a.target])) {
                iso = false;
                cert.reason = "sampled cone point does not commute";
            }
    }

    cert.microlinear = iso && cert.cone_is_limit;
    if (!cert.cone_is_limit)
        cert.reason = "rejected: input cone is not a limit (" + lc.reason + ")" +
                      (cert.reason.empty() ? "" : "; " + cert.reason);
    return cert;
}

// ---------------------------------------------------------------------------
// Weil exponentiability

// (W1 (x) W2) (x) Wy -> W1 (x) (W2 (x) Wy) -> W1 (x) (Wy (x) W2) -> (W1 (x) Wy) (x) W2.
ExponentIso exponent_iso(const TensorProduct &w12, const WeilAlgebra &wy) {
    const WeilAlgebra w1 = w12.algebra.tensor_left();
    const WeilAlgebra w2 = w12.algebra.tensor_right();
    TensorProduct lhs = tensor(w12.algebra, wy);
    TensorProduct w2y = tensor(w2, wy);
    TensorProduct mid = tensor(w1, w2y.algebra);
    TensorProduct wy2 = tensor(wy, w2);
    TensorProduct mid2 = tensor(w1, wy2.algebra);
    TensorProduct w1y = tensor(w1, wy);
    TensorProduct rhs = tensor(w1y.algebra, w2);

    WeilMorphism a = associator(lhs.algebra, mid.algebra);
    WeilMorphism s = tensor_morphism(WeilMorphism::identity(w1), symmetry(w2y.algebra, wy2.algebra), mid.algebra,
                                     mid2.algebra);
    WeilMorphism b = associator(rhs.algebra, mid2.algebra);
    auto b_inv = inverse(b.matrix());
    if (!b_inv)
        throw WeilError("associator is not invertible");
    WeilMorphism sigma = compose(WeilMorphism::from_matrix(mid2.algebra, rhs.algebra, *b_inv), compose(s, a));
    auto s_inv = inverse(sigma.matrix());
    if (!s_inv)
        throw WeilError("canonical map is not invertible");
    WeilMorphism sigma_inverse = WeilMorphism::from_matrix(rhs.algebra, lhs.algebra, *s_inv);
    return {w12, lhs, w1y, rhs, sigma, sigma_inverse};
}

ExponentIso exponent_iso(const WeilAlgebra &w1, const WeilAlgebra &w2, const WeilAlgebra &wy) {
    return exponent_iso(tensor(w1, w2), wy);
}

ReportEntry check_weil_exponentiable(const ModelObject &x, const InfinitesimalExponent &y, const WeilAlgebra &w1,
                                     const WeilAlgebra &w2, const SampleSpec &samples) {
    const WeilAlgebra &wy = y.algebra;
    std::string instance = "X=" + x.describe() + "; Y=Spec " + wy.describe() + "; W1=" + w1.describe() +
                           "; W2=" + w2.describe();
    if (wy.dimension() == 1)
        instance += " (Y=1)";
    if (w1.dimension() == 1)
        instance += " (W1=k)";
    if (x.is_empty())
        return {"weil-exponentiable", instance, true, "X is empty; both sides empty"};

    ExponentIso iso = exponent_iso(w1, w2, wy);
    std::vector<std::string> problems;
    if (!(compose(iso.sigma, compose(iso.lhs.left, iso.w12.left)) == compose(iso.rhs.left, iso.w1y.left)))
        problems.push_back("iso does not fix the W1 factor");
    if (!(compose(iso.sigma, compose(iso.lhs.left, iso.w12.right)) == iso.rhs.right))
        problems.push_back("iso does not fix the W2 factor");
    if (!(compose(iso.sigma, iso.lhs.right) == compose(iso.rhs.left, iso.w1y.right)))
        problems.push_back("iso does not fix the exponent factor");

    Sampler rng(samples.seed);
    std::size_t agreed = 0;
    for (std::size_t k = 0; k < samples.count; ++k) {
        WeilPoint p = x.sample(rng, iso.lhs.algebra);
        SmoothMap f = rng.polynomial_map(x.ambient(), 1, 2);
        WeilPoint q = alpha(iso.sigma, p);
        std::string bad;
        if (!x.contains(q))
            bad = "image leaves X(x)W";
        else if (!(alpha(iso.sigma_inverse, q) == p))
            bad = "inverse does not recover the point";
        else {
            WeilPoint fp = lift_eval(f, p);
            WeilPoint fq = lift_eval(f, q);
            if (!(alpha(iso.sigma, fp) == fq))
                bad = "iso is not natural for " + f.str();
            else if (!(unreassociate(lift_eval(lift_map(f, iso.w12.algebra), reassociate(p)), iso.lhs.algebra) == fp))
                bad = "left side differs from its nested reading";
            else if (!(unreassociate(lift_eval(lift_map(f, iso.w1y.algebra), reassociate(q)), iso.rhs.algebra) == fq))
                bad = "right side differs from its nested reading";
        }
        if (bad.empty())
            ++agreed;
        else if (problems.size() < 3)
            problems.push_back(bad + " at x=" + p.str());
    }
    std::ostringstream cert;
    cert << agreed << "/" << samples.count << " samples agree exactly through the canonical iso (dim "
         << iso.lhs.algebra.dimension() << ")";
    for (const auto &p : problems)
        cert << "; " << p;
    return {"weil-exponentiable", instance, problems.empty() && agreed == samples.count, cert.str()};
}

// ---------------------------------------------------------------------------
// Double limits

namespace {

struct AffineSet {
    bool empty = false;
    QVector point;
    std::vector<QVector> dirs;
};

struct Row {
    QVector coeffs;
    Rational rhs;
};

// Solve rows restricted to the given columns; the result is in global coordinates.
AffineSet solve_on(const std::vector<const Row *> &rows, const std::vector<std::size_t> &cols, std::size_t total) {
    AffineSet out;
    out.point.assign(total, 0);
    QMatrix m(rows.size(), cols.size());
    QVector rhs;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < cols.size(); ++c)
            m(r, c) = rows[r]->coeffs[cols[c]];
        rhs.push_back(rows[r]->rhs);
    }
    std::vector<QVector> local_dirs;
    QVector local_point(cols.size(), 0);
    if (rows.empty()) {
        for (std::size_t c = 0; c < cols.size(); ++c)
            local_dirs.push_back(unit_vector(cols.size(), c));
    } else {
        auto p = solve_particular(m, rhs);
        if (!p) {
            out.empty = true;
            return out;
        }
        local_point = *p;
        local_dirs = kernel_basis(m);
    }
    for (std::size_t c = 0; c < cols.size(); ++c)
        out.point[cols[c]] = local_point[c];
    for (const auto &v : local_dirs) {
        QVector g(total, 0);
        for (std::size_t c = 0; c < cols.size(); ++c)
            g[cols[c]] = v[c];
        out.dirs.push_back(std::move(g));
    }
    return out;
}

// Impose further rows on an affine set.
AffineSet impose(const AffineSet &a, const std::vector<const Row *> &rows, std::size_t total) {
    if (a.empty || rows.empty())
        return a;
    AffineSet out;
    QMatrix m(rows.size(), a.dirs.size());
    QVector rhs;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        Rational at_point = 0;
        for (std::size_t c = 0; c < total; ++c)
            at_point += rows[r]->coeffs[c] * a.point[c];
        rhs.push_back(rows[r]->rhs - at_point);
        for (std::size_t j = 0; j < a.dirs.size(); ++j) {
            Rational acc = 0;
            for (std::size_t c = 0; c < total; ++c)
                acc += rows[r]->coeffs[c] * a.dirs[j][c];
            m(r, j) = acc;
        }
    }
    out.point = a.point;
    if (a.dirs.empty()) {
        for (const auto &q : rhs)
            if (q != 0) {
                out.empty = true;
                return out;
            }
        return out;
    }
    auto c0 = solve_particular(m, rhs);
    if (!c0) {
        out.empty = true;
        return out;
    }
    for (std::size_t j = 0; j < a.dirs.size(); ++j)
        for (std::size_t c = 0; c < total; ++c)
            out.point[c] += (*c0)[j] * a.dirs[j][c];
    for (const auto &k : kernel_basis(m)) {
        QVector g(total, 0);
        for (std::size_t j = 0; j < a.dirs.size(); ++j)
            for (std::size_t c = 0; c < total; ++c)
                g[c] += k[j] * a.dirs[j][c];
        out.dirs.push_back(std::move(g));
    }
    return out;
}

AffineSet two_stage(const std::vector<std::vector<const Row *>> &first, const std::vector<std::vector<std::size_t>> &cols,
                    const std::vector<const Row *> &second, std::size_t total) {
    AffineSet acc;
    acc.point.assign(total, 0);
    for (std::size_t g = 0; g < first.size(); ++g) {
        AffineSet part = solve_on(first[g], cols[g], total);
        if (part.empty)
            return part;
        for (std::size_t c = 0; c < total; ++c)
            acc.point[c] += part.point[c];
        acc.dirs.insert(acc.dirs.end(), part.dirs.begin(), part.dirs.end());
    }
    return impose(acc, second, total);
}

} // namespace

ReportEntry check_double_limit(const ObjectDiagram &objects, const DiagramInWeil &d) {
    d.validate();
    const std::size_t L = objects.objects.size(), G = d.objects.size();
    std::vector<std::vector<std::size_t>> offset(L, std::vector<std::size_t>(G));
    std::size_t total = 0;
    for (std::size_t l = 0; l < L; ++l)
        for (std::size_t g = 0; g < G; ++g) {
            offset[l][g] = total;
            total += objects.objects[l].ambient() * d.objects[g].dimension();
        }

    // Each row is tagged with the (object, algebra) slot it lives in; -1 for "all".
    struct Tagged {
        Row row;
        long l, g;
    };
    std::vector<Tagged> rows;
    for (std::size_t l = 0; l < L; ++l) {
        const auto &x = objects.objects[l];
        for (std::size_t g = 0; g < G; ++g) {
            const std::size_t n = d.objects[g].dimension();
            QMatrix eq = tensor_equations(x.equations(), n);
            QVector rhs = tensor_rhs(x.rhs(), n);
            for (std::size_t r = 0; r < eq.rows(); ++r) {
                Row row{QVector(total, 0), rhs[r]};
                for (std::size_t c = 0; c < eq.cols(); ++c)
                    row.coeffs[offset[l][g] + c] = eq(r, c);
                rows.push_back({std::move(row), long(l), long(g)});
            }
        }
    }
    for (const auto &a : objects.arrows) {
        auto form = affine_form(a.map);
        if (!form)
            throw WeilError("double limit: arrow " + a.map.str() + " is not affine");
        for (std::size_t g = 0; g < G; ++g) {
            const std::size_t n = d.objects[g].dimension();
            QMatrix lin = tensor_equations(form->linear, n);
            QVector off = tensor_rhs(form->offset, n);
            for (std::size_t r = 0; r < lin.rows(); ++r) {
                Row row{QVector(total, 0), -off[r]};
                for (std::size_t c = 0; c < lin.cols(); ++c)
                    row.coeffs[offset[a.source][g] + c] += lin(r, c);
                row.coeffs[offset[a.target][g] + r] -= 1;
                rows.push_back({std::move(row), -1, long(g)});
            }
        }
    }
    for (const auto &a : d.arrows)
        for (std::size_t l = 0; l < L; ++l) {
            QMatrix act = coordinatewise(a.morphism.matrix(), objects.objects[l].ambient());
            for (std::size_t r = 0; r < act.rows(); ++r) {
                Row row{QVector(total, 0), 0};
                for (std::size_t c = 0; c < act.cols(); ++c)
                    row.coeffs[offset[l][a.source] + c] += act(r, c);
                row.coeffs[offset[l][a.target] + r] -= 1;
                rows.push_back({std::move(row), long(l), -1});
            }
        }

    auto block_cols = [&](std::size_t l, std::size_t g) {
        std::vector<std::size_t> cols;
        const std::size_t size = objects.objects[l].ambient() * d.objects[g].dimension();
        for (std::size_t i = 0; i < size; ++i)
            cols.push_back(offset[l][g] + i);
        return cols;
    };

    // Objects first: for each algebra, the limit over the object diagram.
    std::vector<std::vector<const Row *>> first_a(G);
    std::vector<std::vector<std::size_t>> cols_a(G);
    std::vector<const Row *> second_a;
    for (std::size_t g = 0; g < G; ++g)
        for (std::size_t l = 0; l < L; ++l) {
            auto c = block_cols(l, g);
            cols_a[g].insert(cols_a[g].end(), c.begin(), c.end());
        }
    // Algebras first: for each object, the limit over the Weil diagram.
    std::vector<std::vector<const Row *>> first_b(L);
    std::vector<std::vector<std::size_t>> cols_b(L);
    std::vector<const Row *> second_b;
    for (std::size_t l = 0; l < L; ++l)
        for (std::size_t g = 0; g < G; ++g) {
            auto c = block_cols(l, g);
            cols_b[l].insert(cols_b[l].end(), c.begin(), c.end());
        }
    for (const auto &t : rows) {
        if (t.g >= 0)
            first_a[t.g].push_back(&t.row);
        else
            second_a.push_back(&t.row);
        if (t.l >= 0)
            first_b[t.l].push_back(&t.row);
        else
            second_b.push_back(&t.row);
    }

    AffineSet a = two_stage(first_a, cols_a, second_a, total);
    AffineSet b = two_stage(first_b, cols_b, second_b, total);

    std::ostringstream inst;
    inst << L << " objects, " << objects.arrows.size() << " arrows; Weil diagram [" << join_dims(d.objects) << "], "
         << d.arrows.size() << " arrows";
    bool pass;
    std::ostringstream cert;
    if (a.empty || b.empty) {
        pass = a.empty == b.empty;
        cert << "objects-first " << (a.empty ? "empty" : "nonempty") << ", algebras-first "
             << (b.empty ? "empty" : "nonempty");
    } else {
        Subspace sa = Subspace::span(total, a.dirs), sb = Subspace::span(total, b.dirs);
        bool same_dirs = sa == sb;
        bool same_point = sa.contains(subtract(a.point, b.point));
        pass = same_dirs && same_point;
        cert << "objects-first dim " << sa.dimension() << ", algebras-first dim " << sb.dimension() << " in Q^"
             << total << (pass ? "; equal affine subspaces" : "; subspaces differ");
    }
    return {"double-limit", inst.str(), pass, cert.str()};
}

// ---------------------------------------------------------------------------
// Corpus helpers

DiagramInWeil break_cone(const DiagramInWeil &d) {
    if (!d.cone)
        throw WeilError("break_cone: diagram has no cone");
    DiagramInWeil out = d;
    Cone &c = *out.cone;
    if (c.apex.dimension() > 1) {
        WeilMorphism e = compose(unit_map(c.apex), augmentation(c.apex));
        for (auto &leg : c.legs)
            leg = compose(leg, e);
    } else {
        ProductResult p = product_over_k(c.apex, WeilAlgebra::dual_numbers("e"));
        for (auto &leg : c.legs)
            leg = compose(leg, p.projections[0]);
        c.apex = p.algebra;
    }
    return out;
}

DiagramInWeil random_limit_diagram(Sampler &s, std::size_t max_dim) {
    DiagramInWeil d;
    long shape = s.integer(0, 3);
    std::size_t count = shape == 0 ? 1 : shape == 2 ? 3 : 2;
    for (std::size_t i = 0; i < count; ++i)
        d.objects.push_back(s.presented_algebra(max_dim));
    if (shape == 1) {
        WeilMorphism f = s.morphism(d.objects[0], d.objects[1]);
        WeilMorphism g = s.morphism(d.objects[0], d.objects[1]);
        d.arrows.push_back({0, 1, f});
        d.arrows.push_back({0, 1, g});
    } else if (shape == 2) {
        WeilMorphism f = s.morphism(d.objects[0], d.objects[2]);
        WeilMorphism g = s.morphism(d.objects[1], d.objects[2]);
        d.arrows.push_back({0, 2, f});
        d.arrows.push_back({1, 2, g});
    }
    return with_limit_cone(std::move(d));
}

namespace {

SmoothMap random_affine_map(Sampler &s, std::size_t m, std::size_t n) {
    std::vector<Expr> outs;
    for (std::size_t r = 0; r < n; ++r) {
        Expr e = Expr::constant(s.small_rational());
        for (std::size_t c = 0; c < m; ++c) {
            Rational a = s.small_rational();
            e = e + Expr::constant(a) * Expr::variable(c);
        }
        outs.push_back(e);
    }
    return SmoothMap("a", default_variable_names(m), std::move(outs));
}

} // namespace

ModelObject random_affine_limit(Sampler &s) {
    for (;;) {
        ObjectDiagram d;
        if (s.integer(0, 1) == 0) {
            auto m = static_cast<std::size_t>(s.integer(1, 3));
            d.objects = {ModelObject::coordinate(m), ModelObject::coordinate(1)};
            SmoothMap f = random_affine_map(s, m, 1);
            SmoothMap g = random_affine_map(s, m, 1);
            d.arrows = {{0, 1, f}, {0, 1, g}};
        } else {
            auto m1 = static_cast<std::size_t>(s.integer(1, 2));
            auto m2 = static_cast<std::size_t>(s.integer(1, 2));
            d.objects = {ModelObject::coordinate(m1), ModelObject::coordinate(m2), ModelObject::coordinate(1)};
            SmoothMap f = random_affine_map(s, m1, 1);
            SmoothMap g = random_affine_map(s, m2, 1);
            d.arrows = {{0, 2, f}, {1, 2, g}};
        }
        ModelObject x = ModelObject::limit_of(d);
        if (!x.is_empty())
            return x;
    }
}

// ---------------------------------------------------------------------------
// Closure batteries

namespace {

WeilAlgebra small_algebra(Sampler &s, bool allow_k) {
    switch (s.integer(allow_k ? 0 : 1, 3)) {
    case 0: return WeilAlgebra::k();
    case 1: return WeilAlgebra::dual_numbers();
    case 2: return WeilAlgebra::truncated_line(2);
    default: return WeilAlgebra::first_order(2);
    }
}

ReportEntry microlinear_entry(const std::string &check, const ModelObject &x, const DiagramInWeil &d,
                              const SampleSpec &samples) {
    MicrolinearCertificate c = check_microlinear(x, d, samples);
    return {check, "X=" + x.describe() + "; D=[" + join_dims(d.objects) + "]", c.microlinear, c.summary()};
}

ReportEntry renamed(ReportEntry e, std::string check) {
    e.check = std::move(check);
    return e;
}

} // namespace

Report closure_suite(std::uint64_t seed, std::size_t instances, std::size_t samples) {
    Sampler s(seed);
    Report report;
    for (std::size_t t = 0; t < instances; ++t) {
        DiagramInWeil d = random_limit_diagram(s, 3);
        ModelObject x = t % 2 == 0 ? ModelObject::coordinate(static_cast<std::size_t>(s.integer(1, 2)))
                                   : random_affine_limit(s);
        WeilAlgebra w = small_algebra(s, false);
        InfinitesimalExponent y{small_algebra(s, true)};
        WeilAlgebra w1 = small_algebra(s, true);
        WeilAlgebra w2 = small_algebra(s, false);
        SampleSpec spec{samples, s.next()};

        report.add(microlinear_entry("base-microlinear", x, d, spec));
        report.add(renamed(check_weil_exponentiable(x, y, w1, w2, spec), "base-exponentiable"));

        ModelObject xw = ModelObject::tensor_with(x, w);
        report.add(microlinear_entry("tensor-microlinear", xw, d, spec));
        report.add(renamed(check_weil_exponentiable(xw, y, w1, w2, spec), "tensor-exponentiable"));

        InfinitesimalExponent z{small_algebra(s, false)};
        ModelObject xz = ModelObject::exponential(x, z);
        report.add(microlinear_entry("exponential-microlinear", xz, d, spec));
        report.add(renamed(check_weil_exponentiable(xz, y, w1, w2, spec), "exponential-exponentiable"));

        // Pullback of x and a coordinate space over R^1.
        ObjectDiagram od;
        auto m = static_cast<std::size_t>(s.integer(1, 2));
        od.objects = {x, ModelObject::coordinate(m), ModelObject::coordinate(1)};
        SmoothMap f = random_affine_map(s, x.ambient(), 1);
        SmoothMap g = random_affine_map(s, m, 1);
        od.arrows = {{0, 2, f}, {1, 2, g}};
        ModelObject lim = ModelObject::limit_of(od);
        report.add(microlinear_entry("limit-microlinear", lim, d, spec));
        report.add(renamed(check_weil_exponentiable(lim, y, w1, w2, spec), "limit-exponentiable"));
        report.add(check_double_limit(od, d));
    }
    return report;
}

} // namespace weilkit

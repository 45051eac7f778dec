#include "weilkit/weil_limits.hpp"

#include <sstream>

namespace weilkit {

namespace {

QVector multiply(const WeilAlgebra &a, const QVector &x, const QVector &y) {
    const std::size_t n = a.dimension();
    QVector out(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (sgn(x[i]) == 0)
            continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (sgn(y[j]) == 0)
                continue;
            for (const auto &e : a.product(i, j))
                out[e.index] += e.coeff * x[i] * y[j];
        }
    }
    return out;
}

Rational augment(const WeilAlgebra &a, const QVector &x) {
    Rational s = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
        s += a.augmentation()[i] * x[i];
    return s;
}

// Rows: augmentation, then every leg stacked.
QMatrix stacked_legs(const WeilAlgebra &apex, const std::vector<WeilMorphism> &legs) {
    QMatrix out = augmentation(apex).matrix();
    for (const auto &leg : legs)
        out = vstack(out, leg.matrix());
    return out;
}

} // namespace

Subalgebra subalgebra(const WeilAlgebra &ambient, const std::vector<QVector> &vectors) {
    const std::size_t n = ambient.dimension();
    std::vector<QVector> ideal_part;
    for (const auto &v : vectors) {
        if (v.size() != n)
            throw WeilError("subalgebra generator has wrong length");
        QVector w = v;
        w[0] -= augment(ambient, v);
        if (!is_zero(w))
            ideal_part.push_back(std::move(w));
    }
    Subspace ideal = Subspace::span(n, ideal_part);
    std::vector<QVector> basis;
    QVector one(n);
    one[0] = 1;
    basis.push_back(one);
    for (const auto &b : ideal.basis())
        basis.push_back(b);
    const std::size_t r = basis.size();
    QMatrix embed = from_columns(n, basis);
    Coordinatizer coords(embed);

    TabledData data;
    data.dimension = r;
    data.augmentation.assign(r, 0);
    data.augmentation[0] = 1;
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) {
            auto c = coords.coordinates(multiply(ambient, basis[i], basis[j]));
            if (!c)
                throw WeilError("subspace is not closed under multiplication");
            for (std::size_t k = 0; k < r; ++k)
                if (sgn((*c)[k]) != 0)
                    data.constants.push_back({i, j, k, (*c)[k]});
        }
    WeilAlgebra sub = WeilAlgebra::tabled(data);
    return {sub, WeilMorphism::from_matrix(sub, ambient, std::move(embed))};
}

EqualizerResult equalizer(const WeilMorphism &phi, const WeilMorphism &psi) {
    if (phi.source() != psi.source() || phi.target() != psi.target())
        throw WeilError("equalizer needs parallel morphisms");
    QMatrix diff = phi.matrix();
    for (std::size_t r = 0; r < diff.rows(); ++r)
        for (std::size_t c = 0; c < diff.cols(); ++c)
            diff(r, c) -= psi.matrix()(r, c);
    auto sub = subalgebra(phi.source(), kernel_basis(diff));
    return {sub.algebra, sub.inclusion};
}

ProductResult product_over_k(const std::vector<WeilAlgebra> &factors) {
    std::size_t dim = 1;
    std::vector<std::size_t> offset;
    for (const auto &f : factors) {
        offset.push_back(dim);
        dim += f.dimension() - 1;
    }
    TabledData data;
    data.dimension = dim;
    data.augmentation.assign(dim, 0);
    data.augmentation[0] = 1;
    for (std::size_t j = 0; j < dim; ++j)
        data.constants.push_back({0, j, j, Rational(1)});
    for (std::size_t t = 0; t < factors.size(); ++t) {
        const auto &w = factors[t];
        const std::size_t n = w.dimension();
        auto ideal_vector = [&](std::size_t i) {
            QVector v(n);
            v[i] = 1;
            v[0] -= w.augmentation()[i];
            return v;
        };
        for (std::size_t i = 1; i < n; ++i) {
            data.constants.push_back({offset[t] + i - 1, 0, offset[t] + i - 1, Rational(1)});
            for (std::size_t j = 1; j < n; ++j) {
                QVector p = multiply(w, ideal_vector(i), ideal_vector(j));
                for (std::size_t l = 1; l < n; ++l)
                    if (sgn(p[l]) != 0)
                        data.constants.push_back(
                            {offset[t] + i - 1, offset[t] + j - 1, offset[t] + l - 1, p[l]});
            }
        }
    }
    WeilAlgebra prod = WeilAlgebra::tabled(data);
    if (factors.empty())
        prod = WeilAlgebra::k();
    std::vector<WeilMorphism> projections;
    for (std::size_t t = 0; t < factors.size(); ++t) {
        const auto &w = factors[t];
        QMatrix m(w.dimension(), dim);
        m(0, 0) = 1;
        for (std::size_t i = 1; i < w.dimension(); ++i) {
            m(i, offset[t] + i - 1) = 1;
            m(0, offset[t] + i - 1) = -w.augmentation()[i];
        }
        projections.push_back(WeilMorphism::trusted(prod, w, std::move(m)));
    }
    return {prod, std::move(projections)};
}

ProductResult product_over_k(const WeilAlgebra &w1, const WeilAlgebra &w2) {
    return product_over_k(std::vector<WeilAlgebra>{w1, w2});
}

void DiagramInWeil::validate() const {
    for (std::size_t a = 0; a < arrows.size(); ++a) {
        const auto &arrow = arrows[a];
        if (arrow.source >= objects.size() || arrow.target >= objects.size())
            throw WeilError("arrow " + std::to_string(a) + " refers to a missing object");
        if (arrow.morphism.source() != objects[arrow.source] ||
            arrow.morphism.target() != objects[arrow.target])
            throw WeilError("arrow " + std::to_string(a) + " does not match its endpoint objects");
    }
    if (cone) {
        if (cone->legs.size() != objects.size())
            throw WeilError("cone must have one leg per object");
        for (std::size_t i = 0; i < objects.size(); ++i)
            if (cone->legs[i].source() != cone->apex || cone->legs[i].target() != objects[i])
                throw WeilError("cone leg " + std::to_string(i) + " has wrong endpoints");
    }
}

bool DiagramInWeil::cone_commutes(const Cone &c) const {
    for (const auto &arrow : arrows)
        if (compose(arrow.morphism, c.legs[arrow.source]).matrix() != c.legs[arrow.target].matrix())
            return false;
    return true;
}

LimitResult limit(const DiagramInWeil &d) {
    d.validate();
    auto prod = product_over_k(d.objects);
    QMatrix constraints(0, prod.algebra.dimension());
    for (const auto &arrow : d.arrows) {
        QMatrix block = compose(arrow.morphism, prod.projections[arrow.source]).matrix();
        const QMatrix &rhs = prod.projections[arrow.target].matrix();
        for (std::size_t r = 0; r < block.rows(); ++r)
            for (std::size_t c = 0; c < block.cols(); ++c)
                block(r, c) -= rhs(r, c);
        constraints = vstack(constraints, block);
    }
    std::vector<QVector> generators;
    if (constraints.rows() == 0) {
        for (std::size_t i = 0; i < prod.algebra.dimension(); ++i) {
            QVector e(prod.algebra.dimension());
            e[i] = 1;
            generators.push_back(std::move(e));
        }
    } else {
        generators = kernel_basis(constraints);
    }
    auto sub = subalgebra(prod.algebra, generators);
    std::vector<WeilMorphism> legs;
    for (const auto &p : prod.projections)
        legs.push_back(compose(p, sub.inclusion));
    return {sub.algebra, std::move(legs), sub.inclusion};
}

DiagramInWeil with_limit_cone(DiagramInWeil d) {
    auto lim = limit(d);
    d.cone = Cone{lim.algebra, lim.legs};
    return d;
}

std::string LimitCertificate::summary() const {
    std::ostringstream os;
    os << (is_limit ? "limit" : "not a limit") << " (apex dim " << apex_dimension << ", limit dim "
       << limit_dimension << ", mediating rank " << mediating_rank << ")";
    if (!reason.empty())
        os << ": " << reason;
    return os.str();
}

LimitCertificate is_limit_cone(const DiagramInWeil &d) {
    if (!d.cone)
        throw WeilError("is_limit_cone needs a cone");
    d.validate();
    if (!d.cone_commutes(*d.cone))
        throw WeilError("cone does not commute with the diagram");
    auto lim = limit(d);
    Coordinatizer target(stacked_legs(lim.algebra, lim.legs));
    QMatrix source = stacked_legs(d.cone->apex, d.cone->legs);
    LimitCertificate cert;
    cert.apex_dimension = d.cone->apex.dimension();
    cert.limit_dimension = lim.algebra.dimension();
    cert.mediating = QMatrix(cert.limit_dimension, cert.apex_dimension);
    for (std::size_t c = 0; c < cert.apex_dimension; ++c) {
        auto coords = target.coordinates(source.column(c));
        if (!coords)
            throw WeilError("internal: commuting cone does not factor through the limit");
        cert.mediating.set_column(c, *coords);
    }
    cert.mediating_rank = rank(cert.mediating);
    if (cert.apex_dimension != cert.limit_dimension)
        cert.reason = "dimension mismatch";
    else if (cert.mediating_rank != cert.apex_dimension)
        cert.reason = "mediating map is rank deficient";
    cert.is_limit = cert.apex_dimension == cert.limit_dimension &&
                    cert.mediating_rank == cert.apex_dimension;
    return cert;
}

WeilMorphism mediating_morphism(const Cone &outer, const Cone &limit_cone) {
    if (outer.legs.size() != limit_cone.legs.size())
        throw WeilError("cones have different numbers of legs");
    for (std::size_t i = 0; i < outer.legs.size(); ++i)
        if (outer.legs[i].target() != limit_cone.legs[i].target())
            throw WeilError("cone legs " + std::to_string(i) + " land in different objects");
    QMatrix system = stacked_legs(limit_cone.apex, limit_cone.legs);
    QMatrix rhs = stacked_legs(outer.apex, outer.legs);
    QMatrix m(limit_cone.apex.dimension(), outer.apex.dimension());
    for (std::size_t c = 0; c < outer.apex.dimension(); ++c) {
        auto col = rhs.column(c);
        auto result = solve_unique(system, col);
        if (result.status == SolveStatus::NoSolution)
            throw MediationError(MediationError::Kind::NoSolution,
                                 "cones are incompatible: no mediating morphism exists");
        if (result.status == SolveStatus::NotUnique)
            throw MediationError(MediationError::Kind::NotUnique,
                                 "mediating morphism is not unique: target cone is not a limit");
        m.set_column(c, result.solution);
    }
    return WeilMorphism::from_matrix(outer.apex, limit_cone.apex, std::move(m));
}

WeilMorphism induced_map_between_equalizers(const EqualizerResult &z1, const WeilMorphism &g1,
                                            const WeilMorphism &h1, const EqualizerResult &z2,
                                            const WeilMorphism &g2, const WeilMorphism &h2,
                                            const WeilMorphism &f, const WeilMorphism &fbar) {
    if (compose(fbar, g1).matrix() != compose(g2, f).matrix() ||
        compose(fbar, h1).matrix() != compose(h2, f).matrix())
        throw WeilError("the squares relating the parallel pairs do not commute");
    WeilMorphism into_x2 = compose(f, z1.inclusion);
    Cone outer{z1.algebra, {into_x2, compose(g2, into_x2)}};
    Cone target{z2.algebra, {z2.inclusion, compose(g2, z2.inclusion)}};
    return mediating_morphism(outer, target);
}

bool isomorphic_over(const WeilMorphism &a_into, const WeilMorphism &b_into) {
    if (a_into.target() != b_into.target())
        return false;
    if (a_into.source().dimension() != b_into.source().dimension())
        return false;
    QMatrix m(b_into.source().dimension(), a_into.source().dimension());
    try {
        Coordinatizer coords(b_into.matrix());
        for (std::size_t c = 0; c < m.cols(); ++c) {
            auto x = coords.coordinates(a_into.matrix().column(c));
            if (!x)
                return false;
            m.set_column(c, *x);
        }
    } catch (const std::invalid_argument &) {
        return false;
    }
    if (rank(m) != m.rows())
        return false;
    try {
        (void)WeilMorphism::from_matrix(a_into.source(), b_into.source(), m);
    } catch (const WeilError &) {
        return false;
    }
    return true;
}

} // namespace weilkit

#include "weilkit/sampling.hpp"

namespace weilkit {

long Sampler::integer(long lo, long hi) {
    auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<long>(rng_() % span);
}

Rational Sampler::small_rational() {
    long num = integer(-7, 7);
    long den = integer(1, 7);
    Rational q(num, den);
    q.canonicalize();
    return q;
}

Rational Sampler::positive_rational() {
    long num = integer(1, 7);
    long den = integer(1, 7);
    Rational q(num, den);
    q.canonicalize();
    return q;
}

Scalar Sampler::scalar(ScalarMode mode) { return Scalar::from_rational(small_rational(), mode); }

QVector Sampler::rational_vector(std::size_t n) {
    QVector v(n);
    for (auto &x : v)
        x = small_rational();
    return v;
}

WeilElement Sampler::element(const WeilAlgebra &w, ScalarMode mode, bool positive_constant) {
    QVector c(w.dimension());
    for (auto &x : c)
        x = small_rational();
    if (positive_constant) {
        // Choose c[0] so that the augmentation is a positive draw.
        Rational rest = 0;
        for (std::size_t i = 1; i < c.size(); ++i)
            rest += w.augmentation()[i] * c[i];
        c[0] = positive_rational() - rest;
    }
    return WeilElement::from_rationals(w, c, mode);
}

WeilPoint Sampler::point(const WeilAlgebra &w, std::size_t d, ScalarMode mode, bool positive_constant) {
    std::vector<WeilElement> coords;
    for (std::size_t i = 0; i < d; ++i)
        coords.push_back(element(w, mode, positive_constant));
    return WeilPoint(w, std::move(coords), mode);
}

Expr Sampler::polynomial(std::size_t m, unsigned depth) {
    auto leaf = [&]() -> Expr {
        if (m == 0 || integer(0, 3) == 0)
            return Expr::constant(small_rational());
        return Expr::variable(static_cast<std::size_t>(integer(0, static_cast<long>(m) - 1)));
    };
    if (depth == 0)
        return leaf();
    // Operands are drawn in a fixed order; argument evaluation order is
    // unspecified, and the draws must not depend on the compiler.
    long kind = integer(0, 6);
    if (kind >= 6)
        return leaf();
    Expr a = polynomial(m, depth - 1);
    switch (kind) {
    case 4: return Expr::pow(a, integer(2, 3));
    case 5: return -a;
    default: break;
    }
    Expr b = polynomial(m, depth - 1);
    if (kind == 0)
        return a + b;
    if (kind == 1)
        return a - b;
    return a * b;
}

SmoothMap Sampler::polynomial_map(std::size_t m, std::size_t n, unsigned depth) {
    std::vector<Expr> out;
    for (std::size_t i = 0; i < n; ++i)
        out.push_back(polynomial(m, depth));
    return SmoothMap("f", default_variable_names(m), std::move(out));
}

WeilAlgebra Sampler::presented_algebra(std::size_t max_dim) {
    static const char *names[] = {"x", "y", "z"};
    for (;;) {
        auto ng = static_cast<std::size_t>(integer(1, 3));
        std::vector<std::string> gens(names, names + ng);
        std::vector<Exponents> rels;
        std::size_t box = 1;
        for (std::size_t i = 0; i < ng; ++i) {
            Exponents e(ng, 0);
            e[i] = static_cast<unsigned>(integer(2, 4));
            box *= e[i];
            rels.push_back(e);
        }
        if (box > 3 * max_dim)
            continue;
        long mixed = integer(0, 2);
        for (long t = 0; t < mixed && ng > 1; ++t) {
            auto a = static_cast<std::size_t>(integer(0, static_cast<long>(ng) - 1));
            auto b = static_cast<std::size_t>(integer(0, static_cast<long>(ng) - 1));
            if (a == b)
                continue;
            Exponents e(ng, 0);
            e[a] = static_cast<unsigned>(integer(1, 2));
            e[b] = 1;
            rels.push_back(e);
        }
        WeilAlgebra w = WeilAlgebra::presented(gens, rels);
        if (w.dimension() <= max_dim)
            return w;
    }
}

WeilMorphism Sampler::morphism(const WeilAlgebra &source, const WeilAlgebra &target) {
    for (int attempt = 0; attempt < 60; ++attempt) {
        std::vector<WeilElement> images;
        for (std::size_t g = 0; g < source.generators().size(); ++g) {
            QVector c(target.dimension(), 0);
            if (integer(0, 3) != 0)
                for (std::size_t i = 1; i < c.size(); ++i)
                    if (integer(0, 1))
                        c[i] = integer(-2, 2);
            Rational a = 0;
            for (std::size_t i = 0; i < c.size(); ++i)
                a += target.augmentation()[i] * c[i];
            c[0] -= a;
            images.push_back(WeilElement::from_rationals(target, c));
        }
        try {
            return WeilMorphism::from_generator_images(source, target, images);
        } catch (const WeilError &) {
        }
    }
    return compose(unit_map(target), augmentation(source));
}

} // namespace weilkit

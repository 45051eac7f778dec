#pragma once

// Seeded random instances for property tests and the acceptance battery.

#include "weilkit/weil_limits.hpp"

#include <random>
#include <string>
#include <vector>

namespace gen {

using namespace weilkit;

inline unsigned pick(std::mt19937_64 &rng, unsigned lo, unsigned hi) {
    return lo + static_cast<unsigned>(rng() % (hi - lo + 1));
}

// Presented algebra with 1..3 generators and dimension <= max_dim.
inline WeilAlgebra presented_algebra(std::mt19937_64 &rng, std::size_t max_dim = 8,
                                     const std::string &names = "xyz") {
    for (;;) {
        unsigned ng = pick(rng, 1, 3);
        std::vector<std::string> gens;
        for (unsigned i = 0; i < ng; ++i)
            gens.push_back(std::string(1, names[i % names.size()]));
        std::vector<Exponents> rels;
        std::size_t box = 1;
        for (unsigned i = 0; i < ng; ++i) {
            Exponents e(ng, 0);
            e[i] = pick(rng, 2, 4);
            box *= e[i];
            rels.push_back(e);
        }
        // Mixed relations cut the box down only so far; skip hopeless draws.
        if (box > 3 * max_dim)
            continue;
        unsigned mixed = pick(rng, 0, 2);
        for (unsigned m = 0; m < mixed && ng > 1; ++m) {
            Exponents e(ng, 0);
            unsigned a = pick(rng, 0, ng - 1), b = pick(rng, 0, ng - 1);
            if (a == b)
                continue;
            e[a] = pick(rng, 1, 2);
            e[b] = 1;
            rels.push_back(e);
        }
        WeilAlgebra w = WeilAlgebra::presented(gens, rels);
        if (w.dimension() <= max_dim)
            return w;
    }
}

// Random element of the maximal ideal with small integer coefficients.
inline WeilElement ideal_element(std::mt19937_64 &rng, const WeilAlgebra &w) {
    QVector c(w.dimension(), 0);
    for (std::size_t i = 1; i < c.size(); ++i)
        if (rng() % 2)
            c[i] = static_cast<long>(rng() % 5) - 2;
    // Tabled algebras need not have e_1..e_n in the ideal; project.
    Rational a = 0;
    for (std::size_t i = 0; i < c.size(); ++i)
        a += w.augmentation()[i] * c[i];
    c[0] -= a;
    return WeilElement::from_rationals(w, c);
}

// Random morphism from a presented source, by rejection on generator images.
// Falls back to the augmentation-then-unit map.
inline WeilMorphism morphism(std::mt19937_64 &rng, const WeilAlgebra &src, const WeilAlgebra &tgt,
                             int attempts = 60) {
    for (int t = 0; t < attempts; ++t) {
        std::vector<WeilElement> images;
        for (std::size_t g = 0; g < src.generators().size(); ++g)
            images.push_back(rng() % 4 == 0 ? WeilElement::zero(tgt) : ideal_element(rng, tgt));
        try {
            return WeilMorphism::from_generator_images(src, tgt, images);
        } catch (const WeilError &) {
        }
    }
    return compose(unit_map(tgt), augmentation(src));
}

// Small-height rational: numerator and denominator bounded by 7.
inline Rational small_rational(std::mt19937_64 &rng) {
    long num = static_cast<long>(rng() % 15) - 7;
    long den = static_cast<long>(rng() % 7) + 1;
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline WeilElement element(std::mt19937_64 &rng, const WeilAlgebra &w) {
    QVector c(w.dimension());
    for (auto &x : c)
        x = small_rational(rng);
    return WeilElement::from_rationals(w, c);
}

} // namespace gen

#include "generators.hpp"
#include "oracles.hpp"
#include "weilkit/weil_limits.hpp"
#include "weilkit/weil_text.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

using namespace weilkit;

namespace {

WeilAlgebra D(const std::string &name = "x") { return WeilAlgebra::dual_numbers(name); }

std::vector<std::string> labels(const WeilAlgebra &w) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < w.dimension(); ++i)
        out.push_back(w.basis_label(i));
    return out;
}

oracle::Grid to_grid(const QMatrix &m) {
    oracle::Grid g(m.rows(), std::vector<mpq_class>(m.cols()));
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            g[r][c] = m(r, c);
    return g;
}

std::vector<QVector> image_columns(const QMatrix &m) {
    std::vector<QVector> out;
    for (std::size_t c = 0; c < m.cols(); ++c)
        out.push_back(m.column(c));
    return out;
}

// A (x) B -> A collapsing the right factor through its augmentation.
WeilMorphism collapse_right(const WeilAlgebra &t) {
    const TensorInfo *info = t.tensor_info();
    WeilAlgebra a = t.tensor_left(), b = t.tensor_right();
    QMatrix m(a.dimension(), t.dimension());
    for (std::size_t s = 0; s < t.dimension(); ++s)
        m(info->pairs[s].first, s) = b.augmentation()[info->pairs[s].second];
    return WeilMorphism::from_matrix(t, a, m);
}

} // namespace

TEST(Presented, DualNumbers) {
    WeilAlgebra w = WeilAlgebra::presented({"x"}, {{2}});
    EXPECT_EQ(w.dimension(), 2u);
    EXPECT_EQ(labels(w), (std::vector<std::string>{"1", "x"}));
    EXPECT_EQ(w.nilpotency_degree(), 2u);
}

TEST(Presented, EmptyPresentationIsK) {
    WeilAlgebra w = WeilAlgebra::presented({}, {});
    EXPECT_EQ(w.dimension(), 1u);
    EXPECT_EQ(w, WeilAlgebra::k());
}

TEST(Presented, FirstOrderTwo) {
    WeilAlgebra w = WeilAlgebra::presented({"x", "y"}, {{2, 0}, {0, 2}, {1, 1}});
    EXPECT_EQ(w.dimension(), 3u);
    EXPECT_EQ(labels(w), (std::vector<std::string>{"1", "x", "y"}));
    EXPECT_EQ(w, WeilAlgebra::first_order(2));
}

TEST(Presented, MissingPurePowerNamesGenerator) {
    try {
        WeilAlgebra::presented({"x", "y"}, {{2, 0}, {1, 1}});
        FAIL() << "expected rejection";
    } catch (const WeilError &e) {
        EXPECT_NE(std::string(e.what()).find("'y'"), std::string::npos);
    }
}

TEST(Presented, PurePowerDerivedFromDivisor) {
    // y^3 divides nothing else, but x is killed directly; y^3 is the pure power.
    WeilAlgebra w = WeilAlgebra::presented({"x", "y"}, {{1, 0}, {0, 3}});
    EXPECT_EQ(w.dimension(), 3u);
}

TEST(PresentedProperty, BasisAndProductsMatchEnumerationOracle) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 60; ++trial) {
        WeilAlgebra w = gen::presented_algebra(rng, 12);
        auto expected = oracle::standard_monomials(w.generators().size(), w.relations(), 6);
        auto got = w.monomials();
        std::set<Exponents> a(expected.begin(), expected.end()), b(got.begin(), got.end());
        ASSERT_EQ(a, b) << w.describe();
        EXPECT_EQ(got[0], Exponents(w.generators().size(), 0));
        for (std::size_t i = 0; i < w.dimension(); ++i)
            for (std::size_t j = 0; j < w.dimension(); ++j) {
                oracle::Poly p{{got[i], 1}}, q{{got[j], 1}};
                auto prod = oracle::multiply(p, q, w.relations());
                oracle::Poly lib;
                for (const auto &e : w.product(i, j))
                    lib[got[e.index]] = e.coeff;
                EXPECT_EQ(prod, lib);
            }
    }
}

TEST(WeilProperty, AssociativeCommutativeNilpotent) {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 40; ++trial) {
        WeilAlgebra w = gen::presented_algebra(rng);
        EXPECT_TRUE(w.is_associative());
        EXPECT_TRUE(w.is_commutative());
        std::size_t n = w.nilpotency_degree();
        EXPECT_LE(n, w.dimension());
        // m^N = 0 and m^(N-1) != 0, by iterated products of ideal elements.
        std::vector<WeilElement> gens;
        for (std::size_t i = 1; i < w.dimension(); ++i)
            gens.push_back(WeilElement::basis(w, i));
        std::vector<WeilElement> layer = gens;
        for (std::size_t p = 1; p < n; ++p) {
            bool nonzero = std::any_of(layer.begin(), layer.end(),
                                       [&](const WeilElement &e) { return !(e == WeilElement::zero(w)); });
            EXPECT_TRUE(nonzero);
            std::vector<WeilElement> next;
            for (const auto &a : layer)
                for (const auto &g : gens)
                    next.push_back(a * g);
            layer = next;
        }
        for (const auto &e : layer)
            EXPECT_EQ(e, WeilElement::zero(w));
    }
}

TEST(Tensor, DualTimesDual) {
    TensorProduct t = tensor(D(), D());
    EXPECT_EQ(t.algebra.dimension(), 4u);
    EXPECT_EQ(labels(t.algebra), (std::vector<std::string>{"1", "x", "y", "x*y"}));
    EXPECT_EQ(t.right.apply(WeilElement::basis(D(), 1)), WeilElement::basis(t.algebra, 2));
}

TEST(Tensor, UnitLaw) {
    WeilAlgebra w = WeilAlgebra::presented({"x", "y"}, {{3, 0}, {0, 2}});
    TensorProduct t = tensor(w, WeilAlgebra::k());
    EXPECT_EQ(t.algebra.dimension(), w.dimension());
    EXPECT_TRUE(t.left.is_isomorphism());
}

TEST(Tensor, AssociatorIsIso) {
    WeilAlgebra dd = tensor(D(), D()).algebra;
    WeilAlgebra left = tensor(dd, D()).algebra;
    WeilAlgebra right = tensor(D(), dd).algebra;
    EXPECT_EQ(left.dimension(), 8u);
    EXPECT_EQ(right.dimension(), 8u);
    WeilMorphism a = associator(left, right);
    EXPECT_TRUE(a.is_isomorphism());
    // Basis bijection oracle: the associator permutes basis vectors.
    std::set<std::size_t> hit;
    for (std::size_t c = 0; c < 8; ++c) {
        std::size_t ones = 0, where = 0;
        for (std::size_t r = 0; r < 8; ++r)
            if (a.matrix()(r, c) != 0) {
                ++ones;
                where = r;
                EXPECT_EQ(a.matrix()(r, c), 1);
            }
        EXPECT_EQ(ones, 1u);
        hit.insert(where);
    }
    EXPECT_EQ(hit.size(), 8u);
}

TEST(Tensor, TabledFactors) {
    WeilAlgebra e = equalizer(WeilMorphism::identity(D()), WeilMorphism::identity(D())).algebra;
    TensorProduct t = tensor(e, D());
    EXPECT_EQ(t.algebra.dimension(), 4u);
    EXPECT_TRUE(t.algebra.is_associative());
    EXPECT_EQ(t.algebra, tensor(D(), D()).algebra);
}

TEST(TensorProperty, FunctorialOnRandomMorphisms) {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 25; ++trial) {
        WeilAlgebra a = gen::presented_algebra(rng, 4), b = gen::presented_algebra(rng, 4);
        WeilAlgebra c = gen::presented_algebra(rng, 4), d = gen::presented_algebra(rng, 4);
        WeilAlgebra e = gen::presented_algebra(rng, 4), f = gen::presented_algebra(rng, 4);
        WeilMorphism p1 = gen::morphism(rng, a, c), p2 = gen::morphism(rng, b, d);
        WeilMorphism q1 = gen::morphism(rng, c, e), q2 = gen::morphism(rng, d, f);
        WeilAlgebra ab = tensor(a, b).algebra, cd = tensor(c, d).algebra, ef = tensor(e, f).algebra;
        WeilMorphism lhs = tensor_morphism(compose(q1, p1), compose(q2, p2), ab, ef);
        WeilMorphism rhs = compose(tensor_morphism(q1, q2, cd, ef), tensor_morphism(p1, p2, ab, cd));
        EXPECT_EQ(lhs.matrix(), rhs.matrix());
        // The tensor of morphisms is itself a validated homomorphism.
        EXPECT_NO_THROW(WeilMorphism::from_matrix(ab, ef, lhs.matrix()));
    }
}

TEST(Morphism, AugmentationAndUnit) {
    WeilElement e = WeilElement::from_rationals(D(), {3, 5});
    EXPECT_EQ(augmentation(D()).apply(e), WeilElement::from_rationals(WeilAlgebra::k(), {3}));
    EXPECT_EQ(unit_map(D()).apply(WeilElement::from_rationals(WeilAlgebra::k(), {3})),
              WeilElement::from_rationals(D(), {3, 0}));
    EXPECT_EQ(augmentation(WeilAlgebra::k()), WeilMorphism::identity(WeilAlgebra::k()));
    EXPECT_EQ(compose(augmentation(D()), unit_map(D())), WeilMorphism::identity(WeilAlgebra::k()));
}

TEST(Morphism, ApplyDiagonal) {
    // (x+y)^2 = 2xy in D(x)D, so the diagonal only lands in D(2).
    TensorProduct t = tensor(D(), D());
    WeilElement sum = WeilElement::basis(t.algebra, 1) + WeilElement::basis(t.algebra, 2);
    EXPECT_THROW(WeilMorphism::from_generator_images(D(), t.algebra, {sum}), WeilError);

    WeilAlgebra d2 = WeilAlgebra::first_order(2);
    WeilElement img = WeilElement::basis(d2, 1) + WeilElement::basis(d2, 2);
    WeilMorphism phi = WeilMorphism::from_generator_images(D(), d2, {img});
    WeilElement w = WeilElement::from_rationals(D(), {1, 2});
    EXPECT_EQ(phi.apply(w), WeilElement::from_rationals(d2, {1, 2, 2}));
    EXPECT_EQ(WeilMorphism::identity(D()).apply(w), w);
}

TEST(Morphism, ComposeMismatchRejected) {
    EXPECT_THROW(compose(augmentation(D()), augmentation(D())), WeilError);
}

TEST(Morphism, InvalidImagesRejected) {
    WeilAlgebra d2 = WeilAlgebra::truncated_line(2);
    // x -> x in k[x]/(x^3) does not kill x^2.
    EXPECT_THROW(WeilMorphism::from_generator_images(D(), d2, {WeilElement::basis(d2, 1)}), WeilError);
    // Nonzero augmentation part.
    EXPECT_THROW(WeilMorphism::from_generator_images(D(), D(), {WeilElement::basis(D(), 0)}), WeilError);
}

TEST(MorphismProperty, AugmentationCompatible) {
    std::mt19937_64 rng(24);
    for (int trial = 0; trial < 40; ++trial) {
        WeilAlgebra a = gen::presented_algebra(rng), b = gen::presented_algebra(rng);
        WeilMorphism phi = gen::morphism(rng, a, b);
        EXPECT_EQ(compose(augmentation(b), phi), augmentation(a));
        for (std::size_t i = 0; i < a.dimension(); ++i) {
            WeilElement e = WeilElement::basis(a, i);
            EXPECT_EQ(phi.apply(e).augmentation(), e.augmentation());
        }
    }
}

TEST(Equalizer, EqualMapsGiveEverything) {
    WeilAlgebra w = WeilAlgebra::presented({"x", "y"}, {{2, 0}, {0, 3}});
    EqualizerResult e = equalizer(WeilMorphism::identity(w), WeilMorphism::identity(w));
    EXPECT_EQ(e.algebra.dimension(), w.dimension());
    EXPECT_TRUE(e.inclusion.is_isomorphism());
}

TEST(Equalizer, CollapsingPair) {
    TensorProduct t = tensor(D(), D());
    WeilElement x = WeilElement::basis(D(), 1);
    WeilMorphism phi = WeilMorphism::from_generator_images(t.algebra, D(), {x, x});
    WeilMorphism psi = WeilMorphism::from_generator_images(t.algebra, D(), {x, WeilElement::zero(D())});
    EqualizerResult e = equalizer(phi, psi);
    EXPECT_EQ(e.algebra.dimension(), 3u);
    QMatrix diff = phi.matrix();
    for (std::size_t r = 0; r < diff.rows(); ++r)
        for (std::size_t c = 0; c < diff.cols(); ++c)
            diff(r, c) -= psi.matrix()(r, c);
    auto expected = oracle::kernel(to_grid(diff), 4);
    EXPECT_TRUE(oracle::same_span(image_columns(e.inclusion.matrix()), expected));
    // Spanned by 1, x, x*y.
    EXPECT_TRUE(oracle::same_span(image_columns(e.inclusion.matrix()), {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}}));
}

TEST(Equalizer, IdentityAgainstAugmentationThenUnit) {
    EqualizerResult e = equalizer(WeilMorphism::identity(D()), compose(unit_map(D()), augmentation(D())));
    EXPECT_EQ(e.algebra.dimension(), 1u);
    EXPECT_EQ(e.algebra, WeilAlgebra::k());
}

TEST(Product, OverK) {
    EXPECT_EQ(product_over_k(WeilAlgebra::k(), WeilAlgebra::k()).algebra.dimension(), 1u);
    ProductResult p = product_over_k(D(), D());
    EXPECT_EQ(p.algebra.dimension(), 3u);
    EXPECT_EQ(p.algebra, WeilAlgebra::first_order(2));
    // A test cone: two morphisms from D(2) picking each coordinate.
    WeilAlgebra d2 = WeilAlgebra::first_order(2);
    WeilMorphism a = WeilMorphism::from_generator_images(d2, D(), {WeilElement::basis(D(), 1), WeilElement::zero(D())});
    WeilMorphism b = WeilMorphism::from_generator_images(d2, D(), {WeilElement::zero(D()), WeilElement::basis(D(), 1)});
    Cone outer{d2, {a, b}};
    Cone lim{p.algebra, p.projections};
    WeilMorphism m = mediating_morphism(outer, lim);
    EXPECT_EQ(compose(p.projections[0], m), a);
    EXPECT_EQ(compose(p.projections[1], m), b);
}

TEST(Limit, OneObject) {
    WeilAlgebra w = WeilAlgebra::truncated_line(3);
    DiagramInWeil d{{w}, {}, std::nullopt};
    LimitResult l = limit(d);
    EXPECT_EQ(l.algebra.dimension(), w.dimension());
    EXPECT_TRUE(l.legs[0].is_isomorphism());
}

TEST(Limit, PullbackOfAugmentations) {
    DiagramInWeil d{{D(), D(), WeilAlgebra::k()},
                    {{0, 2, augmentation(D())}, {1, 2, augmentation(D())}},
                    std::nullopt};
    LimitResult l = limit(d);
    EXPECT_EQ(l.algebra.dimension(), 3u);
    ProductResult p = product_over_k(D(), D());
    Cone lim{l.algebra, l.legs};
    WeilMorphism m = mediating_morphism(Cone{p.algebra, {p.projections[0], p.projections[1],
                                                         augmentation(p.algebra)}},
                                        lim);
    EXPECT_TRUE(m.is_isomorphism());
}

TEST(Limit, EqualizerDiagramMatchesEqualizer) {
    TensorProduct t = tensor(D(), D());
    WeilElement x = WeilElement::basis(D(), 1);
    WeilMorphism phi = WeilMorphism::from_generator_images(t.algebra, D(), {x, x});
    WeilMorphism psi = WeilMorphism::from_generator_images(t.algebra, D(), {x, WeilElement::zero(D())});
    DiagramInWeil d{{t.algebra, D()}, {{0, 1, phi}, {0, 1, psi}}, std::nullopt};
    LimitResult l = limit(d);
    EqualizerResult e = equalizer(phi, psi);
    EXPECT_EQ(l.algebra.dimension(), e.algebra.dimension());
    EXPECT_TRUE(isomorphic_over(l.legs[0], e.inclusion));
}

TEST(IsLimitCone, DefiningCone) {
    DiagramInWeil d{{D(), D(), WeilAlgebra::k()},
                    {{0, 2, augmentation(D())}, {1, 2, augmentation(D())}},
                    std::nullopt};
    DiagramInWeil c = with_limit_cone(d);
    EXPECT_TRUE(is_limit_cone(c).is_limit);
}

TEST(IsLimitCone, InflatedApexFails) {
    DiagramInWeil d{{D(), D(), WeilAlgebra::k()},
                    {{0, 2, augmentation(D())}, {1, 2, augmentation(D())}},
                    std::nullopt};
    LimitResult l = limit(d);
    WeilAlgebra big = tensor(l.algebra, D()).algebra;
    WeilMorphism down = collapse_right(big);
    Cone cone{big, {}};
    for (const auto &leg : l.legs)
        cone.legs.push_back(compose(leg, down));
    d.cone = cone;
    LimitCertificate cert = is_limit_cone(d);
    EXPECT_FALSE(cert.is_limit);
    EXPECT_EQ(cert.apex_dimension, 6u);
    EXPECT_EQ(cert.limit_dimension, 3u);
}

TEST(IsLimitCone, EmptyDiagramTerminal) {
    DiagramInWeil d{{}, {}, Cone{WeilAlgebra::k(), {}}};
    EXPECT_TRUE(is_limit_cone(d).is_limit);
    DiagramInWeil e{{}, {}, Cone{D(), {}}};
    EXPECT_FALSE(is_limit_cone(e).is_limit);
}

TEST(IsLimitCone, NonCommutingConeRejected) {
    DiagramInWeil d{{D(), D()}, {{0, 1, WeilMorphism::identity(D())}}, std::nullopt};
    WeilMorphism zero = compose(unit_map(D()), augmentation(D()));
    d.cone = Cone{D(), {WeilMorphism::identity(D()), zero}};
    EXPECT_THROW(is_limit_cone(d), WeilError);
}

TEST(Mediating, IdentityAndUnit) {
    DiagramInWeil d{{D(), D(), WeilAlgebra::k()},
                    {{0, 2, augmentation(D())}, {1, 2, augmentation(D())}},
                    std::nullopt};
    LimitResult l = limit(d);
    Cone lim{l.algebra, l.legs};
    EXPECT_EQ(mediating_morphism(lim, lim), WeilMorphism::identity(l.algebra));
    Cone from_k{WeilAlgebra::k(), {unit_map(D()), unit_map(D()), unit_map(WeilAlgebra::k())}};
    EXPECT_EQ(mediating_morphism(from_k, lim), unit_map(l.algebra));
}

TEST(Mediating, NotUniqueTargetRejected) {
    // Target cone D(2) -> D, D with both legs killing everything is not a limit.
    WeilAlgebra d2 = WeilAlgebra::first_order(2);
    WeilMorphism kill = compose(unit_map(D()), augmentation(d2));
    try {
        mediating_morphism(Cone{WeilAlgebra::k(), {unit_map(D())}}, Cone{d2, {kill}});
        FAIL() << "expected NotUnique";
    } catch (const MediationError &e) {
        EXPECT_EQ(e.kind(), MediationError::Kind::NotUnique);
    }
}

TEST(Mediating, IncompatibleConesRejected) {
    // k -> D cannot absorb the identity cone on D.
    try {
        mediating_morphism(Cone{D(), {WeilMorphism::identity(D())}}, Cone{WeilAlgebra::k(), {unit_map(D())}});
        FAIL() << "expected NoSolution";
    } catch (const MediationError &e) {
        EXPECT_EQ(e.kind(), MediationError::Kind::NoSolution);
    }
}

TEST(Mediating, InducedMapBetweenEqualizers) {
    // Z1 = eq(g1, h1) on D(x)D -> D, Z2 = eq(g2, h2) on the same data; f = id.
    TensorProduct t = tensor(D(), D());
    WeilElement x = WeilElement::basis(D(), 1);
    WeilMorphism g = WeilMorphism::from_generator_images(t.algebra, D(), {x, x});
    WeilMorphism h = WeilMorphism::from_generator_images(t.algebra, D(), {x, WeilElement::zero(D())});
    EqualizerResult z1 = equalizer(g, h);
    EqualizerResult z2 = equalizer(g, h);
    WeilMorphism id_t = WeilMorphism::identity(t.algebra);
    WeilMorphism id_d = WeilMorphism::identity(D());
    WeilMorphism m = induced_map_between_equalizers(z1, g, h, z2, g, h, id_t, id_d);
    EXPECT_EQ(compose(z2.inclusion, m), z1.inclusion);
    EXPECT_TRUE(m.is_isomorphism());

    // Sub-cone: the equalizer of id and (unit o aug) sits inside Z2.
    WeilMorphism e = compose(unit_map(t.algebra), augmentation(t.algebra));
    EqualizerResult z0 = equalizer(id_t, e);
    WeilMorphism into = mediating_morphism(Cone{z0.algebra, {z0.inclusion, compose(g, z0.inclusion)}},
                                           Cone{z2.algebra, {z2.inclusion, compose(g, z2.inclusion)}});
    EXPECT_EQ(compose(z2.inclusion, into), z0.inclusion);
}

TEST(UniversalProperty, RandomConesFactorUniquely) {
    std::mt19937_64 rng(25);
    for (int trial = 0; trial < 30; ++trial) {
        WeilAlgebra a = gen::presented_algebra(rng, 5), b = gen::presented_algebra(rng, 5);
        WeilAlgebra c = gen::presented_algebra(rng, 5);
        WeilMorphism f = gen::morphism(rng, a, c), g = gen::morphism(rng, b, c);
        DiagramInWeil d{{a, b, c}, {{0, 2, f}, {1, 2, g}}, std::nullopt};
        LimitResult l = limit(d);
        Cone lim{l.algebra, l.legs};
        ASSERT_TRUE(d.cone_commutes(lim));
        // Cone from a random apex through a random map into the limit.
        for (int k = 0; k < 3; ++k) {
            WeilAlgebra z = gen::presented_algebra(rng, 5);
            // Draw z -> a and z -> b and keep the pair when compatible.
            WeilMorphism za = gen::morphism(rng, z, a), zb = gen::morphism(rng, z, b);
            if (!(compose(f, za) == compose(g, zb)))
                continue;
            Cone outer{z, {za, zb, compose(f, za)}};
            WeilMorphism m = mediating_morphism(outer, lim);
            for (std::size_t i = 0; i < 3; ++i)
                EXPECT_EQ(compose(l.legs[i], m), outer.legs[i]);
        }
        // Oracle: pullback over the full product space a x b.
        QMatrix sys(c.dimension(), a.dimension() + b.dimension());
        for (std::size_t r = 0; r < c.dimension(); ++r) {
            for (std::size_t j = 0; j < a.dimension(); ++j)
                sys(r, j) = f.matrix()(r, j);
            for (std::size_t j = 0; j < b.dimension(); ++j)
                sys(r, a.dimension() + j) = -g.matrix()(r, j);
        }
        auto expected = oracle::kernel(to_grid(sys), a.dimension() + b.dimension());
        std::vector<QVector> got;
        for (std::size_t col = 0; col < l.algebra.dimension(); ++col) {
            QVector v = l.legs[0].matrix().column(col);
            QVector w = l.legs[1].matrix().column(col);
            v.insert(v.end(), w.begin(), w.end());
            got.push_back(v);
        }
        EXPECT_TRUE(oracle::same_span(got, expected));
    }
}

TEST(Text, PresentationRoundTrip) {
    std::string s = "weil Q[x,y]/(x^2, x*y, y^3)";
    WeilAlgebra w = parse_presentation(s);
    EXPECT_EQ(w.dimension(), 4u);
    EXPECT_EQ(serialize_presentation(w), s);
    EXPECT_EQ(serialize_presentation(parse_presentation("Q[x,y]/(x^2,x*y,y^3)")), s);
    EXPECT_EQ(parse_presentation("Q[]/()"), WeilAlgebra::k());
    EXPECT_EQ(serialize_presentation(WeilAlgebra::k()), "weil Q[]/()");
}

TEST(Text, TabledRoundTrip) {
    std::mt19937_64 rng(26);
    for (int trial = 0; trial < 10; ++trial) {
        WeilAlgebra a = gen::presented_algebra(rng, 4), b = gen::presented_algebra(rng, 4);
        WeilAlgebra c = gen::presented_algebra(rng, 4);
        DiagramInWeil d{{a, b, c}, {{0, 2, gen::morphism(rng, a, c)}, {1, 2, gen::morphism(rng, b, c)}}, std::nullopt};
        WeilAlgebra l = limit(d).algebra;
        std::string text = serialize_tabled(l);
        WeilAlgebra back = parse_tabled(text);
        EXPECT_EQ(back, l);
        EXPECT_EQ(serialize_tabled(back), text);
        EXPECT_EQ(serialize_algebra(parse_algebra(text)), text);
    }
}

TEST(Text, ParseErrors) {
    EXPECT_THROW(parse_presentation("Q[x]/(y^2)"), ParseError);
    EXPECT_THROW(parse_presentation("Q[x]/(x^2"), ParseError);
    EXPECT_THROW(parse_tabled("weil tabled\ndim 1\naugmentation 1\n"), ParseError);
    EXPECT_THROW(parse_presentation("Q[x,y]/(x^2)"), WeilError);
}

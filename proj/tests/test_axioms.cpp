#include "oracles.hpp"
#include "weilkit/axioms.hpp"
#include "weilkit/parse.hpp"

#include <gtest/gtest.h>

using namespace weilkit;

namespace {

WeilAlgebra D(const std::string &name = "x") { return WeilAlgebra::dual_numbers(name); }

// The symmetric part of D (x) D as the equalizer of id and the swap.
DiagramInWeil symmetric_equalizer() {
    TensorProduct t = tensor(D(), D());
    const WeilAlgebra &w = t.algebra;
    WeilMorphism id = WeilMorphism::identity(w);
    WeilMorphism swap = WeilMorphism::from_generator_images(
        w, w, {WeilElement::basis(w, *w.monomial_index({0, 1})), WeilElement::basis(w, *w.monomial_index({1, 0}))});
    EqualizerResult eq = equalizer(id, swap);
    DiagramInWeil d;
    d.objects = {w, w};
    d.arrows = {{0, 1, id}, {0, 1, swap}};
    d.cone = Cone{eq.algebra, {eq.inclusion, eq.inclusion}};
    return d;
}

// dim lim(R^m (x) D) straight from the defining equations over the
// product, with R^m (x) k appended and joined by the augmentations.
std::size_t oracle_limit_dimension(std::size_t m, const DiagramInWeil &d) {
    std::vector<std::size_t> offset;
    std::size_t total = 0;
    for (const auto &w : d.objects) {
        offset.push_back(total);
        total += m * w.dimension();
    }
    const std::size_t base = total;
    total += m;
    oracle::Grid rows;
    for (std::size_t k = 0; k < d.objects.size(); ++k) {
        const auto &w = d.objects[k];
        for (std::size_t c = 0; c < m; ++c) {
            std::vector<oracle::Q> row(total, 0);
            for (std::size_t i = 0; i < w.dimension(); ++i)
                row[offset[k] + c * w.dimension() + i] = w.augmentation()[i];
            row[base + c] = -1;
            rows.push_back(row);
        }
    }
    for (const auto &a : d.arrows) {
        const QMatrix &mat = a.morphism.matrix();
        for (std::size_t c = 0; c < m; ++c)
            for (std::size_t r = 0; r < mat.rows(); ++r) {
                std::vector<oracle::Q> row(total, 0);
                for (std::size_t s = 0; s < mat.cols(); ++s)
                    row[offset[a.source] + c * mat.cols() + s] += mat(r, s);
                row[offset[a.target] + c * mat.rows() + r] -= 1;
                rows.push_back(row);
            }
    }
    return total - oracle::rank(rows);
}

SmoothMap map(const std::string &text) { return parse_map(text); }

} // namespace

TEST(ModelObject, CoordinateAndAffine) {
    ModelObject r2 = ModelObject::coordinate(2);
    EXPECT_EQ(r2.ambient(), 2u);
    EXPECT_EQ(r2.directions().dimension(), 2u);
    EXPECT_EQ(r2.describe(), "R^2");

    ModelObject line = ModelObject::affine(QMatrix{{1, 1}}, {1}, "u+v=1");
    EXPECT_TRUE(line.contains(QVector{3, -2}));
    EXPECT_FALSE(line.contains(QVector{0, 0}));
    EXPECT_EQ(line.directions().dimension(), 1u);

    Sampler s(1);
    WeilAlgebra w = WeilAlgebra::truncated_line(2);
    for (int i = 0; i < 10; ++i) {
        WeilPoint p = line.sample(s, w);
        EXPECT_TRUE(line.contains(p));
        // The augmentation lands in X and the nilpotent part in its directions.
        QVector base{tau(p)[0][0].rational(), tau(p)[1][0].rational()};
        EXPECT_TRUE(line.contains(base));
    }
    EXPECT_TRUE(line.contains(iota(w, WeilPoint(WeilAlgebra::k(), {WeilElement::from_rationals(WeilAlgebra::k(), {5}),
                                                                    WeilElement::from_rationals(WeilAlgebra::k(), {-4})}))));
}

TEST(ModelObject, EmptyObject) {
    ModelObject empty = ModelObject::affine(QMatrix{{1}, {1}}, {0, 1}, "u=0,u=1");
    EXPECT_TRUE(empty.is_empty());
    Sampler s(2);
    EXPECT_THROW(empty.sample(s, D()), WeilError);
    MicrolinearCertificate c = check_microlinear(empty, symmetric_equalizer());
    EXPECT_TRUE(c.microlinear);
}

TEST(ModelObject, LimitOfAffineMaps) {
    // Equalizer of u and 2u - 1: the single point u = 1.
    ObjectDiagram d;
    d.objects = {ModelObject::coordinate(1), ModelObject::coordinate(1)};
    d.arrows = {{0, 1, map("map f(u) -> (u)")}, {0, 1, map("map g(u) -> (2*u - 1)")}};
    ModelObject x = ModelObject::limit_of(d);
    EXPECT_EQ(x.kind(), ModelObject::Kind::LimitOf);
    ASSERT_NE(x.diagram(), nullptr);
    EXPECT_EQ(x.ambient(), 2u);
    EXPECT_EQ(x.directions().dimension(), 0u);
    EXPECT_TRUE(x.contains(QVector{1, 1}));

    ObjectDiagram bad = d;
    bad.arrows[1].map = map("map g(u) -> (u^2)");
    EXPECT_THROW(ModelObject::limit_of(bad), WeilError);
    bad.arrows[1].map = map("map g(u,v) -> (u)");
    EXPECT_THROW(ModelObject::limit_of(bad), WeilError);
}

TEST(Microlinear, LineAgainstEqualizer) {
    DiagramInWeil d = symmetric_equalizer();
    MicrolinearCertificate c = check_microlinear(ModelObject::coordinate(1), d);
    EXPECT_TRUE(c.microlinear) << c.summary();
    EXPECT_TRUE(c.cone_is_limit);
    EXPECT_EQ(c.apex_dimension, 3u);
    EXPECT_EQ(c.limit_dimension, 3u);
    EXPECT_EQ(c.rank, 3u);
}

TEST(Microlinear, IdentityConeOnR3) {
    WeilAlgebra w = WeilAlgebra::truncated_line(2);
    DiagramInWeil d;
    d.objects = {w};
    d.cone = Cone{w, {WeilMorphism::identity(w)}};
    MicrolinearCertificate c = check_microlinear(ModelObject::coordinate(3), d);
    EXPECT_TRUE(c.microlinear);
    EXPECT_EQ(c.apex_dimension, 9u);
    EXPECT_EQ(c.rank, 9u);
}

TEST(Microlinear, BrokenConeIsRejectedWithWitness) {
    DiagramInWeil d = break_cone(symmetric_equalizer());
    MicrolinearCertificate c = check_microlinear(ModelObject::coordinate(1), d);
    EXPECT_FALSE(c.microlinear);
    EXPECT_FALSE(c.cone_is_limit);
    EXPECT_LT(c.rank, c.apex_dimension);
    EXPECT_FALSE(oracle::span_dim({c.witness}) == 0);
    EXPECT_NE(c.reason.find("rejected"), std::string::npos);
}

TEST(Microlinear, MissingOrNonCommutingCone) {
    DiagramInWeil d = symmetric_equalizer();
    d.cone.reset();
    EXPECT_FALSE(check_microlinear(ModelObject::coordinate(1), d).microlinear);
    DiagramInWeil e = symmetric_equalizer();
    WeilAlgebra w = e.objects[0];
    e.cone = Cone{w, {WeilMorphism::identity(w), WeilMorphism::identity(w)}};
    MicrolinearCertificate c = check_microlinear(ModelObject::coordinate(1), e);
    EXPECT_FALSE(c.microlinear);
    EXPECT_NE(c.reason.find("does not commute"), std::string::npos);
}

TEST(MicrolinearProperty, RandomLimitsAndControls) {
    Sampler s(41);
    for (int trial = 0; trial < 20; ++trial) {
        DiagramInWeil d = random_limit_diagram(s, 4);
        auto m = static_cast<std::size_t>(s.integer(1, 3));
        MicrolinearCertificate c = check_microlinear(ModelObject::coordinate(m), d);
        EXPECT_TRUE(c.microlinear) << c.summary();
        EXPECT_EQ(c.limit_dimension, oracle_limit_dimension(m, d));
        EXPECT_EQ(c.apex_dimension, m * d.cone->apex.dimension());
        EXPECT_EQ(c.rank, c.apex_dimension);

        MicrolinearCertificate bad = check_microlinear(ModelObject::coordinate(m), break_cone(d));
        EXPECT_FALSE(bad.microlinear) << bad.summary();
        EXPECT_FALSE(bad.witness.empty());
    }
}

TEST(MicrolinearProperty, AffineLimits) {
    Sampler s(42);
    for (int trial = 0; trial < 10; ++trial) {
        ModelObject x = random_affine_limit(s);
        DiagramInWeil d = random_limit_diagram(s, 3);
        EXPECT_TRUE(check_microlinear(x, d).microlinear);
        EXPECT_TRUE(check_microlinear(ModelObject::tensor_with(x, D()), d).microlinear);
        EXPECT_FALSE(check_microlinear(x, break_cone(d)).microlinear);
    }
}

TEST(Exponentiable, TerminalExponent) {
    ReportEntry r = check_weil_exponentiable(ModelObject::coordinate(2), {WeilAlgebra::k()}, D(), D(), {10, 1});
    EXPECT_TRUE(r.pass) << r.certificate;
    EXPECT_NE(r.instance.find("(Y=1)"), std::string::npos);
}

TEST(Exponentiable, TerminalFirstFactor) {
    ReportEntry r = check_weil_exponentiable(ModelObject::coordinate(2), {D()}, WeilAlgebra::k(),
                                             WeilAlgebra::truncated_line(2), {10, 2});
    EXPECT_TRUE(r.pass) << r.certificate;
    EXPECT_NE(r.instance.find("(W1=k)"), std::string::npos);
}

TEST(Exponentiable, PlaneWithDualNumbers) {
    ReportEntry r = check_weil_exponentiable(ModelObject::coordinate(2), {D()}, D(), D(), {20, 3});
    EXPECT_TRUE(r.pass) << r.certificate;
    EXPECT_NE(r.certificate.find("20/20"), std::string::npos);
    EXPECT_NE(r.certificate.find("dim 8"), std::string::npos);
}

TEST(Exponentiable, AffineAndTabled) {
    ModelObject line = ModelObject::affine(QMatrix{{1, -2}}, {3}, "u-2v=3");
    DiagramInWeil d = symmetric_equalizer();
    ReportEntry r = check_weil_exponentiable(line, {d.cone->apex}, WeilAlgebra::first_order(2), D(), {5, 4});
    EXPECT_TRUE(r.pass) << r.certificate;
}

TEST(DoubleLimit, PullbackAgainstEqualizer) {
    ObjectDiagram od;
    od.objects = {ModelObject::coordinate(2), ModelObject::coordinate(1), ModelObject::coordinate(1)};
    od.arrows = {{0, 2, map("map f(u,v) -> (u + v)")}, {1, 2, map("map g(u) -> (3*u - 1)")}};
    ReportEntry r = check_double_limit(od, symmetric_equalizer());
    EXPECT_TRUE(r.pass) << r.certificate;
    // Objects-first: the pullback is a plane; with the symmetric part
    // (dim 3) that is 2 * 3.
    EXPECT_NE(r.certificate.find("dim 6"), std::string::npos) << r.certificate;
}

TEST(DoubleLimit, EmptyOnBothSides) {
    ObjectDiagram od;
    od.objects = {ModelObject::coordinate(1), ModelObject::coordinate(1)};
    od.arrows = {{0, 1, map("map f(u) -> (u)")}, {0, 1, map("map g(u) -> (u + 1)")}};
    ReportEntry r = check_double_limit(od, symmetric_equalizer());
    EXPECT_TRUE(r.pass) << r.certificate;
    EXPECT_NE(r.certificate.find("empty"), std::string::npos);
}

TEST(Closure, SuitePassesAndIsDeterministic) {
    Report a = closure_suite(5, 3, 3);
    EXPECT_TRUE(a.all_pass()) << a.text();
    EXPECT_EQ(a.entries().size(), 3u * 9u);
    Report b = closure_suite(5, 3, 3);
    EXPECT_EQ(a.text(), b.text());
    EXPECT_NE(a.text(), closure_suite(6, 3, 3).text());
}

TEST(Microlinear, ProductShapeUsesTerminal) {
    // D x_k D = Q[x,y]/(x^2,xy,y^2): R (x) it has dim 3, the fiber product
    // R[D] x_R R[D] too, whereas the plain product has dim 4.
    DiagramInWeil d;
    d.objects = {D(), D()};
    d = with_limit_cone(d);
    MicrolinearCertificate c = check_microlinear(ModelObject::coordinate(1), d);
    EXPECT_TRUE(c.microlinear) << c.summary();
    EXPECT_EQ(c.limit_dimension, 3u);
    DiagramInWeil full = with_terminal(d);
    EXPECT_EQ(full.objects.size(), 3u);
    EXPECT_EQ(full.arrows.size(), 2u);
    EXPECT_TRUE(is_limit_cone(full).is_limit);
}

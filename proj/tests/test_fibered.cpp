#include "oracles.hpp"
#include "weilkit/fibered.hpp"
#include "weilkit/parse.hpp"

#include <gtest/gtest.h>

using namespace weilkit;

namespace {

WeilAlgebra D(const std::string &name = "x") { return WeilAlgebra::dual_numbers(name); }

FiberedObject fib(const std::string &text) { return FiberedObject::parse(text); }
SmoothMap map(const std::string &text) { return parse_map(text); }

WeilElement el(const WeilAlgebra &w, QVector coeffs) { return WeilElement::from_rationals(w, coeffs); }

FiberedObject sphere() { return fib("fibered pi(x,y,z) -> (x^2+y^2+z^2)"); }

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

// D x_k D as the pullback of the two augmentations.
DiagramInWeil dual_pullback() {
    DiagramInWeil d;
    d.objects = {D("a"), D("b"), WeilAlgebra::k()};
    d.arrows = {{0, 2, augmentation(d.objects[0])}, {1, 2, augmentation(d.objects[1])}};
    return with_limit_cone(d);
}

std::vector<oracle::Q> nilpotent_part(const WeilPoint &x) {
    std::vector<oracle::Q> out;
    for (const auto &c : x.coords()) {
        QVector v = c.to_rational();
        out.insert(out.end(), v.begin() + 1, v.end());
    }
    return out;
}

// Pullback p1 -> p3 <- p2 of the projections (x,y) |-> x over id_R.
FiberedDiagram projection_pullback() {
    FiberedDiagram d;
    d.objects = {fib("fibered p(x,y) -> (x)"), fib("fibered q(x,y) -> (x)"), FiberedObject::identity(1)};
    FiberedMorphism down{map("map f(x,y) -> (x)"), SmoothMap::identity(1)};
    d.arrows = {{0, 2, down}, {1, 2, down}};
    return fibered_limit(d);
}

} // namespace

TEST(FiberedObject, ParseAndSquares) {
    FiberedObject p = sphere();
    EXPECT_EQ(p.total_dimension(), 3u);
    EXPECT_EQ(p.base_dimension(), 1u);
    EXPECT_TRUE(p.polynomials().has_value());
    EXPECT_FALSE(p.is_affine());
    EXPECT_EQ(p.str().rfind("fibered ", 0), 0u);
    EXPECT_TRUE(fib("fibered p(x,y) -> (x)").is_affine());
    EXPECT_FALSE(fib("fibered p(x) -> (exp(x))").polynomials().has_value());

    FiberedMorphism scale{map("map f(x,y,z) -> (2*x,2*y,2*z)"), map("map g(s) -> (4*s)")};
    EXPECT_TRUE(square_commutes(p, p, scale));
    FiberedMorphism wrong{scale.top, map("map g(s) -> (2*s)")};
    EXPECT_FALSE(square_commutes(p, p, wrong));
    EXPECT_TRUE(square_commutes(p, p, FiberedMorphism::identity(p)));

    FiberedObject e = fib("fibered p(x) -> (exp(x))");
    FiberedMorphism shift{map("map f(x) -> (x+1)"), map("map g(s) -> (s*exp(1))")};
    EXPECT_TRUE(square_commutes(e, e, shift));
    EXPECT_THROW(square_commutes(p, e, scale), WeilError);
}

TEST(ArrowFunctor, TerminalAndIdentity) {
    FiberedObject p = fib("fibered p(x,y) -> (x*y + x)");
    Sampler s(3);
    WeilPoint x = s.point(WeilAlgebra::k(), 2, ScalarMode::ExactRational);
    ArrowPoint a = arrow_lift(FiberedMorphism::identity(p), {x, lift_eval(p.projection(), x)});
    EXPECT_EQ(a.total, x);

    // T^W id = id on flattened coefficients.
    FiberedObject id = arrow_weil_functor(D(), FiberedObject::identity(1));
    Vector v{Scalar(Rational(3)), Scalar(Rational(-2))};
    EXPECT_EQ(evaluate(id.projection(), v), v);
}

TEST(ArrowFunctor, LinearProjectionOverDualNumbers) {
    FiberedObject tp = arrow_weil_functor(D(), fib("fibered p(x,y) -> (x)"));
    EXPECT_EQ(tp.total_dimension(), 4u);
    EXPECT_EQ(tp.base_dimension(), 2u);
    Vector flat{Scalar(Rational(1)), Scalar(Rational(2)), Scalar(Rational(3)), Scalar(Rational(4))};
    EXPECT_EQ(evaluate(tp.projection(), flat), (Vector{Scalar(Rational(1)), Scalar(Rational(2))}));
}

TEST(ArrowFunctor, LawsAtArrowLevel) {
    Sampler s(11);
    std::vector<WeilAlgebra> algebras{D(), WeilAlgebra::truncated_line(2), WeilAlgebra::first_order(2)};
    for (const char *text : {"fibered p(x,y) -> (x^2*y - y)", "fibered p(x,y,z) -> (x*z, y+z^3)",
                             "fibered p(x) -> (exp(x)*x)"}) {
        FiberedObject p = fib(text);
        for (const auto &w1 : algebras) {
            WeilMorphism phi = s.morphism(w1, WeilAlgebra::truncated_line(3, "t"));
            Report r = check_arrow_functor(p, w1, D("e"), phi, {8, 5});
            EXPECT_TRUE(r.all_pass()) << r.text();
            EXPECT_EQ(r.entries().size(), 3u);
        }
    }
}

TEST(FiberedMicrolinear, LinearProjectionOnEqualizer) {
    FiberedObject p = fib("fibered p(x,y) -> (x)");
    FiberedMicrolinearResult r = check_fibered_microlinear(p, symmetric_equalizer());
    EXPECT_TRUE(r.fibered_microlinear) << r.summary();
    EXPECT_TRUE(r.iff_holds);
    EXPECT_EQ(r.arrow.rank, r.total.rank + r.base.rank);
}

TEST(FiberedMicrolinear, IdentityArrowReducesToPlain) {
    for (std::size_t d = 1; d <= 3; ++d) {
        FiberedMicrolinearResult r = check_fibered_microlinear(FiberedObject::identity(d), dual_pullback());
        MicrolinearCertificate plain = check_microlinear(ModelObject::coordinate(d), dual_pullback());
        EXPECT_EQ(r.fibered_microlinear, plain.microlinear);
        EXPECT_EQ(r.total.rank, plain.rank);
        EXPECT_TRUE(r.iff_holds);
    }
}

TEST(FiberedMicrolinear, BrokenConeKeepsTheIff) {
    FiberedObject p = fib("fibered p(x,y) -> (x*y)");
    for (const auto &d : {symmetric_equalizer(), dual_pullback()}) {
        FiberedMicrolinearResult r = check_fibered_microlinear(p, break_cone(d));
        EXPECT_FALSE(r.fibered_microlinear);
        EXPECT_FALSE(r.arrow.microlinear);
        EXPECT_FALSE(r.total.microlinear);
        EXPECT_TRUE(r.iff_holds) << r.summary();
    }
}

TEST(FiberedMicrolinear, IffOnRandomDiagrams) {
    Sampler s(21);
    FiberedObject p = fib("fibered p(x,y) -> (x+y^2)");
    for (int i = 0; i < 10; ++i) {
        DiagramInWeil d = random_limit_diagram(s, 3);
        FiberedMicrolinearResult good = check_fibered_microlinear(p, d, {4, 2});
        EXPECT_TRUE(good.fibered_microlinear) << good.summary();
        EXPECT_TRUE(good.iff_holds);
        FiberedMicrolinearResult bad = check_fibered_microlinear(p, break_cone(d), {4, 2});
        EXPECT_FALSE(bad.fibered_microlinear);
        EXPECT_TRUE(bad.iff_holds);
    }
}

TEST(VerticalMembership, ProjectionOverDualNumbers) {
    FiberedObject p = fib("fibered p(x,y) -> (x)");
    WeilAlgebra w = D("d");
    EXPECT_TRUE(vertical_membership(p, WeilPoint(w, {el(w, {2, 0}), el(w, {5, 7})})));
    EXPECT_FALSE(vertical_membership(p, WeilPoint(w, {el(w, {2, 1}), el(w, {5, 0})})));
    EXPECT_THROW(vertical_membership(p, WeilPoint(w, {el(w, {2, 1})})), WeilError);
}

TEST(VerticalMembership, ConstantPointsAreVertical) {
    Sampler s(5);
    FiberedObject p = sphere();
    for (const auto &w : {D(), WeilAlgebra::truncated_line(3), WeilAlgebra::first_order(2)}) {
        WeilPoint base = s.point(WeilAlgebra::k(), 3, ScalarMode::ExactRational);
        EXPECT_TRUE(vertical_membership(p, iota(w, base)));
    }
}

TEST(VerticalFiber, SphereAtPoleSpansJacobianKernel) {
    VerticalFiber f = vertical_fiber(sphere(), D("d"), {Scalar(Rational(1)), Scalar(Rational(0)), Scalar(Rational(0))});
    EXPECT_TRUE(f.regular());
    EXPECT_EQ(f.dimension(), 2u);
    ASSERT_EQ(f.degrees().size(), 1u);
    EXPECT_EQ(f.degrees()[0].free_parameters, 2u);

    // Kernel of the gradient (2, 0, 0), by hand.
    oracle::Grid grad{{2, 0, 0}};
    auto expected = oracle::kernel(grad, 3);
    std::vector<std::vector<oracle::Q>> kernel(f.kernel().begin(), f.kernel().end());
    EXPECT_TRUE(oracle::same_span(kernel, expected));
    EXPECT_TRUE(oracle::same_span(kernel, {{0, 1, 0}, {0, 0, 1}}));

    std::vector<std::vector<oracle::Q>> dirs;
    for (const auto &d : f.degrees()[0].directions)
        dirs.push_back(nilpotent_part(d));
    EXPECT_TRUE(oracle::same_span(dirs, expected));
}

TEST(VerticalFiber, IdentityHasPointFiber) {
    for (const auto &w : {D(), WeilAlgebra::truncated_line(2), WeilAlgebra::first_order(3)}) {
        VerticalFiber f = vertical_fiber(FiberedObject::identity(2), w, {Scalar(Rational(4)), Scalar(Rational(-1, 2))});
        EXPECT_EQ(f.dimension(), 0u);
        WeilPoint x = f.point({});
        EXPECT_EQ(x, iota(w, WeilPoint::constant(WeilAlgebra::k(), {Scalar(Rational(4)), Scalar(Rational(-1, 2))})));
    }
}

TEST(VerticalFiber, ProjectionWithSecondOrderLine) {
    WeilAlgebra w = WeilAlgebra::truncated_line(2, "d");
    VerticalFiber f = vertical_fiber(fib("fibered p(x,y) -> (x)"), w, {Scalar(Rational(3)), Scalar(Rational(5))});
    EXPECT_EQ(f.dimension(), 2u);
    std::vector<std::vector<oracle::Q>> nil;
    for (QVector params : {QVector{1, 0}, QVector{0, 1}, QVector{2, -7}}) {
        WeilPoint x = f.point(params);
        EXPECT_EQ(x[0].to_rational(), (QVector{3, 0, 0}));
        EXPECT_EQ(x[1].to_rational()[0], Rational(5));
        EXPECT_EQ(f.parameters(x), params);
        nil.push_back(nilpotent_part(x));
    }
    // (e0_1, e0_2 + c1 d + c2 d^2): the second coordinate's d and d^2 are free.
    EXPECT_TRUE(oracle::same_span(nil, {{0, 0, 1, 0}, {0, 0, 0, 1}}));
}

TEST(VerticalFiber, HigherOrderSphereSolvesDegreeTwo) {
    WeilAlgebra w = WeilAlgebra::truncated_line(2, "d");
    VerticalFiber f = vertical_fiber(sphere(), w, {Scalar(Rational(1)), Scalar(Rational(0)), Scalar(Rational(0))});
    EXPECT_EQ(f.dimension(), 4u);
    Sampler s(8);
    for (int i = 0; i < 10; ++i) {
        QVector params = s.rational_vector(4);
        WeilPoint x = f.point(params);
        EXPECT_TRUE(vertical_membership(sphere(), x));
        // Degree two forces x_d2 = -(y_d^2 + z_d^2)/2 with x_d = 0.
        Rational yd = x[1].to_rational()[1], zd = x[2].to_rational()[1];
        EXPECT_EQ(x[0].to_rational()[1], Rational(0));
        EXPECT_EQ(x[0].to_rational()[2], -(yd * yd + zd * zd) / 2);
        EXPECT_EQ(f.parameters(x), params);
    }
}

TEST(VerticalFiber, IrregularPointIsFlagged) {
    VerticalFiber f = vertical_fiber(sphere(), WeilAlgebra::truncated_line(2),
                                     {Scalar(Rational(0)), Scalar(Rational(0)), Scalar(Rational(0))});
    EXPECT_FALSE(f.regular());
    ASSERT_EQ(f.degrees().size(), 2u);
    EXPECT_EQ(f.degrees()[0].free_parameters, 3u);
    EXPECT_EQ(f.point(QVector(f.dimension(), 0)), iota(WeilAlgebra::truncated_line(2),
                                                        WeilPoint::constant(WeilAlgebra::k(), Vector(3, Scalar(Rational(0))))));
    QVector params(f.dimension(), 0);
    params[0] = 1;
    EXPECT_THROW(f.point(params), WeilError);
    EXPECT_NE(f.str().find("regular: no"), std::string::npos);
}

TEST(VerticalFiber, RejectsFloatAndTranscendental) {
    EXPECT_THROW(vertical_fiber(sphere(), D(), {Scalar(1.0), Scalar(0.0), Scalar(0.0)}), ModeError);
    EXPECT_THROW(vertical_fiber(fib("fibered p(x) -> (exp(x))"), D(), {Scalar(Rational(0))}), ModeError);
    EXPECT_THROW(vertical_fiber(sphere(), D(), {Scalar(Rational(0))}), WeilError);
}

TEST(VerticalFiber, MembershipOfForeignPoints) {
    VerticalFiber f = vertical_fiber(sphere(), D("d"), {Scalar(Rational(1)), Scalar(Rational(0)), Scalar(Rational(0))});
    WeilAlgebra w = D("d");
    EXPECT_FALSE(f.parameters(WeilPoint(w, {el(w, {1, 1}), el(w, {0, 0}), el(w, {0, 0})})));
    EXPECT_FALSE(f.parameters(WeilPoint(w, {el(w, {2, 0}), el(w, {0, 0}), el(w, {0, 0})})));
    EXPECT_EQ(f.parameters(WeilPoint(w, {el(w, {1, 0}), el(w, {0, 3}), el(w, {0, -1})})).value().size(), 2u);
}

// For W = D and a regular point the fiber dimension is e - b.
TEST(VerticalFiberProperty, RegularDimensionAndSoundness) {
    Sampler s(31);
    int regular = 0;
    for (int i = 0; i < 25; ++i) {
        std::size_t e = 2 + i % 3, b = 1 + i % 2;
        FiberedObject p(s.polynomial_map(e, b, 3));
        QVector e0 = s.rational_vector(e);
        VerticalFiber f = vertical_fiber(p, D(), Vector(e0.begin(), e0.end()));
        oracle::Grid jac;
        for (std::size_t r = 0; r < f.jacobian().rows(); ++r)
            jac.emplace_back(f.jacobian().row(r).begin(), f.jacobian().row(r).end());
        bool oracle_regular = oracle::rank(jac) == b;
        EXPECT_EQ(f.regular(), oracle_regular);
        if (oracle_regular) {
            ++regular;
            EXPECT_EQ(f.dimension(), e - b);
        }
        for (int k = 0; k < 3; ++k) {
            QVector params = s.rational_vector(f.dimension());
            WeilPoint x = f.point(params);
            EXPECT_TRUE(vertical_membership(p, x));
            EXPECT_EQ(f.parameters(x), params);
        }
    }
    EXPECT_GT(regular, 10);
}

TEST(VerticalEqualizer, SphereConesMediateUniquely) {
    ReportEntry r = check_vertical_equalizer(sphere(), D(), {1, 0, 0}, {20, 4});
    EXPECT_TRUE(r.pass) << r.certificate;
    EXPECT_NE(r.certificate.find("20/20"), std::string::npos);
    ReportEntry r2 = check_vertical_equalizer(sphere(), WeilAlgebra::first_order(2), {0, 3, 4}, {10, 4});
    EXPECT_TRUE(r2.pass) << r2.certificate;
}

TEST(VerticalFunctor, IdentityAndLinearMaps) {
    FiberedObject p = fib("fibered p(x,y) -> (x)");
    WeilAlgebra w = D("d");
    WeilPoint x(w, {el(w, {2, 0}), el(w, {5, 7})});
    EXPECT_EQ(vertical_functor_on_morphism(p, p, FiberedMorphism::identity(p), x), x);

    // Fiberwise linear map (x,y) |-> (x, 3y + x): acts on kernel vectors by the matrix.
    FiberedMorphism m{map("map f(x,y) -> (x, 3*y + x)"), SmoothMap::identity(1)};
    WeilPoint y = vertical_functor_on_morphism(p, p, m, x);
    EXPECT_EQ(y[1].to_rational(), (QVector{17, 21}));

    EXPECT_THROW(vertical_functor_on_morphism(p, p, m, WeilPoint(w, {el(w, {2, 1}), el(w, {5, 0})})), WeilError);
    FiberedMorphism broken{map("map f(x,y) -> (y, x)"), SmoothMap::identity(1)};
    EXPECT_THROW(vertical_functor_on_morphism(p, p, broken, x), WeilError);
}

TEST(VerticalFunctor, Functoriality) {
    FiberedObject p = sphere();
    FiberedMorphism m1{map("map f(x,y,z) -> (y,z,x)"), SmoothMap::identity(1)};
    FiberedMorphism m2{map("map f(x,y,z) -> (2*x,2*y,2*z)"), map("map g(s) -> (4*s)")};
    Sampler s(41);
    for (int i = 0; i < 20; ++i) {
        QVector e0 = s.rational_vector(3);
        VerticalFiber f = vertical_fiber(p, WeilAlgebra::truncated_line(2), Vector(e0.begin(), e0.end()));
        if (!f.regular())
            continue;
        WeilPoint x = f.point(s.rational_vector(f.dimension()));
        WeilPoint twice = vertical_functor_on_morphism(p, p, m2, vertical_functor_on_morphism(p, p, m1, x));
        EXPECT_EQ(vertical_functor_on_morphism(p, p, compose(m2, m1), x), twice);
    }
}

TEST(VerticalNaturality, SphereScaling) {
    FiberedMorphism m{map("map f(x,y,z) -> (2*x,2*y,2*z)"), map("map g(s) -> (4*s)")};
    ReportEntry r = check_vertical_naturality(sphere(), sphere(), m, D(), {50, 9});
    EXPECT_TRUE(r.pass) << r.certificate;
    EXPECT_NE(r.certificate.find("50/50"), std::string::npos);
}

TEST(VerticalLeftExact, OneObjectDiagram) {
    FiberedDiagram d;
    d.objects = {fib("fibered p(x,y) -> (x-y)")};
    d.cone = FiberedCone{d.objects[0], {FiberedMorphism::identity(d.objects[0])}};
    VerdictResult r = check_vertical_left_exact(d, D());
    EXPECT_TRUE(r.holds) << r.reason;
    EXPECT_EQ(r.method, "exact");
}

TEST(VerticalLeftExact, PullbackOfLinearProjections) {
    FiberedDiagram d = projection_pullback();
    ASSERT_TRUE(d.cone);
    EXPECT_EQ(d.cone->apex.total_dimension(), 3u);
    EXPECT_EQ(d.cone->apex.base_dimension(), 1u);
    for (const auto &w : {D(), WeilAlgebra::truncated_line(2), WeilAlgebra::first_order(2)}) {
        VerdictResult r = check_vertical_left_exact(d, w);
        EXPECT_TRUE(r.holds) << r.reason;
        EXPECT_EQ(r.method, "exact");
        VerdictResult bad = check_vertical_left_exact(break_fibered_cone(d), w);
        EXPECT_FALSE(bad.holds) << bad.reason;
    }
}

TEST(VerticalLeftExact, NonlinearFallsBackToSampling) {
    FiberedDiagram d;
    d.objects = {fib("fibered p(x,y) -> (x^2 + y)"), fib("fibered q(x) -> (x^2)")};
    d = fibered_limit(d);
    VerdictResult r = check_vertical_left_exact(d, D(), {6, 3});
    EXPECT_TRUE(r.holds) << r.reason;
    EXPECT_EQ(r.method, "sampled");
}

TEST(VerticalMicrolinearity, LinearProjectionExact) {
    FiberedObject p = fib("fibered p(x,y,z) -> (x + 2*y - z)");
    VerdictResult r = check_vertical_microlinearity(p, symmetric_equalizer(), {1, 1, 1});
    EXPECT_TRUE(r.holds) << r.reason;
    EXPECT_EQ(r.method, "exact");
    VerdictResult bad = check_vertical_microlinearity(p, break_cone(symmetric_equalizer()), {1, 1, 1});
    EXPECT_FALSE(bad.holds);
}

TEST(VerticalMicrolinearity, SingleIdentityDiagram) {
    DiagramInWeil d;
    d.objects = {D()};
    d.cone = Cone{D(), {WeilMorphism::identity(D())}};
    VerdictResult r = check_vertical_microlinearity(fib("fibered p(x,y) -> (x)"), d, {0, 0});
    EXPECT_TRUE(r.holds) << r.reason;
}

TEST(VerticalMicrolinearity, CircleOverDualPullback) {
    FiberedObject p = fib("fibered p(x,y) -> (x^2 + y^2)");
    VerdictResult r = check_vertical_microlinearity(p, dual_pullback(), {1, 0});
    EXPECT_TRUE(r.holds) << r.reason;
    EXPECT_EQ(r.method, "degree-graded");
    VerdictResult bad = check_vertical_microlinearity(p, break_cone(dual_pullback()), {1, 0});
    EXPECT_FALSE(bad.holds);
}

TEST(VerticalMicrolinearity, SphereAndIrregularPoint) {
    VerdictResult r = check_vertical_microlinearity(sphere(), symmetric_equalizer(), {1, 0, 0});
    EXPECT_TRUE(r.holds) << r.reason;
    EXPECT_EQ(r.method, "degree-graded");
    VerdictResult irr = check_vertical_microlinearity(sphere(), dual_pullback(), {0, 0, 0}, {5, 2});
    EXPECT_EQ(irr.method, "sampled");
}

TEST(ExponentialPullback, Degenerations) {
    FiberedObject p = fib("fibered p(x,y) -> (x)");
    InfinitesimalArrow id_d{WeilMorphism::identity(D("f"))};
    ReportEntry r = fibered_exponential_pullback(p, id_d, D(), D("y"), {20, 1});
    EXPECT_TRUE(r.pass) << r.certificate;
    EXPECT_NE(r.certificate.find("20/20"), std::string::npos);

    ReportEntry k1 = fibered_exponential_pullback(p, id_d, WeilAlgebra::k(), D("y"), {10, 2});
    EXPECT_TRUE(k1.pass) << k1.certificate;
    EXPECT_NE(k1.instance.find("(W1=k)"), std::string::npos);

    InfinitesimalArrow terminal{WeilMorphism::identity(WeilAlgebra::k())};
    ReportEntry one = fibered_exponential_pullback(sphere(), terminal, D(), WeilAlgebra::truncated_line(2), {10, 3});
    EXPECT_TRUE(one.pass) << one.certificate;
    EXPECT_NE(one.instance.find("(F=N=1)"), std::string::npos);
}

TEST(ExponentialPullback, NonTrivialExponentArrows) {
    Sampler s(51);
    FiberedObject p = fib("fibered p(x,y) -> (x*y + y^2)");
    // psi: W_N -> W_F; the augmentation F = Spec D -> N = Spec k and a non-iso into k[t]/(t^3).
    InfinitesimalArrow point{unit_map(D("f"))};
    ReportEntry r = fibered_exponential_pullback(p, point, D(), D("y"), {10, 4});
    EXPECT_TRUE(r.pass) << r.certificate;
    for (int i = 0; i < 3; ++i) {
        InfinitesimalArrow q{s.morphism(D("n"), WeilAlgebra::truncated_line(2, "f"))};
        ReportEntry e = fibered_exponential_pullback(p, q, WeilAlgebra::first_order(2), D("y"), {5, 5 + i});
        EXPECT_TRUE(e.pass) << e.certificate;
    }
    ReportEntry tr = fibered_exponential_pullback(fib("fibered p(x) -> (exp(x))"), InfinitesimalArrow{unit_map(D())},
                                                  D(), D("y"), {5, 6});
    EXPECT_TRUE(tr.pass) << tr.certificate;
}

#include "weilkit/suites.hpp"

#include "weilkit/parse.hpp"

#include <sstream>
#include <stdexcept>

namespace weilkit {

namespace {

// The algebras of the functor battery: D, D (x) D, k[x]/(x^3), D(2).
std::vector<WeilAlgebra> battery_algebras() {
    return {WeilAlgebra::dual_numbers(), tensor(WeilAlgebra::dual_numbers("x"), WeilAlgebra::dual_numbers("y")).algebra,
            WeilAlgebra::truncated_line(2), WeilAlgebra::first_order(2)};
}

WeilAlgebra pick(Sampler &s, const std::vector<WeilAlgebra> &from) {
    return from[static_cast<std::size_t>(s.integer(0, static_cast<long>(from.size()) - 1))];
}

std::vector<WeilAlgebra> small_algebras(bool with_k) {
    std::vector<WeilAlgebra> out;
    if (with_k)
        out.push_back(WeilAlgebra::k());
    out.push_back(WeilAlgebra::dual_numbers());
    out.push_back(WeilAlgebra::truncated_line(2));
    out.push_back(WeilAlgebra::first_order(2));
    return out;
}

SampleSpec spec(const SuiteConfig &c, Sampler &s) { return {c.samples, s.next()}; }

const char *shape(const DiagramInWeil &d) {
    if (d.objects.size() == 1 && d.arrows.empty())
        return "one object";
    if (d.objects.size() == 2 && d.arrows.size() == 2)
        return "equalizer";
    if (d.objects.size() == 3 && d.arrows.size() == 2)
        return "pullback";
    if (d.arrows.empty())
        return "product";
    return "diagram";
}

FiberedObject fib(const std::string &text) { return FiberedObject::parse(text); }

std::vector<FiberedObject> fibered_corpus(bool with_float) {
    std::vector<FiberedObject> out{fib("fibered p(x,y) -> (x)"), fib("fibered pi(x,y,z) -> (x^2+y^2+z^2)"),
                                   fib("fibered q(x,y) -> (x*y + y^2)")};
    if (with_float)
        out.push_back(fib("fibered r(x) -> (exp(x)*x)"));
    return out;
}

// Pullback of the projections (x,y) |-> x over id_R, with its limit cone.
FiberedDiagram projection_pullback() {
    FiberedDiagram d;
    d.objects = {fib("fibered p(x,y) -> (x)"), fib("fibered q(x,y) -> (x + y)"), FiberedObject::identity(1)};
    d.arrows = {{0, 2, {parse_map("map f(x,y) -> (x)"), SmoothMap::identity(1)}},
                {1, 2, {parse_map("map g(x,y) -> (x + y)"), SmoothMap::identity(1)}}};
    return fibered_limit(d);
}

// Product of two nonlinear fibered objects, with its limit cone.
FiberedDiagram nonlinear_product() {
    FiberedDiagram d;
    d.objects = {fib("fibered p(x,y) -> (x^2 + y)"), fib("fibered q(x) -> (x^2)")};
    return fibered_limit(d);
}

DiagramInWeil symmetric_equalizer() {
    TensorProduct t = tensor(WeilAlgebra::dual_numbers("a"), WeilAlgebra::dual_numbers("b"));
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

DiagramInWeil dual_pullback() {
    DiagramInWeil d;
    d.objects = {WeilAlgebra::dual_numbers("a"), WeilAlgebra::dual_numbers("b"), WeilAlgebra::k()};
    d.arrows = {{0, 2, augmentation(d.objects[0])}, {1, 2, augmentation(d.objects[1])}};
    return with_limit_cone(d);
}

std::string point_str(const QVector &v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? "," : "") + v[i].get_str();
    return s + ")";
}

void require_exact(const std::string &name, const SuiteConfig &c) {
    if (c.mode != ScalarMode::ExactRational)
        throw std::invalid_argument("suite '" + name + "' is exact by construction; --mode float is not supported");
}

} // namespace

std::string describe(const DiagramInWeil &d) {
    std::ostringstream os;
    os << shape(d);
    if (!d.arrows.empty())
        os << " of " << d.arrows.size() << " arrow" << (d.arrows.size() == 1 ? "" : "s");
    os << " on [";
    for (std::size_t i = 0; i < d.objects.size(); ++i)
        os << (i ? ", " : "") << d.objects[i].describe();
    os << "]";
    if (d.cone)
        os << "; apex dim " << d.cone->apex.dimension();
    return os.str();
}

ReportEntry control_entry(std::string check, std::string instance, bool accepted, const std::string &detail) {
    return {std::move(check), std::move(instance) + " (control)", !accepted,
            (accepted ? "checker accepted a mutated input: " : "rejected as expected: ") + detail};
}

const std::vector<std::string> &suite_names() {
    static const std::vector<std::string> names{"axioms", "microlinear", "exponentiable", "fibered", "vertical"};
    return names;
}

Report run_suite(const std::string &name, const SuiteConfig &config) {
    if (name == "axioms")
        return axioms_suite(config);
    if (name == "microlinear")
        return microlinear_suite(config);
    if (name == "exponentiable")
        return exponentiable_suite(config);
    if (name == "fibered")
        return fibered_suite(config);
    if (name == "vertical")
        return vertical_suite(config);
    throw std::invalid_argument("unknown suite '" + name + "'");
}

Report axioms_suite(const SuiteConfig &c) {
    Sampler s(c.seed);
    Report r;
    const auto algebras = battery_algebras();
    for (std::size_t i = 0; i < algebras.size(); ++i)
        for (std::size_t j = 0; j < algebras.size(); ++j) {
            auto m = static_cast<std::size_t>(s.integer(1, 2));
            auto n = static_cast<std::size_t>(s.integer(1, 2));
            SmoothMap f = s.polynomial_map(m, n, 3);
            r.add(check_functor_composition(f, algebras[i], algebras[j], spec(c, s)));
        }
    std::vector<WeilAlgebra> targets = algebras;
    targets.push_back(WeilAlgebra::truncated_line(3, "t"));
    for (const auto &w : algebras) {
        SmoothMap f = s.polynomial_map(static_cast<std::size_t>(s.integer(1, 3)), 2, 3);
        r.add(check_bifunctor(f, s.morphism(w, pick(s, targets)), spec(c, s)));
    }
    if (c.mode == ScalarMode::Float64) {
        for (const char *text : {"map f(u) -> (exp(sin(u)))", "map g(u,v) -> (sin(u)*v, log(u+v))"}) {
            SmoothMap f = parse_map(text);
            r.add(check_functor_composition(f, pick(s, algebras), pick(s, algebras), spec(c, s)));
            r.add(check_bifunctor(f, s.morphism(pick(s, algebras), pick(s, targets)), spec(c, s)));
        }
    }
    return r;
}

Report microlinear_suite(const SuiteConfig &c) {
    require_exact("microlinear", c);
    Sampler s(c.seed);
    Report r;
    SampleSpec few{std::max<std::size_t>(1, c.samples / 4), 0};
    for (std::size_t d = 1; d <= 3; ++d) {
        for (int i = 0; i < 7; ++i) {
            DiagramInWeil diagram = random_limit_diagram(s, 3);
            few.seed = s.next();
            std::string inst = "X=R^" + std::to_string(d) + "; " + describe(diagram);
            MicrolinearCertificate good = check_microlinear(ModelObject::coordinate(d), diagram, few);
            r.add("microlinear", inst, good.microlinear, good.summary());
            if (c.negative_controls) {
                MicrolinearCertificate bad = check_microlinear(ModelObject::coordinate(d), break_cone(diagram), few);
                r.add(control_entry("microlinear", inst, bad.microlinear, bad.summary()));
            }
        }
    }
    for (int i = 0; i < 3; ++i) {
        ModelObject x = random_affine_limit(s);
        DiagramInWeil diagram = random_limit_diagram(s, 3);
        few.seed = s.next();
        MicrolinearCertificate good = check_microlinear(x, diagram, few);
        r.add("microlinear", "X=" + x.describe() + "; " + describe(diagram), good.microlinear, good.summary());
    }
    return r;
}

Report exponentiable_suite(const SuiteConfig &c) {
    require_exact("exponentiable", c);
    Sampler s(c.seed);
    Report r;
    const auto with_k = small_algebras(true), without_k = small_algebras(false);
    std::vector<ModelObject> objects{ModelObject::coordinate(1), ModelObject::coordinate(2), random_affine_limit(s)};
    for (const auto &x : objects)
        for (int i = 0; i < 3; ++i) {
            InfinitesimalExponent y{pick(s, with_k)};
            r.add(check_weil_exponentiable(x, y, pick(s, with_k), pick(s, without_k), spec(c, s)));
        }
    r.merge(closure_suite(s.next(), 2, std::max<std::size_t>(1, c.samples / 4)));
    return r;
}

// Closure pattern for the arrow category: T^W of a fibered object, its
// fibered limits and its exponentials pass the checks again.
Report fibered_suite(const SuiteConfig &c) {
    require_exact("fibered", c);
    Sampler s(c.seed);
    Report r;
    const auto algebras = small_algebras(false);
    SampleSpec few{std::max<std::size_t>(1, c.samples / 4), 0};
    for (const auto &p : fibered_corpus(true)) {
        WeilAlgebra w1 = pick(s, algebras);
        r.merge(check_arrow_functor(p, w1, pick(s, algebras), s.morphism(w1, pick(s, algebras)), spec(c, s)));

        DiagramInWeil d = random_limit_diagram(s, 3);
        few.seed = s.next();
        std::string inst = p.str() + "; " + describe(d);
        FiberedMicrolinearResult m = check_fibered_microlinear(p, d, few);
        r.add("fibered-microlinear", inst, m.fibered_microlinear && m.iff_holds, m.summary());
        if (c.negative_controls) {
            FiberedMicrolinearResult bad = check_fibered_microlinear(p, break_cone(d), few);
            r.add(control_entry("fibered-microlinear", inst, bad.fibered_microlinear || !bad.iff_holds,
                                bad.summary()));
        }

        InfinitesimalArrow q{s.morphism(pick(s, small_algebras(true)), pick(s, algebras))};
        r.add(fibered_exponential_pullback(p, q, pick(s, small_algebras(true)), pick(s, algebras), spec(c, s)));
    }

    // T^D of a fibered object is again one.
    FiberedObject tp = arrow_weil_functor(WeilAlgebra::dual_numbers(), fib("fibered q(x,y) -> (x*y + y^2)"));
    r.merge(check_arrow_functor(tp, WeilAlgebra::dual_numbers("e"), WeilAlgebra::dual_numbers("f"),
                                s.morphism(WeilAlgebra::dual_numbers("e"), WeilAlgebra::truncated_line(2)),
                                {std::max<std::size_t>(1, c.samples / 4), s.next()}));

    // Fibered limits: the apex passes the checks, and V^W preserves the limit.
    for (const auto &d : {projection_pullback(), nonlinear_product()}) {
        const FiberedObject &apex = d.cone->apex;
        WeilAlgebra w = pick(s, algebras);
        r.merge(check_arrow_functor(apex, w, pick(s, algebras), s.morphism(w, pick(s, algebras)), spec(c, s)));
        DiagramInWeil wd = random_limit_diagram(s, 3);
        few.seed = s.next();
        FiberedMicrolinearResult m = check_fibered_microlinear(apex, wd, few);
        r.add("fibered-microlinear", "limit apex " + apex.str() + "; " + describe(wd),
              m.fibered_microlinear && m.iff_holds, m.summary());
        WeilAlgebra wv = pick(s, algebras);
        r.add(check_vertical_left_exact(d, wv, spec(c, s)).entry("vertical-left-exact",
                                                                  apex.str() + "; W=" + wv.describe()));
        if (c.negative_controls) {
            VerdictResult bad = check_vertical_left_exact(break_fibered_cone(d), wv, spec(c, s));
            r.add(control_entry("vertical-left-exact", apex.str() + "; W=" + wv.describe(), bad.holds,
                                bad.method + ": " + bad.reason));
        }
    }
    return r;
}

Report vertical_suite(const SuiteConfig &c) {
    require_exact("vertical", c);
    Sampler s(c.seed);
    Report r;
    const FiberedObject sphere = fib("fibered pi(x,y,z) -> (x^2+y^2+z^2)");
    const FiberedObject projection = fib("fibered p(x,y) -> (x)");
    const QVector pole{1, 0, 0};

    // Fibers: dimension e - b at regular points for W = D.
    for (const auto &p : fibered_corpus(false)) {
        for (int i = 0; i < 3; ++i) {
            QVector e0 = s.rational_vector(p.total_dimension());
            VerticalFiber f = vertical_fiber(p, WeilAlgebra::dual_numbers(), Vector(e0.begin(), e0.end()));
            bool ok = !f.regular() || f.dimension() == p.total_dimension() - p.base_dimension();
            std::size_t sound = 0;
            for (std::size_t k = 0; k < c.samples; ++k) {
                QVector params = s.rational_vector(f.dimension());
                WeilPoint x = f.point(params);
                if (vertical_membership(p, x) && f.parameters(x) == params)
                    ++sound;
            }
            ok = ok && sound == c.samples;
            std::ostringstream cert;
            cert << "dimension " << f.dimension() << (f.regular() ? " (regular)" : " (irregular)") << "; " << sound
                 << "/" << c.samples << " parametrized points vertical and recovered";
            r.add("vertical-fiber", p.str() + " at " + point_str(e0) + "; W=Q[x]/(x^2)", ok, cert.str());
        }
    }

    r.add(check_vertical_equalizer(sphere, WeilAlgebra::dual_numbers(), pole, spec(c, s)));
    r.add(check_vertical_equalizer(projection, WeilAlgebra::truncated_line(2), {3, 5}, spec(c, s)));
    r.add(check_vertical_equalizer(sphere, WeilAlgebra::first_order(2), {0, 3, 4}, spec(c, s)));

    FiberedMorphism scale{parse_map("map f(x,y,z) -> (2*x,2*y,2*z)"), parse_map("map g(s) -> (4*s)")};
    r.add(check_vertical_naturality(sphere, sphere, scale, WeilAlgebra::dual_numbers(), spec(c, s)));
    FiberedMorphism shear{parse_map("map f(x,y) -> (x, 3*y + x)"), SmoothMap::identity(1)};
    r.add(check_vertical_naturality(projection, projection, shear, WeilAlgebra::truncated_line(2), spec(c, s)));

    struct Case {
        FiberedObject p;
        DiagramInWeil d;
        QVector e0;
    };
    std::vector<Case> cases{{fib("fibered p(x,y,z) -> (x + 2*y - z)"), symmetric_equalizer(), {1, 1, 1}},
                            {sphere, symmetric_equalizer(), pole},
                            {fib("fibered c(x,y) -> (x^2 + y^2)"), dual_pullback(), {1, 0}},
                            {sphere, dual_pullback(), {0, 3, 4}}};
    for (const auto &k : cases) {
        std::string inst = k.p.str() + " at " + point_str(k.e0) + "; " + describe(k.d);
        r.add(check_vertical_microlinearity(k.p, k.d, k.e0, spec(c, s)).entry("vertical-microlinear", inst));
        if (c.negative_controls) {
            VerdictResult bad = check_vertical_microlinearity(k.p, break_cone(k.d), k.e0, spec(c, s));
            r.add(control_entry("vertical-microlinear", inst, bad.holds, bad.method + ": " + bad.reason));
        }
    }

    for (const auto &d : {projection_pullback(), nonlinear_product()}) {
        std::string inst = d.cone->apex.str() + "; W=Q[x]/(x^2)";
        r.add(check_vertical_left_exact(d, WeilAlgebra::dual_numbers(), spec(c, s)).entry("vertical-left-exact", inst));
        if (c.negative_controls) {
            VerdictResult bad = check_vertical_left_exact(break_fibered_cone(d), WeilAlgebra::dual_numbers());
            r.add(control_entry("vertical-left-exact", inst, bad.holds, bad.method + ": " + bad.reason));
        }
    }
    return r;
}

} // namespace weilkit

// weilkit: command line front end for the Weil algebra and microlinearity checks.
//
// Exit codes: 0 all checks pass, 1 some check fails, 2 usage, parse or
// evaluation error.

#include "weilkit/fibered.hpp"
#include "weilkit/parse.hpp"
#include "weilkit/suites.hpp"
#include "weilkit/weil_text.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <sstream>
#include <stdexcept>

using namespace weilkit;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct Options {
    std::string mode = "auto";
    std::uint64_t seed = 1;
    std::size_t samples = 20;
    std::string output = "text";
};

// Key-value or aligned text output with a stable key order.
class Printer {
public:
    explicit Printer(bool kv) : kv_(kv) {}
    void put(const std::string &key, const std::string &value) {
        if (kv_)
            std::cout << key << "=" << value << "\n";
        else
            std::cout << key << ": " << value << "\n";
    }

private:
    bool kv_;
};

std::vector<std::string> split(const std::string &text, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(text);
    while (std::getline(is, item, sep))
        out.push_back(item);
    return out;
}

Vector parse_point(const std::string &text) {
    Vector out;
    for (const auto &part : split(text, ','))
        out.push_back(Scalar(parse_rational(part)));
    if (out.empty())
        throw ParseError("empty point");
    return out;
}

// `map f(u) -> (...)` or a bare expression in its free variables. A
// constant expression takes the default variables for the point's arity.
SmoothMap parse_function(const std::string &text, std::size_t arity) {
    if (text.rfind("map", 0) == 0)
        return parse_map(text);
    std::vector<std::string> vars;
    Expr e = parse_expression(text, vars);
    if (vars.empty())
        vars = default_variable_names(arity);
    return SmoothMap("f", vars, {e});
}

Vector to_mode(const Vector &v, ScalarMode mode) {
    Vector out;
    for (const auto &s : v)
        out.push_back(mode == ScalarMode::Float64 ? Scalar(s.to_double()) : s);
    return out;
}

int cmd_jet(const Options &o, const std::string &text, const std::string &at, unsigned order, bool mixed) {
    Vector point = parse_point(at);
    SmoothMap f = parse_function(text, point.size());
    if (point.size() != f.arity_in())
        throw ParseError("expected a point with " + std::to_string(f.arity_in()) + " coordinates, got " +
                         std::to_string(point.size()));
    ScalarMode mode = ScalarMode::ExactRational;
    if (o.mode == "float" || (o.mode == "auto" && f.has_transcendental()))
        mode = ScalarMode::Float64;
    point = to_mode(point, mode);
    Jet j = mixed ? jet(f, point, 1) : point.size() == 1 ? jet(f, point[0], order) : jet(f, point, order);

    Printer out(o.output == "kv");
    out.put("function", f.str());
    out.put("algebra", j.algebra.describe());
    out.put("mode", to_string(mode));
    for (std::size_t k = 0; k < j.outputs.size(); ++k) {
        const Vector &coeffs = j.outputs[k].coeffs();
        for (std::size_t i = 0; i < coeffs.size(); ++i)
            out.put("out." + std::to_string(k) + "." + j.algebra.basis_label(i), coeffs[i].str());
    }
    return kPass;
}

int cmd_verify(const Options &o, const std::string &suite, bool controls) {
    SuiteConfig config;
    config.seed = o.seed;
    config.samples = o.samples;
    config.mode = o.mode == "float" ? ScalarMode::Float64 : ScalarMode::ExactRational;
    config.negative_controls = controls;
    Report r = run_suite(suite, config);
    std::cout << (o.output == "kv" ? r.kv() : r.text());
    return r.all_pass() ? kPass : kFail;
}

void print_algebra(Printer &out, const std::string &prefix, const WeilAlgebra &w) {
    out.put(prefix + "describe", w.describe());
    out.put(prefix + "dim", std::to_string(w.dimension()));
    out.put(prefix + "nilpotency", std::to_string(w.nilpotency_degree()));
    std::string basis;
    for (std::size_t i = 0; i < w.dimension(); ++i)
        basis += (i ? " " : "") + w.basis_label(i);
    out.put(prefix + "basis", "{" + basis + "}");
    if (w.dimension() == 1)
        out.put(prefix + "note", "terminal object k");
    for (std::size_t i = 0; i < w.dimension(); ++i)
        for (std::size_t j = i; j < w.dimension(); ++j)
            for (const auto &e : w.product(i, j))
                out.put(prefix + "c." + w.basis_label(i) + "." + w.basis_label(j) + "." + w.basis_label(e.index),
                        e.coeff.get_str());
}

void print_morphism(Printer &out, const std::string &prefix, const WeilMorphism &m) {
    const QMatrix &a = m.matrix();
    for (std::size_t r = 0; r < a.rows(); ++r) {
        std::string row;
        for (std::size_t c = 0; c < a.cols(); ++c)
            row += (c ? " " : "") + a(r, c).get_str();
        out.put(prefix + "row." + std::to_string(r), row);
    }
}

// Images of the source generators, as polynomials in the target generators.
WeilMorphism parse_morphism(const WeilAlgebra &source, const WeilAlgebra &target, const std::string &images) {
    const auto &gens = target.generators();
    std::vector<WeilElement> gen_elems;
    for (std::size_t g = 0; g < gens.size(); ++g) {
        Exponents e(gens.size(), 0);
        e[g] = 1;
        auto idx = target.monomial_index(e);
        gen_elems.push_back(idx ? WeilElement::basis(target, *idx) : WeilElement::zero(target));
    }
    std::vector<WeilElement> out;
    auto parts = split(images, ',');
    if (images.empty())
        parts.clear();
    for (const auto &part : parts) {
        Expr e = parse_expression(part, gens);
        SmoothMap f("image", gens, {e});
        out.push_back(lift_eval(f, WeilPoint(target, gen_elems))[0]);
    }
    if (out.size() != source.generators().size())
        throw ParseError("expected " + std::to_string(source.generators().size()) + " generator images, got " +
                         std::to_string(out.size()));
    return WeilMorphism::from_generator_images(source, target, out);
}

int cmd_weil(const Options &o, const std::string &sub, const std::vector<std::string> &algebras,
             const std::string &phi, const std::string &psi, const std::vector<std::string> &arrows) {
    Printer out(o.output == "kv");
    std::vector<WeilAlgebra> ws;
    for (const auto &a : algebras)
        ws.push_back(parse_algebra(a));
    auto need = [&](std::size_t n) {
        if (ws.size() != n)
            throw ParseError("weil " + sub + " expects " + std::to_string(n) + " algebra(s), got " +
                             std::to_string(ws.size()));
    };
    if (sub == "info") {
        need(1);
        print_algebra(out, "", ws[0]);
        out.put("text", serialize_algebra(ws[0]));
    } else if (sub == "tensor") {
        if (ws.size() < 2)
            throw ParseError("weil tensor expects at least 2 algebras");
        WeilAlgebra t = ws[0];
        for (std::size_t i = 1; i < ws.size(); ++i)
            t = tensor(t, ws[i]).algebra;
        print_algebra(out, "", t);
    } else if (sub == "equalizer") {
        need(2);
        EqualizerResult eq = equalizer(parse_morphism(ws[0], ws[1], phi), parse_morphism(ws[0], ws[1], psi));
        print_algebra(out, "", eq.algebra);
        print_morphism(out, "inclusion.", eq.inclusion);
        out.put("whole", eq.algebra.dimension() == ws[0].dimension() ? "yes" : "no");
    } else if (sub == "limit") {
        DiagramInWeil d;
        d.objects = ws;
        for (const auto &a : arrows) {
            // "i j: images"
            auto colon = a.find(':');
            if (colon == std::string::npos)
                throw ParseError("arrow '" + a + "' needs the form 'i j: images'");
            std::istringstream ends(a.substr(0, colon));
            std::size_t i = 0, j = 0;
            if (!(ends >> i >> j) || i >= ws.size() || j >= ws.size())
                throw ParseError("arrow '" + a + "' has bad endpoints");
            std::string images = a.substr(colon + 1);
            images.erase(0, images.find_first_not_of(' '));
            d.arrows.push_back({i, j, parse_morphism(ws[i], ws[j], images)});
        }
        LimitResult lim = limit(d);
        print_algebra(out, "", lim.algebra);
        for (std::size_t i = 0; i < lim.legs.size(); ++i)
            print_morphism(out, "leg." + std::to_string(i) + ".", lim.legs[i]);
    } else {
        throw ParseError("unknown weil subcommand '" + sub + "'");
    }
    return kPass;
}

int cmd_vertical(const Options &o, const std::string &fibered_text, const std::string &algebra, const std::string &at) {
    FiberedObject p = FiberedObject::parse(fibered_text);
    WeilAlgebra w = parse_algebra(algebra);
    VerticalFiber f = vertical_fiber(p, w, parse_point(at));
    if (o.output != "kv") {
        std::cout << f.str();
        return kPass;
    }
    Printer out(true);
    out.put("fibered", p.str());
    out.put("algebra", w.describe());
    out.put("regular", f.regular() ? "yes" : "no");
    out.put("dimension", std::to_string(f.dimension()));
    for (std::size_t i = 0; i < f.kernel().size(); ++i) {
        std::string v;
        for (std::size_t c = 0; c < f.kernel()[i].size(); ++c)
            v += (c ? "," : "") + f.kernel()[i][c].get_str();
        out.put("kernel." + std::to_string(i), v);
    }
    for (const auto &d : f.degrees()) {
        std::string k = "degree." + std::to_string(d.degree) + ".";
        out.put(k + "layer", std::to_string(d.layer_size));
        out.put(k + "rank", std::to_string(d.rank));
        out.put(k + "free", std::to_string(d.free_parameters));
        for (std::size_t i = 0; i < d.directions.size(); ++i)
            out.put(k + "direction." + std::to_string(i), d.directions[i].str());
    }
    return kPass;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Weil algebras, Weil functors and microlinearity checks"};
    app.require_subcommand(1);
    Options o;
    auto global = [&o](CLI::App *cmd) {
        cmd->add_option("--mode", o.mode, "Scalar mode")->check(CLI::IsMember({"auto", "exact", "float"}));
        cmd->add_option("--seed", o.seed, "Random seed");
        cmd->add_option("--samples", o.samples, "Samples per check")->check(CLI::PositiveNumber);
        cmd->add_option("--output", o.output, "Output format")->check(CLI::IsMember({"text", "kv"}));
    };

    std::string expr, at;
    unsigned order = 1;
    bool mixed = false;
    CLI::App *jet_cmd = app.add_subcommand("jet", "Taylor coefficients by lifted evaluation");
    jet_cmd->add_option("expr", expr, "Expression or `map f(..) -> (..)`")->required();
    jet_cmd->add_option("--at", at, "Point, comma separated")->required();
    jet_cmd->add_option("--order", order, "Jet order");
    jet_cmd->add_flag("--mixed", mixed, "First order in each direction (D (x) D ...)");
    global(jet_cmd);

    std::string suite;
    bool controls = false;
    CLI::App *verify_cmd = app.add_subcommand("verify", "Run a seeded check battery");
    verify_cmd->add_option("suite", suite, "axioms | microlinear | exponentiable | fibered | vertical")->required();
    verify_cmd->add_flag("--negative-controls", controls, "Add mutated inputs that must be rejected");
    global(verify_cmd);

    std::string sub, phi, psi;
    std::vector<std::string> algebras, arrows;
    CLI::App *weil_cmd = app.add_subcommand("weil", "Algebra constructions");
    weil_cmd->add_option("subcommand", sub, "tensor | equalizer | limit | info")->required();
    weil_cmd->add_option("algebras", algebras, "Presentations, e.g. \"Q[x]/(x^2)\"");
    weil_cmd->add_option("--phi", phi, "Equalizer: generator images of the first map");
    weil_cmd->add_option("--psi", psi, "Equalizer: generator images of the second map");
    weil_cmd->add_option("--arrow", arrows, "Limit: 'i j: images' (repeatable)");
    global(weil_cmd);

    std::string fibered_text, algebra = "Q[x]/(x^2)";
    CLI::App *vertical_cmd = app.add_subcommand("vertical", "Vertical fiber over a base point");
    vertical_cmd->add_option("fibered", fibered_text, "`fibered pi(x,..) -> (..)`")->required();
    vertical_cmd->add_option("--algebra", algebra, "Weil algebra");
    vertical_cmd->add_option("--at", at, "Base point, comma separated")->required();
    global(vertical_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? kPass : kUsage;
    }

    try {
        if (*jet_cmd)
            return cmd_jet(o, expr, at, order, mixed);
        if (*verify_cmd)
            return cmd_verify(o, suite, controls);
        if (*weil_cmd)
            return cmd_weil(o, sub, algebras, phi, psi, arrows);
        if (*vertical_cmd)
            return cmd_vertical(o, fibered_text, algebra, at);
    } catch (const std::invalid_argument &e) {
        std::cerr << "usage error: " << e.what() << "\n";
    } catch (const ParseError &e) {
        std::cerr << "parse error: " << e.what() << "\n";
    } catch (const ModeError &e) {
        std::cerr << "mode error: " << e.what() << "\n";
    } catch (const NonInvertibleError &e) {
        std::cerr << "evaluation error: " << e.what() << "\n";
    } catch (const std::domain_error &e) {
        std::cerr << "evaluation error: " << e.what() << "\n";
    } catch (const WeilError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFail;
    }
    return kUsage;
}

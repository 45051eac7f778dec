#include "weilkit/fibered.hpp"

#include "weilkit/parse.hpp"

#include <sstream>

namespace weilkit {

namespace {

QVector exact(const Vector &v) {
    QVector out;
    for (const auto &s : v) {
        if (!s.is_exact())
            throw ModeError("vertical fibers need exact rational input");
        out.push_back(s.rational());
    }
    return out;
}

Vector scalars(const QVector &v) { return Vector(v.begin(), v.end()); }

WeilPoint point_over_k(const QVector &v) {
    const WeilAlgebra k = WeilAlgebra::k();
    std::vector<WeilElement> coords;
    for (const auto &q : v)
        coords.push_back(WeilElement::from_rationals(k, {q}));
    return WeilPoint(k, std::move(coords));
}

QVector flat_rational(const WeilPoint &x) { return exact(x.flatten()); }

QMatrix kron(const QMatrix &a, const QMatrix &b) {
    QMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (a(i, j) != 0)
                for (std::size_t k = 0; k < b.rows(); ++k)
                    for (std::size_t l = 0; l < b.cols(); ++l)
                        out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    return out;
}

QMatrix rows_to_matrix(const std::vector<QVector> &rows, std::size_t cols) {
    QMatrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < cols; ++c)
            m(r, c) = rows[r][c];
    return m;
}

std::vector<QVector> kernel_or_all(const QMatrix &m) {
    if (m.rows() == 0) {
        std::vector<QVector> out;
        for (std::size_t i = 0; i < m.cols(); ++i) {
            QVector e(m.cols(), 0);
            e[i] = 1;
            out.push_back(e);
        }
        return out;
    }
    return kernel_basis(m);
}

std::string vec_str(const QVector &v) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < v.size(); ++i)
        os << (i ? "," : "") << v[i].get_str();
    os << ")";
    return os.str();
}

// Basis [unit, layer 1, layer 2, ...] of W with its coordinatizer.
struct Adapted {
    std::vector<std::size_t> offset; // start of layer j (0-based) in coordinates
    std::vector<std::size_t> size;
    std::vector<QVector> vectors;
    std::shared_ptr<Coordinatizer> coords;

    explicit Adapted(const WeilAlgebra &w) {
        const std::size_t n = w.dimension();
        vectors.push_back(WeilElement::constant(w, Scalar(1)).to_rational());
        for (const auto &layer : w.graded_layers()) {
            offset.push_back(vectors.size());
            size.push_back(layer.size());
            vectors.insert(vectors.end(), layer.begin(), layer.end());
        }
        coords = std::make_shared<Coordinatizer>(from_columns(n, vectors));
    }
    std::size_t layers() const { return size.size(); }
    std::size_t layer_size(std::size_t j) const { return j < size.size() ? size[j] : 0; }
    QVector coordinates(const QVector &v) const {
        auto c = coords->coordinates(v);
        if (!c)
            throw WeilError("internal: adapted basis does not span the algebra");
        return *c;
    }
    // Layer-j coordinates of a vector.
    QVector layer(const QVector &v, std::size_t j) const {
        if (j >= size.size())
            return {};
        QVector c = coordinates(v);
        return QVector(c.begin() + offset[j], c.begin() + offset[j] + size[j]);
    }
    // gr_j of a linear map with matrix m into an algebra with adapted basis `to`.
    QMatrix graded(const QMatrix &m, const Adapted &to, std::size_t j) const {
        QMatrix out(to.layer_size(j), layer_size(j));
        for (std::size_t l = 0; l < layer_size(j); ++l) {
            QVector img = m * vectors[offset[j] + l];
            QVector c = to.layer(img, j);
            for (std::size_t r = 0; r < c.size(); ++r)
                out(r, l) = c[r];
        }
        return out;
    }
};

SmoothMap affine_map(const std::string &name, std::size_t m, const QMatrix &lin, const QVector &off) {
    std::vector<Expr> outs;
    for (std::size_t r = 0; r < off.size(); ++r) {
        Expr e = Expr::constant(off[r]);
        for (std::size_t c = 0; c < m; ++c)
            if (lin(r, c) != 0)
                e = e + Expr::constant(lin(r, c)) * Expr::variable(c);
        outs.push_back(e);
    }
    return SmoothMap(name, default_variable_names(m), std::move(outs));
}

SmoothMap constant_map(const std::string &name, std::size_t m, const QVector &value) {
    return affine_map(name, m, QMatrix(value.size(), m), value);
}

AffineForm require_affine(const SmoothMap &f, const char *what) {
    auto a = affine_form(f);
    if (!a)
        throw WeilError(std::string(what) + " " + f.str() + " is not affine");
    return *a;
}

// Is z |-> (F_i z + f_i)_i an isomorphism from src onto lim (both affine)?
struct IsoCheck {
    bool iso = false;
    std::size_t source_dim = 0, limit_dim = 0, rank = 0;
    std::string str() const {
        std::ostringstream os;
        os << "dim source=" << source_dim << ", dim limit=" << limit_dim << ", rank=" << rank;
        return os.str();
    }
};

IsoCheck affine_iso(const ModelObject &src, const std::vector<AffineForm> &legs, const ModelObject &lim) {
    IsoCheck out;
    if (src.is_empty() || lim.is_empty()) {
        out.iso = src.is_empty() && lim.is_empty();
        return out;
    }
    auto apply = [&](const QVector &z, bool with_offset) {
        QVector img;
        for (const auto &leg : legs) {
            QVector part = leg.linear * z;
            if (with_offset)
                for (std::size_t i = 0; i < part.size(); ++i)
                    part[i] += leg.offset[i];
            img.insert(img.end(), part.begin(), part.end());
        }
        return img;
    };
    Subspace sd = src.directions(), ld = lim.directions();
    std::vector<QVector> images;
    for (const auto &v : sd.basis())
        images.push_back(apply(v, false));
    out.source_dim = sd.dimension();
    out.limit_dim = ld.dimension();
    out.rank = images.empty() ? 0 : rank(from_columns(lim.ambient(), images));
    bool inside = lim.contains(apply(*src.base_point(), true));
    for (const auto &img : images)
        inside = inside && ld.contains(img);
    out.iso = inside && out.rank == out.source_dim && out.rank == out.limit_dim;
    return out;
}

struct Tally {
    std::size_t agreed = 0, skipped = 0, total = 0;
    std::vector<std::string> problems;

    void fail(const std::string &p) {
        if (problems.size() < 3)
            problems.push_back(p);
        else
            problems.back() = "...";
    }
    bool pass() const { return problems.empty() && agreed > 0; }
    std::string str(const std::string &what) const {
        std::ostringstream os;
        os << agreed << "/" << total << " " << what;
        if (skipped)
            os << ", " << skipped << " skipped";
        for (const auto &p : problems)
            os << "; " << p;
        return os.str();
    }
};

} // namespace

// ---------------------------------------------------------------------------
// Objects and morphisms

FiberedObject::FiberedObject(SmoothMap projection)
    : projection_(std::move(projection)), polys_(to_polynomials(projection_)) {}

FiberedObject FiberedObject::parse(const std::string &text) { return FiberedObject(parse_map(text, "fibered")); }

FiberedObject FiberedObject::identity(std::size_t d) { return FiberedObject(SmoothMap::identity(d)); }

bool FiberedObject::is_affine() const { return affine_form(projection_).has_value(); }

std::string FiberedObject::str() const {
    std::string s = projection_.str();
    return s.rfind("map ", 0) == 0 ? "fibered " + s.substr(4) : s;
}

FiberedMorphism FiberedMorphism::identity(const FiberedObject &p) {
    return {SmoothMap::identity(p.total_dimension()), SmoothMap::identity(p.base_dimension())};
}

FiberedMorphism compose(const FiberedMorphism &m2, const FiberedMorphism &m1) {
    return {compose(m2.top, m1.top), compose(m2.bottom, m1.bottom)};
}

bool square_commutes(const FiberedObject &p1, const FiberedObject &p2, const FiberedMorphism &m,
                     const SampleSpec &samples) {
    if (m.top.arity_in() != p1.total_dimension() || m.top.arity_out() != p2.total_dimension() ||
        m.bottom.arity_in() != p1.base_dimension() || m.bottom.arity_out() != p2.base_dimension())
        throw WeilError("fibered morphism does not match its endpoints");
    SmoothMap lhs = compose(p2.projection(), m.top);
    SmoothMap rhs = compose(m.bottom, p1.projection());
    auto pl = to_polynomials(lhs), pr = to_polynomials(rhs);
    if (pl && pr)
        return *pl == *pr;
    Sampler rng(samples.seed);
    for (std::size_t k = 0; k < samples.count; ++k) {
        Vector x;
        for (std::size_t i = 0; i < lhs.arity_in(); ++i)
            x.push_back(Scalar::from_rational(rng.positive_rational(), ScalarMode::Float64));
        Vector a = evaluate(lhs, x), b = evaluate(rhs, x);
        for (std::size_t i = 0; i < a.size(); ++i)
            if (!approx_equal(a[i].to_double(), b[i].to_double(), 1e-9))
                return false;
    }
    return true;
}

FiberedObject arrow_weil_functor(const WeilAlgebra &w, const FiberedObject &p) {
    return FiberedObject(lift_map(p.projection(), w));
}

FiberedMorphism arrow_weil_functor(const WeilAlgebra &w, const FiberedMorphism &m) {
    return {lift_map(m.top, w), lift_map(m.bottom, w)};
}

ArrowPoint arrow_lift(const FiberedMorphism &m, const ArrowPoint &x) {
    return {lift_eval(m.top, x.total), lift_eval(m.bottom, x.base)};
}

ArrowPoint arrow_alpha(const WeilMorphism &phi, const ArrowPoint &x) {
    return {alpha(phi, x.total), alpha(phi, x.base)};
}

Report check_arrow_functor(const FiberedObject &p, const WeilAlgebra &w1, const WeilAlgebra &w2,
                           const WeilMorphism &phi, const SampleSpec &samples) {
    Report r;
    ReportEntry comp = check_functor_composition(p.projection(), w1, w2, samples);
    comp.instance = "arrow " + comp.instance;
    r.add(comp);
    ReportEntry square = check_bifunctor(p.projection(), phi, samples);
    square.instance = "arrow " + square.instance;
    r.add(square);

    // T^W p as an object: its projection on flattened coordinates is T^W pi,
    // and alpha keeps both parts of an arrow point matched.
    const FiberedObject tp = arrow_weil_functor(phi.source(), p);
    ScalarMode mode = p.projection().has_transcendental() ? ScalarMode::Float64 : ScalarMode::ExactRational;
    Sampler rng(samples.seed);
    Tally t;
    for (std::size_t k = 0; k < samples.count; ++k) {
        ++t.total;
        WeilPoint x = rng.point(phi.source(), p.total_dimension(), mode, mode == ScalarMode::Float64);
        try {
            ArrowPoint a{x, lift_eval(p.projection(), x)};
            WeilPoint flat = WeilPoint::unflatten(phi.source(), p.base_dimension(),
                                                  evaluate(tp.projection(), x.flatten()));
            ArrowPoint b = arrow_alpha(phi, a);
            if (!points_agree(flat, a.base))
                t.fail("T^W pi on coefficients differs at x=" + x.str());
            else if (!points_agree(lift_eval(p.projection(), b.total), b.base))
                t.fail("alpha breaks the arrow at x=" + x.str());
            else
                ++t.agreed;
        } catch (const NonInvertibleError &) {
            ++t.skipped;
        }
    }
    r.add("arrow-object", p.str() + "; W=" + phi.source().describe(), t.pass(), t.str("arrow points stay matched"));
    return r;
}

// ---------------------------------------------------------------------------
// Fibered microlinearity

std::string FiberedMicrolinearResult::summary() const {
    std::ostringstream os;
    os << "E: " << total.summary() << " | M: " << base.summary() << " | arrow: " << arrow.summary()
       << " | legs natural: " << (legs_natural ? "yes" : "no") << " | iff " << (iff_holds ? "holds" : "FAILS");
    return os.str();
}

FiberedMicrolinearResult check_fibered_microlinear(const FiberedObject &p, const DiagramInWeil &d,
                                                   const SampleSpec &samples) {
    FiberedMicrolinearResult r;
    const std::size_t e = p.total_dimension(), b = p.base_dimension();
    r.total = check_microlinear(ModelObject::coordinate(e), d, samples);
    r.base = check_microlinear(ModelObject::coordinate(b), d, samples);
    // Limits in the arrow category are componentwise: decide E x M at once.
    r.arrow = check_microlinear(ModelObject::coordinate(e + b), d, samples);
    r.iff_holds = r.arrow.microlinear == (r.total.microlinear && r.base.microlinear);

    r.legs_natural = true;
    if (d.cone) {
        ScalarMode mode = p.projection().has_transcendental() ? ScalarMode::Float64 : ScalarMode::ExactRational;
        Sampler rng(samples.seed);
        for (std::size_t k = 0; k < samples.count && r.legs_natural; ++k) {
            WeilPoint x = rng.point(d.cone->apex, e, mode, mode == ScalarMode::Float64);
            try {
                WeilPoint px = lift_eval(p.projection(), x);
                for (const auto &leg : d.cone->legs)
                    if (!points_agree(lift_eval(p.projection(), alpha(leg, x)), alpha(leg, px)))
                        r.legs_natural = false;
            } catch (const NonInvertibleError &) {
            }
        }
    }
    r.fibered_microlinear = r.arrow.microlinear && r.total.microlinear && r.base.microlinear && r.legs_natural;
    return r;
}

// ---------------------------------------------------------------------------
// Vertical bundle

bool vertical_membership(const FiberedObject &p, const WeilPoint &x) {
    if (x.dimension() != p.total_dimension())
        throw WeilError("vertical_membership: point has dimension " + std::to_string(x.dimension()) + ", expected " +
                        std::to_string(p.total_dimension()));
    WeilPoint lhs = lift_eval(p.projection(), x);
    WeilPoint rhs = iota(x.algebra(), lift_eval(p.projection(), tau(x)));
    return points_agree(lhs, rhs);
}

namespace {

// Nilpotent coordinates of x in the adapted basis, layer j, c-major.
QVector layer_part(const Adapted &a, const WeilPoint &x, std::size_t j) {
    QVector out;
    for (const auto &c : x.coords()) {
        QVector l = a.layer(c.to_rational(), j);
        out.insert(out.end(), l.begin(), l.end());
    }
    return out;
}

// x with its layer-j part replaced by the given coordinates.
WeilPoint set_layer(const Adapted &a, const WeilPoint &x, std::size_t j, const QVector &coeffs) {
    const std::size_t L = a.layer_size(j);
    std::vector<WeilElement> coords;
    for (std::size_t c = 0; c < x.dimension(); ++c) {
        QVector v = x[c].to_rational();
        QVector old = a.layer(v, j);
        for (std::size_t l = 0; l < L; ++l) {
            Rational delta = coeffs[c * L + l] - old[l];
            if (delta != 0)
                for (std::size_t i = 0; i < v.size(); ++i)
                    v[i] += delta * a.vectors[a.offset[j] + l][i];
        }
        coords.push_back(WeilElement::from_rationals(x.algebra(), v));
    }
    return WeilPoint(x.algebra(), std::move(coords));
}

} // namespace

std::size_t VerticalFiber::dimension() const {
    std::size_t n = 0;
    for (const auto &d : degrees_)
        n += d.free_parameters;
    return n;
}

QVector VerticalFiber::layer_coordinates(const WeilPoint &x, std::size_t j) const {
    return layer_part(Adapted(w_), x, j);
}

QVector VerticalFiber::defect(const WeilPoint &x, std::size_t j) const {
    return layer_part(Adapted(w_), lift_eval(p_.projection(), x), j);
}

WeilPoint VerticalFiber::point(const QVector &params) const {
    if (params.size() != dimension())
        throw WeilError("vertical fiber has " + std::to_string(dimension()) + " parameters, got " +
                        std::to_string(params.size()));
    Adapted a(w_);
    WeilPoint x = iota(w_, point_over_k(e0_));
    std::size_t used = 0;
    for (std::size_t j = 0; j < degrees_.size(); ++j) {
        const Degree &deg = degrees_[j];
        if (deg.layer_size == 0)
            continue;
        QVector rhs = defect(x, j);
        for (auto &q : rhs)
            q = -q;
        QVector n(p_.total_dimension() * deg.layer_size, 0);
        if (systems_[j].rows() > 0) {
            auto part = solve_particular(systems_[j], rhs);
            if (!part)
                throw WeilError("vertical fiber is obstructed in degree " + std::to_string(deg.degree));
            n = *part;
        }
        for (std::size_t k = 0; k < deg.free_parameters; ++k) {
            QVector dir = layer_part(a, deg.directions[k], j);
            for (std::size_t i = 0; i < n.size(); ++i)
                n[i] += params[used + k] * dir[i];
        }
        used += deg.free_parameters;
        x = set_layer(a, x, j, n);
    }
    return x;
}

std::optional<QVector> VerticalFiber::parameters(const WeilPoint &x) const {
    if (x.dimension() != p_.total_dimension() || x.mode() != ScalarMode::ExactRational || !(x.algebra() == w_))
        return std::nullopt;
    if (!(tau(x) == point_over_k(e0_)))
        return std::nullopt;
    Adapted a(w_);
    WeilPoint y = iota(w_, point_over_k(e0_));
    QVector params;
    for (std::size_t j = 0; j < degrees_.size(); ++j) {
        const Degree &deg = degrees_[j];
        if (deg.layer_size == 0)
            continue;
        QVector rhs = defect(y, j);
        for (auto &q : rhs)
            q = -q;
        QVector n(p_.total_dimension() * deg.layer_size, 0);
        if (systems_[j].rows() > 0) {
            auto part = solve_particular(systems_[j], rhs);
            if (!part)
                return std::nullopt;
            n = *part;
        }
        QVector actual = layer_part(a, x, j);
        QVector diff(actual.size());
        for (std::size_t i = 0; i < diff.size(); ++i)
            diff[i] = actual[i] - n[i];
        if (deg.free_parameters == 0) {
            if (!is_zero(diff))
                return std::nullopt;
        } else {
            std::vector<QVector> cols;
            for (const auto &d : deg.directions)
                cols.push_back(layer_part(a, d, j));
            SolveResult s = solve_unique(from_columns(diff.size(), cols), diff);
            if (s.status != SolveStatus::Unique)
                return std::nullopt;
            params.insert(params.end(), s.solution.begin(), s.solution.end());
        }
        y = set_layer(a, y, j, actual);
    }
    if (!(y == x))
        return std::nullopt;
    return params;
}

std::string VerticalFiber::str() const {
    std::ostringstream os;
    os << "vertical fiber of " << p_.str() << " over " << vec_str(e0_) << " in " << w_.describe() << "\n";
    os << "regular: " << (regular_ ? "yes" : "no") << " (jacobian rank " << rank(jacobian_) << " of "
       << jacobian_.rows() << ")\n";
    os << "dimension: " << dimension() << "\n";
    os << "tangent kernel:";
    for (const auto &v : kernel_)
        os << " " << vec_str(v);
    os << "\n";
    for (const auto &d : degrees_) {
        os << "degree " << d.degree << ": layer " << d.layer_size << ", rank " << d.rank << ", free "
           << d.free_parameters << "\n";
        for (const auto &dir : d.directions)
            os << "  " << dir.str() << "\n";
    }
    return os.str();
}

VerticalFiber vertical_fiber(const FiberedObject &p, const WeilAlgebra &w, const Vector &e0) {
    QVector base = exact(e0);
    if (base.size() != p.total_dimension())
        throw WeilError("base point has dimension " + std::to_string(base.size()) + ", expected " +
                        std::to_string(p.total_dimension()));
    if (!p.polynomials())
        throw ModeError("vertical fibers need a polynomial projection; " + p.str() + " is not");
    VerticalFiber f(p, w);
    f.e0_ = base;
    const std::size_t e = p.total_dimension(), b = p.base_dimension();
    f.jacobian_ = b == 0 ? QMatrix(0, e) : jacobian(*p.polynomials(), base);
    f.regular_ = b == 0 || rank(f.jacobian_) == b;
    f.kernel_ = kernel_or_all(f.jacobian_);

    Adapted a(w);
    for (std::size_t j = 0; j < a.layers(); ++j) {
        const std::size_t L = a.layer_size(j);
        QMatrix sys = kron(f.jacobian_, identity_matrix(L));
        VerticalFiber::Degree deg;
        deg.degree = j + 1;
        deg.layer_size = L;
        deg.rank = sys.rows() ? rank(sys) : 0;
        for (const auto &k : kernel_or_all(sys)) {
            WeilPoint zero = WeilPoint(w, std::vector<WeilElement>(e, WeilElement::zero(w)));
            deg.directions.push_back(set_layer(a, zero, j, k));
        }
        deg.free_parameters = deg.directions.size();
        f.systems_.push_back(std::move(sys));
        f.degrees_.push_back(std::move(deg));
    }
    return f;
}

WeilPoint vertical_functor_on_morphism(const FiberedObject &p1, const FiberedObject &p2, const FiberedMorphism &m,
                                       const WeilPoint &x) {
    if (!vertical_membership(p1, x))
        throw WeilError("V^W(m): input point is not vertical for " + p1.str());
    WeilPoint y = lift_eval(m.top, x);
    if (!vertical_membership(p2, y))
        throw WeilError("V^W(m): image is not vertical for " + p2.str() + "; the square does not commute");
    if (!points_agree(tau(y), lift_eval(m.top, tau(x))))
        throw WeilError("V^W(m): image does not lie over top(tau x)");
    return y;
}

// ---------------------------------------------------------------------------
// Diagrams in the arrow category

namespace {

ObjectDiagram total_diagram(const FiberedDiagram &d) {
    ObjectDiagram od;
    for (const auto &o : d.objects)
        od.objects.push_back(ModelObject::coordinate(o.total_dimension()));
    for (const auto &a : d.arrows)
        od.arrows.push_back({a.source, a.target, a.morphism.top});
    return od;
}

ObjectDiagram base_diagram(const FiberedDiagram &d) {
    ObjectDiagram od;
    for (const auto &o : d.objects)
        od.objects.push_back(ModelObject::coordinate(o.base_dimension()));
    for (const auto &a : d.arrows)
        od.arrows.push_back({a.source, a.target, a.morphism.bottom});
    return od;
}

// Slice i of a parametrization t |-> p + B t of a subspace of the product.
SmoothMap slice_map(const std::string &name, std::size_t params, const QVector &p, const std::vector<QVector> &basis,
                    std::size_t offset, std::size_t size) {
    QMatrix lin(size, params);
    QVector off(size);
    for (std::size_t r = 0; r < size; ++r) {
        off[r] = p[offset + r];
        for (std::size_t c = 0; c < params; ++c)
            lin(r, c) = basis[c][offset + r];
    }
    return affine_map(name, params, lin, off);
}

// Expanded form of a polynomial expression; others are returned unchanged.
Expr normal_form(const Expr &e, std::size_t nvars) {
    auto poly = to_polynomial(e, nvars);
    if (!poly)
        return e;
    Expr out = Expr::constant(0);
    for (const auto &[mono, coeff] : poly->terms()) {
        Expr term = Expr::constant(coeff);
        for (std::size_t v = 0; v < mono.size(); ++v)
            if (mono[v])
                term = term * Expr::pow(Expr::variable(v), mono[v]);
        out = out + term;
    }
    return out;
}

IsoCheck component_limit(const ObjectDiagram &od, const std::vector<SmoothMap> &legs, std::size_t apex_dim) {
    ModelObject lim = ModelObject::limit_of(od);
    std::vector<AffineForm> forms;
    for (const auto &l : legs)
        forms.push_back(require_affine(l, "cone leg"));
    return affine_iso(ModelObject::coordinate(apex_dim), forms, lim);
}

} // namespace

FiberedDiagram fibered_limit(FiberedDiagram d) {
    ModelObject le = ModelObject::limit_of(total_diagram(d));
    ModelObject lm = ModelObject::limit_of(base_diagram(d));
    if (le.is_empty() || lm.is_empty())
        throw WeilError("fibered_limit: the limit is empty");
    const std::vector<QVector> be = le.directions().basis(), bm = lm.directions().basis();
    const QVector &pe = *le.base_point(), &pm = *lm.base_point();
    const std::size_t ke = be.size(), km = bm.size();

    std::vector<FiberedMorphism> legs;
    std::size_t oe = 0, om = 0;
    std::vector<Expr> images; // pi_i(leg_i(t)), concatenated
    for (const auto &o : d.objects) {
        SmoothMap top = slice_map("leg", ke, pe, be, oe, o.total_dimension());
        SmoothMap bottom = slice_map("leg", km, pm, bm, om, o.base_dimension());
        SmoothMap composite = compose(o.projection(), top);
        images.insert(images.end(), composite.outputs().begin(), composite.outputs().end());
        legs.push_back({top, bottom});
        oe += o.total_dimension();
        om += o.base_dimension();
    }
    // Left inverse of the base parametrization from an invertible set of rows.
    QMatrix bt = transpose(from_columns(pm.size(), bm));
    std::vector<std::size_t> pivots = rref(bt);
    QMatrix square(km, km);
    for (std::size_t r = 0; r < km; ++r)
        for (std::size_t c = 0; c < km; ++c)
            square(r, c) = bm[c][pivots[r]];
    auto g = inverse(square);
    if (!g)
        throw WeilError("internal: limit parametrization is degenerate");
    std::vector<Expr> outs;
    for (std::size_t r = 0; r < km; ++r) {
        Expr e = Expr::constant(0);
        for (std::size_t q = 0; q < km; ++q)
            if ((*g)(r, q) != 0)
                e = e + Expr::constant((*g)(r, q)) * (images[pivots[q]] - Expr::constant(pm[pivots[q]]));
        outs.push_back(normal_form(e, ke));
    }
    FiberedObject apex(SmoothMap("lim", default_variable_names(ke), std::move(outs)));
    d.cone = FiberedCone{apex, legs};
    return d;
}

FiberedDiagram break_fibered_cone(const FiberedDiagram &d) {
    if (!d.cone)
        throw WeilError("break_fibered_cone: diagram has no cone");
    FiberedDiagram out = d;
    FiberedCone &c = *out.cone;
    const std::size_t e = c.apex.total_dimension(), b = c.apex.base_dimension();
    QVector zero(e, 0);
    Vector at = evaluate(c.apex.projection(), scalars(zero));
    if (e > 0) {
        FiberedMorphism k{constant_map("c", e, zero), constant_map("c", b, exact(at))};
        for (auto &leg : c.legs)
            leg = compose(leg, k);
    } else {
        // The apex is a point; route the cone through R^1 collapsing onto it.
        FiberedObject inflated(constant_map("pi", 1, exact(at)));
        FiberedMorphism k{constant_map("c", 1, {}), SmoothMap::identity(b)};
        for (auto &leg : c.legs)
            leg = compose(leg, k);
        c.apex = inflated;
    }
    return out;
}

ReportEntry VerdictResult::entry(std::string check, std::string instance) const {
    return {std::move(check), std::move(instance), holds, method + ": " + reason};
}

VerdictResult check_vertical_left_exact(const FiberedDiagram &d, const WeilAlgebra &w, const SampleSpec &samples) {
    VerdictResult r;
    r.method = "exact";
    if (!d.cone) {
        r.reason = "diagram has no cone";
        return r;
    }
    const FiberedCone &cone = *d.cone;
    std::vector<SmoothMap> tops, bottoms;
    for (const auto &leg : cone.legs) {
        tops.push_back(leg.top);
        bottoms.push_back(leg.bottom);
    }
    IsoCheck ce = component_limit(total_diagram(d), tops, cone.apex.total_dimension());
    IsoCheck cm = component_limit(base_diagram(d), bottoms, cone.apex.base_dimension());
    if (!ce.iso || !cm.iso) {
        r.reason = "input cone is not a componentwise limit (E: " + ce.str() + "; M: " + cm.str() + ")";
        return r;
    }

    bool linear = cone.apex.is_affine();
    for (const auto &o : d.objects)
        linear = linear && o.is_affine();
    const std::size_t n = w.dimension();

    if (linear) {
        // V^W(pi) = equalizer of mu = pi (x) W and nu = iota pi tau; for affine
        // pi this is ker(A (x) (I - unit aug^T)).
        QMatrix nil = identity_matrix(n);
        QVector unit = WeilElement::constant(w, Scalar(1)).to_rational();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k)
                nil(i, k) -= unit[i] * w.augmentation()[k];
        auto vertical = [&](const FiberedObject &p) {
            AffineForm a = require_affine(p.projection(), "projection");
            QMatrix eq = kron(a.linear, nil);
            return ModelObject::affine(eq, QVector(eq.rows(), 0), "V(" + p.projection().name() + ")");
        };
        ObjectDiagram vd;
        for (const auto &o : d.objects)
            vd.objects.push_back(vertical(o));
        for (const auto &a : d.arrows)
            vd.arrows.push_back({a.source, a.target, lift_map(a.morphism.top, w)});
        ModelObject lim = ModelObject::limit_of(vd);
        std::vector<AffineForm> legs;
        for (const auto &leg : cone.legs)
            legs.push_back(require_affine(lift_map(leg.top, w), "lifted leg"));
        IsoCheck iso = affine_iso(vertical(cone.apex), legs, lim);
        r.holds = iso.iso;
        r.reason = "V(apex) -> lim V: " + iso.str();
        return r;
    }

    // Nonlinear projections: mediation of sampled vertical cones.
    r.method = "sampled";
    std::vector<AffineForm> legs;
    for (const auto &leg : cone.legs)
        legs.push_back(require_affine(lift_map(leg.top, w), "lifted leg"));
    std::size_t rows = 0;
    for (const auto &l : legs)
        rows += l.linear.rows();
    QMatrix stacked(rows, cone.apex.total_dimension() * n);
    {
        std::size_t r0 = 0;
        for (const auto &l : legs) {
            for (std::size_t i = 0; i < l.linear.rows(); ++i)
                for (std::size_t c = 0; c < l.linear.cols(); ++c)
                    stacked(r0 + i, c) = l.linear(i, c);
            r0 += l.linear.rows();
        }
    }
    Sampler rng(samples.seed);
    Tally t;
    for (std::size_t k = 0; k < samples.count; ++k) {
        ++t.total;
        QVector e = rng.rational_vector(cone.apex.total_dimension());
        VerticalFiber f = vertical_fiber(cone.apex, w, scalars(e));
        if (!f.regular()) {
            ++t.skipped;
            continue;
        }
        WeilPoint x = f.point(rng.rational_vector(f.dimension()));
        std::vector<WeilPoint> ys;
        bool ok = true;
        for (std::size_t i = 0; i < cone.legs.size() && ok; ++i) {
            ys.push_back(lift_eval(cone.legs[i].top, x));
            ok = vertical_membership(d.objects[i], ys.back());
        }
        if (!ok) {
            t.fail("a leg leaves the vertical bundle at x=" + x.str());
            continue;
        }
        for (const auto &a : d.arrows)
            if (ok && !(lift_eval(a.morphism.top, ys[a.source]) == ys[a.target])) {
                ok = false;
                t.fail("sampled cone does not commute at x=" + x.str());
            }
        if (!ok)
            continue;
        QVector rhs;
        for (std::size_t i = 0; i < ys.size(); ++i) {
            QVector yi = flat_rational(ys[i]);
            for (std::size_t c = 0; c < yi.size(); ++c)
                rhs.push_back(yi[c] - legs[i].offset[c]);
        }
        SolveResult s = solve_unique(stacked, rhs);
        if (s.status != SolveStatus::Unique || s.solution != flat_rational(x))
            t.fail(std::string("mediation is ") + to_string(s.status) + " at x=" + x.str());
        else
            ++t.agreed;
    }
    r.holds = t.pass();
    r.reason = t.str("sampled vertical cones mediate uniquely");
    return r;
}

VerdictResult check_vertical_microlinearity(const FiberedObject &p, const DiagramInWeil &d, const QVector &e0,
                                            const SampleSpec &samples) {
    VerdictResult r;
    r.method = "exact";
    MicrolinearCertificate ce = check_microlinear(ModelObject::coordinate(p.total_dimension()), d, samples);
    MicrolinearCertificate cm = check_microlinear(ModelObject::coordinate(p.base_dimension()), d, samples);
    if (!ce.microlinear || !cm.microlinear) {
        r.reason = "rejected: E or M fails microlinearity on this diagram (" + (ce.microlinear ? cm : ce).reason + ")";
        return r;
    }
    const DiagramInWeil full = with_terminal(d);
    const Cone &cone = *full.cone;
    VerticalFiber fa = vertical_fiber(p, cone.apex, scalars(e0));
    std::vector<VerticalFiber> fibers;
    for (const auto &w : full.objects)
        fibers.push_back(vertical_fiber(p, w, scalars(e0)));
    const std::size_t e = p.total_dimension();

    // Sampled apex points must land in the fibers, compatibly.
    Sampler rng(samples.seed);
    Tally t;
    for (std::size_t k = 0; k < samples.count; ++k) {
        ++t.total;
        WeilPoint x(cone.apex, {});
        try {
            x = fa.point(rng.rational_vector(fa.dimension()));
        } catch (const WeilError &) {
            ++t.skipped;
            continue;
        }
        std::vector<WeilPoint> ys;
        bool ok = true;
        for (std::size_t i = 0; i < cone.legs.size() && ok; ++i) {
            ys.push_back(alpha(cone.legs[i], x));
            ok = fibers[i].parameters(ys.back()).has_value();
        }
        for (const auto &a : full.arrows)
            ok = ok && alpha(a.morphism, ys[a.source]) == ys[a.target];
        if (ok)
            ++t.agreed;
        else
            t.fail("sampled apex point leaves the fibers at x=" + x.str());
    }

    if (!fa.regular()) {
        r.method = "sampled";
        r.holds = t.pass();
        r.reason = "irregular base point; " + t.str("apex points map into compatible fibers");
        return r;
    }

    // At a regular point gr_j of every fiber is ker J (x) (m^j / m^(j+1)),
    // and alpha acts on it through gr_j phi. Decide each degree by rank.
    const std::vector<QVector> &kernel = fa.kernel();
    const std::size_t kd = kernel.size();
    bool affine = p.is_affine();
    r.method = affine ? "exact" : "degree-graded";
    Adapted aa(cone.apex);
    std::vector<Adapted> ad;
    for (const auto &w : full.objects)
        ad.emplace_back(w);
    std::size_t depth = aa.layers();
    for (const auto &a : ad)
        depth = std::max(depth, a.layers());
    bool all = true;
    std::ostringstream why;
    for (std::size_t j = 0; j < depth; ++j) {
        // Unknowns per object: kd * L_j(i) coordinates.
        std::vector<std::size_t> offset;
        std::size_t total = 0;
        for (const auto &a : ad) {
            offset.push_back(total);
            total += kd * a.layer_size(j);
        }
        std::vector<QVector> rows;
        for (const auto &arrow : full.arrows) {
            QMatrix g = kron(identity_matrix(kd), ad[arrow.source].graded(arrow.morphism.matrix(), ad[arrow.target], j));
            for (std::size_t rr = 0; rr < g.rows(); ++rr) {
                QVector row(total, 0);
                for (std::size_t c = 0; c < g.cols(); ++c)
                    row[offset[arrow.source] + c] += g(rr, c);
                row[offset[arrow.target] + rr] -= 1;
                rows.push_back(std::move(row));
            }
        }
        std::size_t lim_dim = total - (rows.empty() ? 0 : rank(rows_to_matrix(rows, total)));
        std::size_t apex_dim = kd * aa.layer_size(j);
        std::vector<QVector> images;
        for (std::size_t col = 0; col < apex_dim; ++col) {
            QVector img;
            for (std::size_t i = 0; i < cone.legs.size(); ++i) {
                QMatrix g = kron(identity_matrix(kd), aa.graded(cone.legs[i].matrix(), ad[i], j));
                QVector part = g.column(col);
                img.insert(img.end(), part.begin(), part.end());
            }
            images.push_back(std::move(img));
        }
        std::size_t rk = images.empty() ? 0 : rank(from_columns(total, images));
        bool ok = rk == apex_dim && rk == lim_dim;
        all = all && ok;
        why << (j ? "; " : "") << "degree " << j + 1 << ": apex " << apex_dim << ", limit " << lim_dim << ", rank "
            << rk;
    }
    (void)e;
    r.holds = all && t.problems.empty();
    r.reason = why.str() + "; " + t.str("apex points map into compatible fibers");
    return r;
}

ReportEntry check_vertical_equalizer(const FiberedObject &p, const WeilAlgebra &w, const QVector &e0,
                                     const SampleSpec &samples) {
    VerticalFiber f = vertical_fiber(p, w, scalars(e0));
    const std::size_t dim = f.dimension();
    Sampler rng(samples.seed);
    Tally t;
    std::size_t controls = 0, rejected = 0;
    for (std::size_t k = 0; k < samples.count; ++k) {
        ++t.total;
        // A cone from R^s: t |-> point(P t + q) for a random affine P.
        auto s = static_cast<std::size_t>(rng.integer(1, 2));
        QMatrix lin(dim, s);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t c = 0; c < s; ++c)
                lin(i, c) = rng.small_rational();
        QVector off = rng.rational_vector(dim);
        bool ok = true;
        for (int probe = 0; probe < 3 && ok; ++probe) {
            QVector at = rng.rational_vector(s);
            QVector params = lin * at;
            for (std::size_t i = 0; i < dim; ++i)
                params[i] += off[i];
            WeilPoint y(w, {});
            try {
                y = f.point(params);
            } catch (const WeilError &err) {
                ok = false;
                t.fail(err.what());
                break;
            }
            if (!vertical_membership(p, y) || !(tau(y) == point_over_k(e0))) {
                ok = false;
                t.fail("cone point is not in the equalizer: " + y.str());
            } else if (auto h = f.parameters(y); !h || *h != params) {
                ok = false;
                t.fail("mediating map is not unique at " + y.str());
            }
            // Control: push y off the fiber along a non-kernel direction.
            if (ok && !f.kernel().empty() && f.kernel().size() < p.total_dimension() && w.dimension() > 1) {
                ++controls;
                std::vector<WeilElement> coords = y.coords();
                QVector bump = f.jacobian().row(0).size() ? QVector(f.jacobian().row(0).begin(),
                                                                     f.jacobian().row(0).end())
                                                          : QVector{};
                for (std::size_t c = 0; c < coords.size() && c < bump.size(); ++c)
                    coords[c] += WeilElement::basis(w, 1) * Scalar(bump[c]);
                WeilPoint z(w, coords);
                if (!vertical_membership(p, z) && !f.parameters(z))
                    ++rejected;
            }
        }
        if (ok)
            ++t.agreed;
    }
    std::ostringstream inst;
    inst << p.str() << " at " << vec_str(e0) << "; W=" << w.describe();
    std::string cert = t.str("sampled cones factor uniquely through the fiber");
    if (controls)
        cert += "; " + std::to_string(rejected) + "/" + std::to_string(controls) + " off-fiber controls rejected";
    return {"vertical-equalizer", inst.str(), t.pass() && rejected == controls, cert};
}

ReportEntry check_vertical_naturality(const FiberedObject &p1, const FiberedObject &p2, const FiberedMorphism &m,
                                      const WeilAlgebra &w, const SampleSpec &samples) {
    Sampler rng(samples.seed);
    Tally t;
    for (std::size_t k = 0; k < samples.count; ++k) {
        ++t.total;
        QVector e = rng.rational_vector(p1.total_dimension());
        VerticalFiber f = vertical_fiber(p1, w, scalars(e));
        WeilPoint x(w, {});
        try {
            x = f.point(rng.rational_vector(f.dimension()));
        } catch (const WeilError &) {
            ++t.skipped;
            continue;
        }
        try {
            vertical_functor_on_morphism(p1, p2, m, x);
            ++t.agreed;
        } catch (const WeilError &err) {
            t.fail(err.what());
        }
    }
    return {"vertical-naturality", p1.str() + " -> " + p2.str() + "; W=" + w.describe(), t.pass(),
            t.str("vertical points: V(m)(x) vertical and over top(tau x)")};
}

ReportEntry fibered_exponential_pullback(const FiberedObject &p, const InfinitesimalArrow &q, const WeilAlgebra &w1,
                                         const WeilAlgebra &w2, const SampleSpec &samples) {
    const WeilAlgebra &wf = q.total();
    const WeilAlgebra &wn = q.base();
    TensorProduct w12 = tensor(w1, w2);
    ExponentIso isof = exponent_iso(w12, wf);
    ExponentIso ison = exponent_iso(w12, wn);
    // M^q on both sides.
    WeilMorphism psi_l =
        tensor_morphism(WeilMorphism::identity(w12.algebra), q.psi, ison.lhs.algebra, isof.lhs.algebra);
    WeilMorphism inner = tensor_morphism(WeilMorphism::identity(w1), q.psi, ison.w1y.algebra, isof.w1y.algebra);
    WeilMorphism psi_r = tensor_morphism(inner, WeilMorphism::identity(w2), ison.rhs.algebra, isof.rhs.algebra);

    std::string instance = p.str() + "; F->N: " + wf.describe() + " <- " + wn.describe() + "; W1=" + w1.describe() +
                           "; W2=" + w2.describe();
    if (w1.dimension() == 1)
        instance += " (W1=k)";
    if (wf.dimension() == 1 && wn.dimension() == 1)
        instance += " (F=N=1)";

    Tally t;
    if (!(compose(isof.sigma, psi_l) == compose(psi_r, ison.sigma)))
        t.fail("canonical isos do not intertwine M^q");

    const SmoothMap &pi = p.projection();
    ScalarMode mode = pi.has_transcendental() ? ScalarMode::Float64 : ScalarMode::ExactRational;
    const bool positive = mode == ScalarMode::Float64;
    SmoothMap lifted_l = lift_map(pi, w12.algebra);
    SmoothMap lifted_r = lift_map(pi, isof.w1y.algebra);
    Sampler rng(samples.seed);
    for (std::size_t k = 0; k < samples.count; ++k) {
        ++t.total;
        try {
            // Left to right: (x, m) = (M^q-image of x0, T pi x0) is in the pullback.
            WeilPoint x0 = rng.point(ison.lhs.algebra, p.total_dimension(), mode, positive);
            WeilPoint x = alpha(psi_l, x0);
            WeilPoint m = lift_eval(pi, x0);
            WeilPoint px = lift_eval(pi, x);
            std::string bad;
            if (!points_agree(px, alpha(psi_l, m)))
                bad = "left pullback point fails its square";
            else if (!points_agree(unreassociate(lift_eval(lifted_l, reassociate(x)), isof.lhs.algebra), px))
                bad = "left side differs from its nested reading";
            WeilPoint xr = alpha(isof.sigma, x), mr = alpha(ison.sigma, m);
            WeilPoint pxr = lift_eval(pi, xr);
            if (bad.empty() && !points_agree(pxr, alpha(psi_r, mr)))
                bad = "image misses the right pullback";
            else if (bad.empty() &&
                     !points_agree(unreassociate(lift_eval(lifted_r, reassociate(xr)), isof.rhs.algebra), pxr))
                bad = "right side differs from its nested reading";
            else if (bad.empty() && !(points_agree(alpha(isof.sigma_inverse, xr), x) &&
                                      points_agree(alpha(ison.sigma_inverse, mr), m)))
                bad = "inverse does not recover the point";

            // Right to left.
            WeilPoint y0 = rng.point(ison.rhs.algebra, p.total_dimension(), mode, positive);
            WeilPoint y = alpha(psi_r, y0);
            WeilPoint my = lift_eval(pi, y0);
            WeilPoint yl = alpha(isof.sigma_inverse, y), ml = alpha(ison.sigma_inverse, my);
            if (bad.empty() && !points_agree(lift_eval(pi, yl), alpha(psi_l, ml)))
                bad = "inverse image misses the left pullback";
            if (bad.empty())
                ++t.agreed;
            else
                t.fail(bad + " at x=" + x0.str());
        } catch (const NonInvertibleError &) {
            ++t.skipped;
        }
    }
    return {"exponential-pullback", instance, t.pass(),
            t.str(std::string("samples agree ") + (mode == ScalarMode::ExactRational ? "exactly" : "within rel 1e-9") +
                  " through the canonical isos (dims " + std::to_string(isof.lhs.algebra.dimension()) + ", " +
                  std::to_string(ison.lhs.algebra.dimension()) + ")")};
}

} // namespace weilkit

#pragma once

#include "weilkit/axioms.hpp"
#include "weilkit/polynomial.hpp"

#include <optional>
#include <string>
#include <vector>

namespace weilkit {

/// An object pi: R^e -> R^b of the arrow category.
class FiberedObject {
public:
    explicit FiberedObject(SmoothMap projection);
    /// `fibered pi(x,y,z) -> (x^2+y^2+z^2)`.
    static FiberedObject parse(const std::string &text);
    static FiberedObject identity(std::size_t d);

    const SmoothMap &projection() const { return projection_; }
    std::size_t total_dimension() const { return projection_.arity_in(); }
    std::size_t base_dimension() const { return projection_.arity_out(); }
    /// Nullopt unless pi is polynomial.
    const std::optional<std::vector<Polynomial>> &polynomials() const { return polys_; }
    bool is_affine() const;
    std::string str() const;

private:
    SmoothMap projection_;
    std::optional<std::vector<Polynomial>> polys_;
};

/// A commuting square: pi2 . top = bottom . pi1.
struct FiberedMorphism {
    SmoothMap top;
    SmoothMap bottom;

    static FiberedMorphism identity(const FiberedObject &p);
};

FiberedMorphism compose(const FiberedMorphism &m2, const FiberedMorphism &m1);

/// Exact by polynomial expansion when everything is polynomial; otherwise
/// on samples.count floating points with relative tolerance 1e-9.
bool square_commutes(const FiberedObject &p1, const FiberedObject &p2, const FiberedMorphism &m,
                     const SampleSpec &samples = {});

/// A W-point of an arrow: its total and base parts.
struct ArrowPoint {
    WeilPoint total;
    WeilPoint base;
};

/// T^W on the arrow category: T^W pi as a map of flattened coefficients.
FiberedObject arrow_weil_functor(const WeilAlgebra &w, const FiberedObject &p);
FiberedMorphism arrow_weil_functor(const WeilAlgebra &w, const FiberedMorphism &m);
/// Componentwise lift_eval of (top, bottom).
ArrowPoint arrow_lift(const FiberedMorphism &m, const ArrowPoint &x);
/// alpha_phi on both parts.
ArrowPoint arrow_alpha(const WeilMorphism &phi, const ArrowPoint &x);

/// The composition law and the alpha-square for pi, at arrow level: both
/// parts of each sampled point stay matched by pi.
Report check_arrow_functor(const FiberedObject &p, const WeilAlgebra &w1, const WeilAlgebra &w2,
                           const WeilMorphism &phi, const SampleSpec &samples = {});

struct FiberedMicrolinearResult {
    bool fibered_microlinear = false;
    MicrolinearCertificate total;
    MicrolinearCertificate base;
    /// The arrow-level limit property decided directly, on E x M at once.
    MicrolinearCertificate arrow;
    /// Sampled naturality of pi against the legs.
    bool legs_natural = false;
    /// arrow-level verdict == (E microlinear and M microlinear).
    bool iff_holds = false;

    std::string summary() const;
};

FiberedMicrolinearResult check_fibered_microlinear(const FiberedObject &p, const DiagramInWeil &d,
                                                   const SampleSpec &samples = {});

/// True iff T^W pi (x) = iota(pi(tau x)); exact for rational points.
bool vertical_membership(const FiberedObject &p, const WeilPoint &x);

/// The fiber of the vertical bundle V^W(pi) over e0, solved degree by
/// degree along the filtration of the maximal ideal. In degree j the
/// unknown is the layer-j part n_j of the nilpotent coordinates, and the
/// equation reads (J (x) I) n_j = -(layer-j part of pi(e0 + n_<j)).
class VerticalFiber {
public:
    struct Degree {
        std::size_t degree = 0;
        std::size_t layer_size = 0;
        std::size_t rank = 0;
        /// Free parameters in this degree: dim ker(J (x) I).
        std::size_t free_parameters = 0;
        /// Homogeneous solutions as points with zero augmentation.
        std::vector<WeilPoint> directions;
    };

    const FiberedObject &fibered() const { return p_; }
    const WeilAlgebra &algebra() const { return w_; }
    const QVector &base_point() const { return e0_; }
    const QMatrix &jacobian() const { return jacobian_; }
    /// Jacobian of full row rank at e0.
    bool regular() const { return regular_; }
    const std::vector<Degree> &degrees() const { return degrees_; }
    /// Total number of free parameters.
    std::size_t dimension() const;
    /// Basis of ker J (the tangent directions of the fiber of pi).
    const std::vector<QVector> &kernel() const { return kernel_; }

    /// The member of the fiber with the given parameters, degree by
    /// degree. Throws WeilError if some degree is obstructed (only
    /// possible at irregular points).
    WeilPoint point(const QVector &params) const;
    /// Inverse of point(): the unique parameters of a member, or nullopt if
    /// x is not in this fiber.
    std::optional<QVector> parameters(const WeilPoint &x) const;
    std::string str() const;

private:
    friend VerticalFiber vertical_fiber(const FiberedObject &p, const WeilAlgebra &w, const Vector &e0);
    VerticalFiber(FiberedObject p, WeilAlgebra w) : p_(std::move(p)), w_(std::move(w)) {}

    // Layer-j coordinates (c-major) of the nilpotent part of a point.
    QVector layer_coordinates(const WeilPoint &x, std::size_t j) const;
    QVector defect(const WeilPoint &x, std::size_t j) const;

    FiberedObject p_;
    WeilAlgebra w_;
    QVector e0_;
    QMatrix jacobian_;
    bool regular_ = false;
    std::vector<QVector> kernel_;
    std::vector<Degree> degrees_;
    std::vector<QMatrix> systems_;
};

/// Throws ModeError for floating base points or non-polynomial pi.
VerticalFiber vertical_fiber(const FiberedObject &p, const WeilAlgebra &w, const Vector &e0);

/// V^W(m) at a vertical point of p1: T^W top. Throws WeilError when x is
/// not vertical, or when the result fails membership in p2 or does not lie
/// over top(tau x).
WeilPoint vertical_functor_on_morphism(const FiberedObject &p1, const FiberedObject &p2,
                                       const FiberedMorphism &m, const WeilPoint &x);

/// Finite diagram in the arrow category with affine tops and bottoms.
struct FiberedArrow {
    std::size_t source;
    std::size_t target;
    FiberedMorphism morphism;
};

struct FiberedCone {
    FiberedObject apex;
    std::vector<FiberedMorphism> legs;
};

struct FiberedDiagram {
    std::vector<FiberedObject> objects;
    std::vector<FiberedArrow> arrows;
    std::optional<FiberedCone> cone;
};

/// Componentwise limit, parametrized by coordinates on the affine limit of
/// the total spaces. Throws WeilError for non-affine arrows or an empty limit.
FiberedDiagram fibered_limit(FiberedDiagram d);

/// Negative control: legs post-composed with the constant endomorphism at
/// a base point of the apex.
FiberedDiagram break_fibered_cone(const FiberedDiagram &d);

struct VerdictResult {
    bool holds = false;
    /// "exact", "degree-graded" or "sampled".
    std::string method;
    std::string reason;

    ReportEntry entry(std::string check, std::string instance) const;
};

/// V^W sends the cone to a limit cone. Exact by linear algebra on the
/// equalizer of mu = pi (x) W and nu = iota pi tau when every pi is affine;
/// otherwise sampled mediation at regular points.
VerdictResult check_vertical_left_exact(const FiberedDiagram &d, const WeilAlgebra &w,
                                        const SampleSpec &samples = {});

/// Vertical fibers over e0 for the algebras of d (completed by k) with the
/// restricted alpha maps form a limit diagram. Exact for affine pi,
/// per degree of the filtration at regular points, sampled otherwise.
VerdictResult check_vertical_microlinearity(const FiberedObject &p, const DiagramInWeil &d, const QVector &e0,
                                            const SampleSpec &samples = {});

/// Equalizer property of the vertical fiber over e0: sampled maps into
/// E (x) W equalizing both composites factor uniquely through the
/// parametrization.
ReportEntry check_vertical_equalizer(const FiberedObject &p, const WeilAlgebra &w, const QVector &e0,
                                     const SampleSpec &samples = {});

/// tau^V naturality: for m: p1 -> p2 and sampled vertical points x of p1,
/// V^W(m)(x) is vertical and lies over top(tau x).
ReportEntry check_vertical_naturality(const FiberedObject &p1, const FiberedObject &p2, const FiberedMorphism &m,
                                      const WeilAlgebra &w, const SampleSpec &samples = {});

/// An exponent arrow F -> N between infinitesimal objects: F = Spec W_F,
/// N = Spec W_N, given by psi: W_N -> W_F.
struct InfinitesimalArrow {
    WeilMorphism psi;
    const WeilAlgebra &total() const { return psi.target(); }
    const WeilAlgebra &base() const { return psi.source(); }
};

/// (E^F)_P is the pullback of E^F -> M^F <- M^N. Checks
/// ((E (x) (W1 (x) W2))^F)_P = ((E (x) W1)^F)_P (x) W2 through the
/// canonical isos on sampled pullback points, in both directions.
ReportEntry fibered_exponential_pullback(const FiberedObject &p, const InfinitesimalArrow &q,
                                         const WeilAlgebra &w1, const WeilAlgebra &w2,
                                         const SampleSpec &samples = {});

} // namespace weilkit

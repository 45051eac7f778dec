#pragma once

#include "weilkit/report.hpp"
#include "weilkit/sampling.hpp"
#include "weilkit/weil_functor.hpp"
#include "weilkit/weil_limits.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace weilkit {

class ModelObject;

/// An arrow between objects of an ObjectDiagram, given by an affine map of
/// the ambient coordinate spaces.
struct ModelArrow {
    std::size_t source;
    std::size_t target;
    SmoothMap map;
};

struct ObjectDiagram {
    std::vector<ModelObject> objects;
    std::vector<ModelArrow> arrows;
};

/// Spec of a Weil algebra, used as an exponent: X^Y := X (x) W_Y.
struct InfinitesimalExponent {
    WeilAlgebra algebra;
};

/// Objects of the model category: affine subspaces {z : C z = c} of R^N.
/// Coordinate spaces, finite limits along affine maps, and X (x) W all
/// stay in this class, which is what makes the checks decidable by exact
/// linear algebra.
class ModelObject {
public:
    enum class Kind { Coordinate, Affine, LimitOf, TensorWith, Exponential };

    static ModelObject coordinate(std::size_t d);
    static ModelObject affine(QMatrix equations, QVector rhs, std::string description);
    /// Subspace of the product of the objects on which every arrow holds.
    /// Throws WeilError when an arrow is not affine or its arity is wrong.
    static ModelObject limit_of(const ObjectDiagram &d);
    /// X (x) W, in coordinates c*dim(W) + i.
    static ModelObject tensor_with(const ModelObject &x, const WeilAlgebra &w);
    static ModelObject exponential(const ModelObject &x, const InfinitesimalExponent &y);

    Kind kind() const { return kind_; }
    std::size_t ambient() const { return ambient_; }
    const QMatrix &equations() const { return equations_; }
    const QVector &rhs() const { return rhs_; }
    const std::string &describe() const { return description_; }
    /// The defining diagram of a LimitOf object.
    const ObjectDiagram *diagram() const { return diagram_.get(); }

    /// A point of X, or nullopt when X is empty.
    const std::optional<QVector> &base_point() const { return base_point_; }
    bool is_empty() const { return !base_point_; }
    /// Direction space ker C.
    Subspace directions() const;
    bool contains(std::span<const Rational> z) const;
    /// Membership of a W-point in X (x) W.
    bool contains(const WeilPoint &x) const;
    /// A random exact point of X (x) W. Throws WeilError when X is empty.
    WeilPoint sample(Sampler &s, const WeilAlgebra &w) const;

private:
    Kind kind_ = Kind::Coordinate;
    std::size_t ambient_ = 0;
    QMatrix equations_;
    QVector rhs_;
    std::optional<QVector> base_point_;
    std::string description_;
    std::shared_ptr<const ObjectDiagram> diagram_;
};

/// Equations of X (x) W from those of X: C (x) I_n with the offset on the
/// unit coordinate.
QMatrix tensor_equations(const QMatrix &c, std::size_t n);
QVector tensor_rhs(const QVector &c, std::size_t n);
/// I_d (x) M: the action of a morphism with matrix M on d stacked coordinates.
QMatrix coordinatewise(const QMatrix &m, std::size_t d);

struct MicrolinearCertificate {
    bool microlinear = false;
    bool cone_is_limit = false;
    /// dim of X (x) apex and of lim(X (x) D) as affine spaces.
    std::size_t apex_dimension = 0;
    std::size_t limit_dimension = 0;
    /// Rank of the canonical map X (x) apex -> lim(X (x) D) on directions.
    std::size_t rank = 0;
    std::string reason;
    /// A direction collapsed by the canonical map, or one missed by it.
    QVector witness;

    std::string summary() const;
};

/// d with the terminal object k appended, joined to every object (and to
/// the apex) by its augmentation. Limits in Weil_k do not change; the
/// model-level limit does for disconnected shapes, e.g. the product
/// W1 x_k W2 goes to the fiber product over X rather than the plain product.
DiagramInWeil with_terminal(const DiagramInWeil &d);

/// Decides whether X (x) d is a limit diagram, for d completed by
/// with_terminal. The input cone must be a limit cone in Weil_k; otherwise
/// the answer is false with that reason, and the model-level rank data is
/// still reported as a witness. Sampled points of X (x) apex are also
/// pushed through the legs as a sanity check.
MicrolinearCertificate check_microlinear(const ModelObject &x, const DiagramInWeil &d,
                                         const SampleSpec &samples = {});

/// The canonical iso sigma: (W1 (x) W2) (x) W_Y -> (W1 (x) W_Y) (x) W2,
/// built from associators and the symmetry, with the tensors it lives on.
struct ExponentIso {
    TensorProduct w12, lhs, w1y, rhs;
    WeilMorphism sigma, sigma_inverse;
};

ExponentIso exponent_iso(const WeilAlgebra &w1, const WeilAlgebra &w2, const WeilAlgebra &wy);
/// Same, reusing an existing W1 (x) W2.
ExponentIso exponent_iso(const TensorProduct &w12, const WeilAlgebra &wy);

/// The canonical isomorphism between (X (x) (W1 (x) W2))^Y and
/// ((X (x) W1)^Y) (x) W2, i.e. (W1 (x) W2) (x) W_Y -> (W1 (x) W_Y) (x) W2,
/// checked against the factor inclusions, on membership, on inversion,
/// against lifted polynomial maps, and against the nested functor reading
/// of both sides. Exact throughout.
ReportEntry check_weil_exponentiable(const ModelObject &x, const InfinitesimalExponent &y,
                                     const WeilAlgebra &w1, const WeilAlgebra &w2,
                                     const SampleSpec &samples = {});

/// lim over the object diagram of (lim over d of X_l (x) W_g), computed in
/// both orders and compared exactly as affine subspaces.
ReportEntry check_double_limit(const ObjectDiagram &objects, const DiagramInWeil &d);

/// Negative control: the same diagram with every leg post-composed with a
/// non-invertible endomorphism of the apex (or, for apex k, routed through
/// an inflated apex k x_k D).
DiagramInWeil break_cone(const DiagramInWeil &d);

/// Random equalizer, pullback, product or one-object diagram with its
/// limit cone; object dimensions at most max_dim.
DiagramInWeil random_limit_diagram(Sampler &s, std::size_t max_dim);

/// Random affine limit of coordinate spaces (equalizer or pullback).
ModelObject random_affine_limit(Sampler &s);

/// Batteries for the closure properties: X (x) W, finite limits and
/// infinitesimal exponentials of checked objects pass the checks again,
/// and double limits commute.
Report closure_suite(std::uint64_t seed, std::size_t instances = 4, std::size_t samples = 5);

} // namespace weilkit

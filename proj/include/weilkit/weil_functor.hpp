#pragma once

#include "weilkit/expr.hpp"
#include "weilkit/report.hpp"
#include "weilkit/weil_morphism.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace weilkit {

/// A point of T^W R^d = R^d (x) W: d elements of W sharing one scalar mode.
class WeilPoint {
public:
    WeilPoint(WeilAlgebra algebra, std::vector<WeilElement> coords,
              ScalarMode mode = ScalarMode::ExactRational);

    /// The point iota(x): constants in W.
    static WeilPoint constant(const WeilAlgebra &w, const Vector &x);

    const WeilAlgebra &algebra() const { return algebra_; }
    std::size_t dimension() const { return coords_.size(); }
    const std::vector<WeilElement> &coords() const { return coords_; }
    const WeilElement &operator[](std::size_t i) const { return coords_[i]; }
    ScalarMode mode() const { return mode_; }

    /// Coefficients coordinate-major: entry c*dim(W) + i is coefficient i of coordinate c.
    Vector flatten() const;
    static WeilPoint unflatten(const WeilAlgebra &w, std::size_t d, const Vector &flat);

    friend bool operator==(const WeilPoint &a, const WeilPoint &b);
    std::string str() const;

private:
    WeilAlgebra algebra_;
    std::vector<WeilElement> coords_;
    ScalarMode mode_;
};

/// Plain evaluation f(x).
Vector evaluate(const SmoothMap &f, const Vector &x);

/// T^W f at x: every node is evaluated in R (x) W; analytic primitives use
/// the Taylor expansion in the nilpotent part, truncated at the nilpotency
/// degree. Throws ModeError for transcendental nodes on exact input and
/// NonInvertibleError for division by an element with zero augmentation.
WeilPoint lift_eval(const SmoothMap &f, const WeilPoint &x);

/// T^W f as a map R^(m dim W) -> R^(n dim W) on flattened coefficients.
SmoothMap lift_map(const SmoothMap &f, const WeilAlgebra &w);

/// alpha_phi: coordinatewise action of phi.
WeilPoint alpha(const WeilMorphism &phi, const WeilPoint &x);
/// tau_W: the point over k given by the augmentations.
WeilPoint tau(const WeilPoint &x);
/// iota_W for a point over k.
WeilPoint iota(const WeilAlgebra &w, const WeilPoint &x);

/// For x over W1 (x) W2 (built by tensor()), the point of T^W2 T^W1 R^d:
/// d*dim(W1) coordinates over W2, coordinate c*dim(W1)+i holding the
/// coefficients of x_c at the pairs (i, .).
WeilPoint reassociate(const WeilPoint &x);
/// Inverse of reassociate, into the given tensor algebra.
WeilPoint unreassociate(const WeilPoint &nested, const WeilAlgebra &tensor_algebra);

/// Comparison used by the checks: exact equality for exact points, relative
/// tolerance 1e-9 per coefficient for floating points.
bool points_agree(const WeilPoint &a, const WeilPoint &b, double rel_tol = 1e-9);

struct SampleSpec {
    std::size_t count = 20;
    std::uint64_t seed = 1;
};

/// T^{W2}(T^{W1} f) against T^{W1 (x) W2} f through reassociate on random
/// points. Floating mode is used only when f has transcendental nodes.
ReportEntry check_functor_composition(const SmoothMap &f, const WeilAlgebra &w1,
                                      const WeilAlgebra &w2, const SampleSpec &samples);

/// alpha_phi after T^{W1} f against T^{W2} f after alpha_phi.
ReportEntry check_bifunctor(const SmoothMap &f, const WeilMorphism &phi, const SampleSpec &samples);

struct Jet {
    WeilAlgebra algebra;
    std::vector<WeilElement> outputs;
};

/// Univariate jet: W = Q[x]/(x^(order+1)), input point + x. The coefficient
/// of x^j in each output is f^(j)(point)/j!.
Jet jet(const SmoothMap &f, const Scalar &point, unsigned order);

/// One truncated line per input direction (generators x, y, z, ...),
/// input point_i + generator_i. With order 1 this is D (x) D (x) ...
Jet jet(const SmoothMap &f, const Vector &point, unsigned order);

} // namespace weilkit

#pragma once

#include "weilkit/weil_algebra.hpp"

#include <vector>

namespace weilkit {

/// Unital algebra homomorphism compatible with augmentations, stored as the
/// matrix of the underlying linear map (target dim x source dim).
class WeilMorphism {
public:
    /// Validates unit, multiplicativity on all basis pairs and augmentation.
    static WeilMorphism from_matrix(WeilAlgebra source, WeilAlgebra target, QMatrix matrix);
    /// Presented sources only: one image per generator. Images must have zero
    /// augmentation and must kill every relation monomial.
    static WeilMorphism from_generator_images(WeilAlgebra source, WeilAlgebra target,
                                              const std::vector<WeilElement> &images);
    /// Skips validation; for maps that are homomorphisms by construction.
    static WeilMorphism trusted(WeilAlgebra source, WeilAlgebra target, QMatrix matrix);

    static WeilMorphism identity(const WeilAlgebra &a);

    const WeilAlgebra &source() const { return source_; }
    const WeilAlgebra &target() const { return target_; }
    const QMatrix &matrix() const { return matrix_; }

    /// Works in either scalar mode.
    WeilElement apply(const WeilElement &w) const;
    QVector apply(const QVector &coeffs) const;

    bool is_isomorphism() const;

    friend bool operator==(const WeilMorphism &a, const WeilMorphism &b);

private:
    WeilMorphism(WeilAlgebra s, WeilAlgebra t, QMatrix m)
        : source_(std::move(s)), target_(std::move(t)), matrix_(std::move(m)) {}
    void validate() const;

    WeilAlgebra source_;
    WeilAlgebra target_;
    QMatrix matrix_;
};

/// The unique morphism W -> k.
WeilMorphism augmentation(const WeilAlgebra &w);
/// The structure map k -> W.
WeilMorphism unit_map(const WeilAlgebra &w);

/// psi after phi. Throws WeilError on endpoint mismatch.
WeilMorphism compose(const WeilMorphism &psi, const WeilMorphism &phi);

struct TensorProduct {
    WeilAlgebra algebra;
    WeilMorphism left;  // a |-> a (x) 1
    WeilMorphism right; // b |-> 1 (x) b
};

/// W1 (x)_k W2. Presented inputs give the disjoint-union presentation
/// (colliding generator names are renamed); otherwise the result is tabled
/// on basis pairs. The result remembers its factors.
TensorProduct tensor(const WeilAlgebra &w1, const WeilAlgebra &w2);

/// phi1 (x) phi2 between tensor algebras built by tensor().
WeilMorphism tensor_morphism(const WeilMorphism &phi1, const WeilMorphism &phi2,
                             const WeilAlgebra &source_tensor, const WeilAlgebra &target_tensor);

/// Canonical iso (A (x) B) (x) C -> A (x) (B (x) C) for tensors built by tensor().
WeilMorphism associator(const WeilAlgebra &left_nested, const WeilAlgebra &right_nested);

/// Canonical iso A (x) B -> B (x) A.
WeilMorphism symmetry(const WeilAlgebra &ab, const WeilAlgebra &ba);

} // namespace weilkit

#pragma once

#include "weilkit/expr.hpp"
#include "weilkit/weil_functor.hpp"

#include <cstdint>
#include <random>

namespace weilkit {

/// Seeded source of random instances. Draws use plain modulo reduction of
/// mt19937_64 output so sequences are identical on every platform.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}

    std::uint64_t next() { return rng_(); }
    /// Uniform in [lo, hi].
    long integer(long lo, long hi);
    /// Numerator and denominator bounded by 7 in absolute value.
    Rational small_rational();
    /// As small_rational but in (0, 7].
    Rational positive_rational();
    Scalar scalar(ScalarMode mode);
    QVector rational_vector(std::size_t n);

    /// Random element; with positive_constant the augmentation is > 0.
    WeilElement element(const WeilAlgebra &w, ScalarMode mode, bool positive_constant = false);
    WeilPoint point(const WeilAlgebra &w, std::size_t d, ScalarMode mode, bool positive_constant = false);

    /// Random polynomial expression tree of the given depth in m variables.
    Expr polynomial(std::size_t m, unsigned depth);
    SmoothMap polynomial_map(std::size_t m, std::size_t n, unsigned depth);

    /// Presented algebra on up to three generators with dimension <= max_dim.
    WeilAlgebra presented_algebra(std::size_t max_dim);
    /// Random morphism from a presented source by rejection on generator
    /// images; falls back to the map through k.
    WeilMorphism morphism(const WeilAlgebra &source, const WeilAlgebra &target);

private:
    std::mt19937_64 rng_;
};

} // namespace weilkit

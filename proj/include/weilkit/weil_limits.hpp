#pragma once

#include "weilkit/weil_morphism.hpp"

#include <optional>
#include <string>
#include <vector>

namespace weilkit {

/// Image of a subspace closed under multiplication and containing 1,
/// re-presented as a tabled algebra with its inclusion.
struct Subalgebra {
    WeilAlgebra algebra;
    WeilMorphism inclusion;
};

/// The subalgebra spanned by `vectors` (1 is always added). Throws
/// WeilError if the span is not closed under multiplication.
Subalgebra subalgebra(const WeilAlgebra &ambient, const std::vector<QVector> &vectors);

struct EqualizerResult {
    WeilAlgebra algebra;
    WeilMorphism inclusion;
};

/// {w : phi(w) = psi(w)} for parallel phi, psi.
EqualizerResult equalizer(const WeilMorphism &phi, const WeilMorphism &psi);

struct ProductResult {
    WeilAlgebra algebra;
    std::vector<WeilMorphism> projections;
};

/// Fiber product over k of the factors (the product in Weil_k); dimension
/// 1 + sum(dim - 1). The empty product is k.
ProductResult product_over_k(const std::vector<WeilAlgebra> &factors);
ProductResult product_over_k(const WeilAlgebra &w1, const WeilAlgebra &w2);

struct DiagramArrow {
    std::size_t source;
    std::size_t target;
    WeilMorphism morphism;
};

struct Cone {
    WeilAlgebra apex;
    std::vector<WeilMorphism> legs; // one per diagram object
};

/// A finite diagram in Weil_k, optionally with a cone over it.
struct DiagramInWeil {
    std::vector<WeilAlgebra> objects;
    std::vector<DiagramArrow> arrows;
    std::optional<Cone> cone;

    /// Throws WeilError when an arrow's endpoints do not match the indexed objects.
    void validate() const;
    /// True iff the cone's legs commute with every arrow.
    bool cone_commutes(const Cone &c) const;
};

struct LimitResult {
    WeilAlgebra algebra;
    std::vector<WeilMorphism> legs;
    /// The limit inside the fiber product of all objects.
    WeilMorphism into_product;
};

/// Equational subalgebra of the product over k cut out by one block of
/// equations per arrow.
LimitResult limit(const DiagramInWeil &d);

/// The diagram together with the computed limit cone.
DiagramInWeil with_limit_cone(DiagramInWeil d);

struct LimitCertificate {
    bool is_limit = false;
    std::size_t apex_dimension = 0;
    std::size_t limit_dimension = 0;
    std::size_t mediating_rank = 0;
    /// Canonical map apex -> limit(d) as a matrix (limit dim x apex dim).
    QMatrix mediating;
    std::string reason;

    std::string summary() const;
};

/// Decides whether d's cone is a limit cone. Throws WeilError when the cone
/// is missing or does not commute.
LimitCertificate is_limit_cone(const DiagramInWeil &d);

class MediationError : public WeilError {
public:
    enum class Kind { NoSolution, NotUnique };
    MediationError(Kind kind, const std::string &what) : WeilError(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

/// The unique morphism outer.apex -> limit_cone.apex commuting with all
/// legs. NoSolution means the cones are incompatible; NotUnique means the
/// target cone is not a limit.
WeilMorphism mediating_morphism(const Cone &outer, const Cone &limit_cone);

/// Given equalizers z1 of (g1, h1) and z2 of (g2, h2) and a map of parallel
/// pairs (f, fbar) with fbar g1 = g2 f and fbar h1 = h2 f, the unique map
/// z1 -> z2 over f.
WeilMorphism induced_map_between_equalizers(const EqualizerResult &z1, const WeilMorphism &g1,
                                            const WeilMorphism &h1, const EqualizerResult &z2,
                                            const WeilMorphism &g2, const WeilMorphism &h2,
                                            const WeilMorphism &f, const WeilMorphism &fbar);

/// True iff there is an algebra isomorphism between a and b commuting
/// with the given maps into a common algebra (used for "same limit up to
/// iso" comparisons): solves for the linear map and validates it.
bool isomorphic_over(const WeilMorphism &a_into, const WeilMorphism &b_into);

} // namespace weilkit

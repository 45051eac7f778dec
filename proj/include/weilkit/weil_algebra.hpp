#pragma once

#include "weilkit/matrix.hpp"
#include "weilkit/scalar.hpp"

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace weilkit {

/// Invalid algebra, element or morphism data.
class WeilError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Exponents = std::vector<unsigned>;

struct StructureEntry {
    std::size_t index;
    Rational coeff;
};

/// One nonzero structure constant: e_i * e_j has coefficient `value` on e_k.
struct StructureConstant {
    std::size_t i, j, k;
    Rational value;
};

struct TabledData {
    std::size_t dimension = 1;
    std::size_t unit_index = 0;
    QVector augmentation;
    std::vector<StructureConstant> constants;
};

class WeilAlgebra;

/// Records that an algebra was built as left (x) right, with basis index
/// t corresponding to the pair (pairs[t].first, pairs[t].second).
struct TensorInfo {
    std::shared_ptr<const class WeilAlgebraImpl> left;
    std::shared_ptr<const class WeilAlgebraImpl> right;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::vector<std::size_t> index_of_pair; // left_index * right_dim + right_index
};

class WeilAlgebraImpl;

/// A finite-dimensional local commutative Q-algebra with nilpotent maximal
/// ideal. Basis element 0 is the unit. Immutable; copies share storage.
class WeilAlgebra {
public:
    enum class Flavor { Presented, Tabled };

    /// The base field Q, the terminal object.
    static WeilAlgebra k();
    /// Q[generators]/(monomials). Every generator needs a pure-power
    /// relation; the basis is the standard monomials in graded order.
    static WeilAlgebra presented(std::vector<std::string> generators,
                                 std::vector<Exponents> relations);
    /// Q[x]/(x^(order+1)).
    static WeilAlgebra truncated_line(unsigned order, std::string name = "x");
    /// Dual numbers Q[x]/(x^2).
    static WeilAlgebra dual_numbers(std::string name = "x");
    /// D(n) = Q[x1..xn]/(xi*xj for all i <= j).
    static WeilAlgebra first_order(unsigned n);
    static WeilAlgebra tabled(const TabledData &data);

    Flavor flavor() const;
    bool is_presented() const { return flavor() == Flavor::Presented; }
    std::size_t dimension() const;
    /// Least N with m^N = 0.
    std::size_t nilpotency_degree() const;

    const std::vector<std::string> &generators() const;
    const std::vector<Exponents> &relations() const;
    /// Exponent vectors of the monomial basis (presented algebras only).
    const std::vector<Exponents> &monomials() const;
    std::optional<std::size_t> monomial_index(const Exponents &e) const;

    const std::vector<StructureEntry> &product(std::size_t i, std::size_t j) const;
    const QVector &augmentation() const;

    /// Tensor provenance, when built by tensor().
    const TensorInfo *tensor_info() const;
    WeilAlgebra tensor_left() const;
    WeilAlgebra tensor_right() const;

    /// m^1 ... m^(N-1) as subspaces of the algebra.
    const std::vector<Subspace> &ideal_powers() const;
    /// Basis of m adapted to the filtration: layers[j-1] holds vectors of
    /// m^j spanning a complement of m^(j+1).
    const std::vector<std::vector<QVector>> &graded_layers() const;

    std::string basis_label(std::size_t i) const;
    /// Short human description, e.g. "Q[x]/(x^2)" or "tabled(dim=3)".
    std::string describe() const;

    /// Structural equality: same dimension, structure constants and
    /// augmentation (generator names are ignored).
    friend bool operator==(const WeilAlgebra &a, const WeilAlgebra &b);
    friend bool operator!=(const WeilAlgebra &a, const WeilAlgebra &b) { return !(a == b); }

    /// Exhaustive checks, exposed for the test suite.
    bool is_commutative() const;
    bool is_associative() const;

    const std::shared_ptr<const WeilAlgebraImpl> &impl() const { return impl_; }
    explicit WeilAlgebra(std::shared_ptr<const WeilAlgebraImpl> impl) : impl_(std::move(impl)) {}

private:
    std::shared_ptr<const WeilAlgebraImpl> impl_;
};

class WeilAlgebraImpl {
public:
    WeilAlgebra::Flavor flavor = WeilAlgebra::Flavor::Tabled;
    std::size_t dim = 1;
    std::vector<std::string> generators;
    std::vector<Exponents> relations;
    std::vector<Exponents> monomials;
    std::vector<std::vector<StructureEntry>> products; // dim*dim
    QVector augmentation;
    std::size_t nilpotency = 1;
    std::vector<Subspace> ideal_powers;
    std::vector<std::vector<QVector>> graded_layers;
    std::optional<TensorInfo> tensor;
    std::string label;
};

/// Element of a Weil algebra; coefficients share one scalar mode.
class WeilElement {
public:
    WeilElement(WeilAlgebra algebra, Vector coeffs);
    static WeilElement zero(const WeilAlgebra &a, ScalarMode mode = ScalarMode::ExactRational);
    static WeilElement constant(const WeilAlgebra &a, const Scalar &c);
    static WeilElement basis(const WeilAlgebra &a, std::size_t i,
                             ScalarMode mode = ScalarMode::ExactRational);
    static WeilElement from_rationals(const WeilAlgebra &a, const QVector &coeffs,
                                      ScalarMode mode = ScalarMode::ExactRational);

    const WeilAlgebra &algebra() const { return algebra_; }
    const Vector &coeffs() const { return coeffs_; }
    const Scalar &operator[](std::size_t i) const { return coeffs_[i]; }
    std::size_t size() const { return coeffs_.size(); }
    ScalarMode mode() const;
    QVector to_rational() const;

    /// Image under the augmentation.
    Scalar augmentation() const;
    WeilElement nilpotent_part() const;
    bool is_invertible() const { return !augmentation().is_zero(); }
    /// Throws NonInvertibleError when the augmentation vanishes.
    WeilElement inverse() const;
    WeilElement pow(long exponent) const;

    WeilElement operator-() const;
    WeilElement &operator+=(const WeilElement &o);
    WeilElement &operator-=(const WeilElement &o);
    WeilElement &operator*=(const Scalar &s);
    friend WeilElement operator+(WeilElement a, const WeilElement &b) { return a += b; }
    friend WeilElement operator-(WeilElement a, const WeilElement &b) { return a -= b; }
    friend WeilElement operator*(const WeilElement &a, const WeilElement &b);
    friend WeilElement operator*(WeilElement a, const Scalar &s) { return a *= s; }
    friend WeilElement operator*(const Scalar &s, WeilElement a) { return a *= s; }
    friend bool operator==(const WeilElement &a, const WeilElement &b);

    std::string str() const;

private:
    void require_same_algebra(const WeilElement &o) const;
    WeilAlgebra algebra_;
    Vector coeffs_;
};

class NonInvertibleError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

std::ostream &operator<<(std::ostream &os, const WeilElement &e);

} // namespace weilkit

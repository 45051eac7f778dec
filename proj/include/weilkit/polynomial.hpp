#pragma once

#include "weilkit/expr.hpp"
#include "weilkit/matrix.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace weilkit {

/// Sparse multivariate polynomial over Q in a fixed number of variables.
class Polynomial {
public:
    using Monomial = std::vector<unsigned>;

    explicit Polynomial(std::size_t nvars = 0) : nvars_(nvars) {}
    static Polynomial constant(std::size_t nvars, const Rational &c);
    static Polynomial variable(std::size_t nvars, std::size_t i);

    std::size_t nvars() const { return nvars_; }
    const std::map<Monomial, Rational> &terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    unsigned degree() const;
    bool is_affine() const { return degree() <= 1; }
    Rational coefficient(const Monomial &m) const;

    Polynomial &operator+=(const Polynomial &o);
    Polynomial &operator-=(const Polynomial &o);
    friend Polynomial operator+(Polynomial a, const Polynomial &b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial &b) { return a -= b; }
    friend Polynomial operator*(const Polynomial &a, const Polynomial &b);
    Polynomial operator-() const;
    Polynomial scaled(const Rational &c) const;
    Polynomial pow(unsigned n) const;

    Polynomial derivative(std::size_t var) const;
    Rational evaluate(const QVector &point) const;

    friend bool operator==(const Polynomial &a, const Polynomial &b) {
        return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
    }

    std::string str(const std::vector<std::string> &names) const;

private:
    void add_term(const Monomial &m, const Rational &c);
    std::size_t nvars_;
    std::map<Monomial, Rational> terms_;
};

/// Expands e as a polynomial in nvars variables; nullopt if e uses
/// transcendental functions, negative powers or division by a
/// non-constant.
std::optional<Polynomial> to_polynomial(const Expr &e, std::size_t nvars);

/// All outputs of f as polynomials, or nullopt.
std::optional<std::vector<Polynomial>> to_polynomials(const SmoothMap &f);

/// For affine f: x |-> A x + b. nullopt when some output is not affine.
struct AffineForm {
    QMatrix linear;
    QVector offset;
};
std::optional<AffineForm> affine_form(const SmoothMap &f);

/// Jacobian of polynomial outputs at a rational point.
QMatrix jacobian(const std::vector<Polynomial> &f, const QVector &point);

} // namespace weilkit

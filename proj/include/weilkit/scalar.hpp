#pragma once

#include <gmpxx.h>

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <variant>

namespace weilkit {

using Rational = mpq_class;

enum class ScalarMode { ExactRational, Float64 };

const char *to_string(ScalarMode mode);

/// Raised when exact and floating scalars meet, or when an exact-only
/// computation receives floating input.
class ModeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed text input (presentations, expressions, numbers).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A base-ring scalar: either an arbitrary-precision rational or a double.
/// Arithmetic between the two modes is rejected.
class Scalar {
public:
    Scalar() : value_(Rational(0)) {}
    Scalar(Rational q) : value_(std::move(q)) { canonical(); }
    Scalar(int v) : value_(Rational(v)) {}
    Scalar(long v) : value_(Rational(v)) {}
    explicit Scalar(double v) : value_(v) {}

    static Scalar zero(ScalarMode mode);
    static Scalar one(ScalarMode mode);
    static Scalar from_rational(const Rational &q, ScalarMode mode);

    ScalarMode mode() const {
        return std::holds_alternative<Rational>(value_)
                   ? ScalarMode::ExactRational
                   : ScalarMode::Float64;
    }
    bool is_exact() const { return mode() == ScalarMode::ExactRational; }

    /// Throws ModeError for Float64 scalars.
    const Rational &rational() const;
    double to_double() const;

    bool is_zero() const;

    Scalar operator-() const;
    Scalar &operator+=(const Scalar &o);
    Scalar &operator-=(const Scalar &o);
    Scalar &operator*=(const Scalar &o);
    /// Division by an exact zero throws std::domain_error.
    Scalar &operator/=(const Scalar &o);

    friend Scalar operator+(Scalar a, const Scalar &b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar &b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar &b) { return a *= b; }
    friend Scalar operator/(Scalar a, const Scalar &b) { return a /= b; }

    /// Exact equality for rationals; bitwise value equality for doubles.
    /// Scalars of different modes never compare equal.
    friend bool operator==(const Scalar &a, const Scalar &b);

    std::string str() const;

private:
    void canonical();
    void require_same_mode(const Scalar &o) const;

    std::variant<Rational, double> value_;
};

std::ostream &operator<<(std::ostream &os, const Scalar &s);

/// Parses "3", "-7/4" or "0.125" (decimals are converted exactly).
Rational parse_rational(const std::string &text);

/// Relative comparison used by the floating checks: |a-b| <= tol*max(1,|a|,|b|).
bool approx_equal(double a, double b, double rel_tol);
bool approx_equal(const Scalar &a, const Scalar &b, double rel_tol);

} // namespace weilkit

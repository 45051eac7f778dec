#include "weilkit/scalar.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

namespace weilkit {

const char *to_string(ScalarMode mode) {
    return mode == ScalarMode::ExactRational ? "exact" : "float";
}

Scalar Scalar::zero(ScalarMode mode) {
    return mode == ScalarMode::ExactRational ? Scalar(Rational(0)) : Scalar(0.0);
}

Scalar Scalar::one(ScalarMode mode) {
    return mode == ScalarMode::ExactRational ? Scalar(Rational(1)) : Scalar(1.0);
}

Scalar Scalar::from_rational(const Rational &q, ScalarMode mode) {
    return mode == ScalarMode::ExactRational ? Scalar(q) : Scalar(q.get_d());
}

const Rational &Scalar::rational() const {
    if (auto *q = std::get_if<Rational>(&value_))
        return *q;
    throw ModeError("floating scalar used where an exact rational is required");
}

double Scalar::to_double() const {
    if (auto *q = std::get_if<Rational>(&value_))
        return q->get_d();
    return std::get<double>(value_);
}

bool Scalar::is_zero() const {
    if (auto *q = std::get_if<Rational>(&value_))
        return sgn(*q) == 0;
    return std::get<double>(value_) == 0.0;
}

void Scalar::canonical() {
    if (auto *q = std::get_if<Rational>(&value_))
        q->canonicalize();
}

void Scalar::require_same_mode(const Scalar &o) const {
    if (mode() != o.mode())
        throw ModeError("mixed exact/float scalar arithmetic");
}

Scalar Scalar::operator-() const {
    if (auto *q = std::get_if<Rational>(&value_))
        return Scalar(Rational(-*q));
    return Scalar(-std::get<double>(value_));
}

Scalar &Scalar::operator+=(const Scalar &o) {
    require_same_mode(o);
    if (auto *q = std::get_if<Rational>(&value_))
        *q += std::get<Rational>(o.value_);
    else
        std::get<double>(value_) += std::get<double>(o.value_);
    return *this;
}

Scalar &Scalar::operator-=(const Scalar &o) {
    require_same_mode(o);
    if (auto *q = std::get_if<Rational>(&value_))
        *q -= std::get<Rational>(o.value_);
    else
        std::get<double>(value_) -= std::get<double>(o.value_);
    return *this;
}

Scalar &Scalar::operator*=(const Scalar &o) {
    require_same_mode(o);
    if (auto *q = std::get_if<Rational>(&value_))
        *q *= std::get<Rational>(o.value_);
    else
        std::get<double>(value_) *= std::get<double>(o.value_);
    return *this;
}

Scalar &Scalar::operator/=(const Scalar &o) {
    require_same_mode(o);
    if (auto *q = std::get_if<Rational>(&value_)) {
        const auto &d = std::get<Rational>(o.value_);
        if (sgn(d) == 0)
            throw std::domain_error("exact division by zero");
        *q /= d;
    } else {
        std::get<double>(value_) /= std::get<double>(o.value_);
    }
    return *this;
}

bool operator==(const Scalar &a, const Scalar &b) {
    if (a.mode() != b.mode())
        return false;
    if (a.is_exact())
        return std::get<Rational>(a.value_) == std::get<Rational>(b.value_);
    return std::get<double>(a.value_) == std::get<double>(b.value_);
}

std::string Scalar::str() const {
    if (auto *q = std::get_if<Rational>(&value_))
        return q->get_str();
    std::ostringstream os;
    os.precision(17);
    os << std::get<double>(value_);
    return os.str();
}

std::ostream &operator<<(std::ostream &os, const Scalar &s) { return os << s.str(); }

Rational parse_rational(const std::string &text) {
    if (text.empty())
        throw std::invalid_argument("empty rational literal");
    auto dot = text.find('.');
    if (dot != std::string::npos) {
        std::string whole = text.substr(0, dot);
        std::string frac = text.substr(dot + 1);
        bool negative = !whole.empty() && whole[0] == '-';
        if (negative)
            whole.erase(0, 1);
        if (frac.empty() || frac.find_first_not_of("0123456789") != std::string::npos ||
            whole.find_first_not_of("0123456789") != std::string::npos)
            throw std::invalid_argument("bad decimal literal '" + text + "'");
        mpz_class num((whole.empty() ? "0" : whole) + frac, 10);
        mpz_class den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
        Rational r(num, den);
        r.canonicalize();
        return negative ? Rational(-r) : r;
    }
    Rational r;
    if (r.set_str(text, 10) != 0)
        throw std::invalid_argument("bad rational literal '" + text + "'");
    if (sgn(r.get_den()) == 0)
        throw std::invalid_argument("zero denominator in '" + text + "'");
    r.canonicalize();
    return r;
}

bool approx_equal(double a, double b, double rel_tol) {
    if (std::isnan(a) || std::isnan(b))
        return false;
    double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
    return std::fabs(a - b) <= rel_tol * scale;
}

bool approx_equal(const Scalar &a, const Scalar &b, double rel_tol) {
    if (a.is_exact() && b.is_exact())
        return a == b;
    return approx_equal(a.to_double(), b.to_double(), rel_tol);
}

} // namespace weilkit

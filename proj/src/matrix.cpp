#include "weilkit/matrix.hpp"

#include <sstream>
#include <utility>

namespace weilkit {

Matrix::Matrix(BasicMatrix<Scalar> m) : BasicMatrix<Scalar>(std::move(m)) { (void)mode(); }

Matrix Matrix::from_rational(const QMatrix &m, ScalarMode mode) {
    Matrix out(m.rows(), m.cols(), Scalar::zero(mode));
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            out(r, c) = Scalar::from_rational(m(r, c), mode);
    return out;
}

ScalarMode Matrix::mode() const {
    if (rows() == 0 || cols() == 0)
        return ScalarMode::ExactRational;
    ScalarMode first = (*this)(0, 0).mode();
    for (std::size_t r = 0; r < rows(); ++r)
        for (const auto &s : row(r))
            if (s.mode() != first)
                throw ModeError("matrix entries have mixed modes");
    return first;
}

QMatrix Matrix::to_rational() const {
    QMatrix out(rows(), cols());
    for (std::size_t r = 0; r < rows(); ++r)
        for (std::size_t c = 0; c < cols(); ++c)
            out(r, c) = (*this)(r, c).rational();
    return out;
}

QMatrix identity_matrix(std::size_t n) {
    QMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1;
    return m;
}

QMatrix operator*(const QMatrix &a, const QMatrix &b) {
    if (a.cols() != b.rows())
        throw std::invalid_argument("matrix product shape mismatch");
    QMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Rational &aik = a(i, k);
            if (sgn(aik) == 0)
                continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                if (sgn(b(k, j)) != 0)
                    out(i, j) += aik * b(k, j);
        }
    return out;
}

QVector operator*(const QMatrix &a, std::span<const Rational> v) {
    if (a.cols() != v.size())
        throw std::invalid_argument("matrix-vector shape mismatch");
    QVector out(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k)
            if (sgn(a(i, k)) != 0 && sgn(v[k]) != 0)
                out[i] += a(i, k) * v[k];
    return out;
}

QMatrix transpose(const QMatrix &m) {
    QMatrix t(m.cols(), m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            t(c, r) = m(r, c);
    return t;
}

QMatrix vstack(const QMatrix &top, const QMatrix &bottom) {
    if (top.rows() == 0)
        return bottom;
    if (bottom.rows() == 0)
        return top;
    if (top.cols() != bottom.cols())
        throw std::invalid_argument("vstack column mismatch");
    QMatrix out(top.rows() + bottom.rows(), top.cols());
    for (std::size_t r = 0; r < top.rows(); ++r)
        for (std::size_t c = 0; c < top.cols(); ++c)
            out(r, c) = top(r, c);
    for (std::size_t r = 0; r < bottom.rows(); ++r)
        for (std::size_t c = 0; c < top.cols(); ++c)
            out(top.rows() + r, c) = bottom(r, c);
    return out;
}

QMatrix from_columns(std::size_t rows, const std::vector<QVector> &columns) {
    QMatrix m(rows, columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (columns[c].size() != rows)
            throw std::invalid_argument("column length mismatch");
        m.set_column(c, columns[c]);
    }
    return m;
}

bool is_zero(std::span<const Rational> v) {
    for (const auto &x : v)
        if (sgn(x) != 0)
            return false;
    return true;
}

std::vector<std::size_t> rref(QMatrix &m) {
    std::vector<std::size_t> pivots;
    std::size_t lead_row = 0;
    for (std::size_t c = 0; c < m.cols() && lead_row < m.rows(); ++c) {
        std::size_t p = lead_row;
        while (p < m.rows() && sgn(m(p, c)) == 0)
            ++p;
        if (p == m.rows())
            continue;
        if (p != lead_row)
            for (std::size_t j = 0; j < m.cols(); ++j)
                std::swap(m(p, j), m(lead_row, j));
        Rational inv = 1 / m(lead_row, c);
        for (std::size_t j = c; j < m.cols(); ++j)
            m(lead_row, j) *= inv;
        for (std::size_t r = 0; r < m.rows(); ++r) {
            if (r == lead_row || sgn(m(r, c)) == 0)
                continue;
            Rational f = m(r, c);
            for (std::size_t j = c; j < m.cols(); ++j)
                if (sgn(m(lead_row, j)) != 0)
                    m(r, j) -= f * m(lead_row, j);
        }
        pivots.push_back(c);
        ++lead_row;
    }
    return pivots;
}

std::size_t rank(QMatrix m) { return rref(m).size(); }

std::vector<QVector> kernel_basis(const QMatrix &m) {
    QMatrix r = m;
    auto pivots = rref(r);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto p : pivots)
        is_pivot[p] = true;
    std::vector<QVector> basis;
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (is_pivot[free])
            continue;
        QVector v(m.cols());
        v[free] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i)
            v[pivots[i]] = -r(i, free);
        basis.push_back(std::move(v));
    }
    return basis;
}

std::vector<Vector> kernel_basis(const Matrix &m) {
    if (m.mode() != ScalarMode::ExactRational)
        throw ModeError("kernel_basis requires exact rational input");
    std::vector<Vector> out;
    for (auto &v : kernel_basis(m.to_rational()))
        out.emplace_back(v.begin(), v.end());
    return out;
}

namespace {

// RREF of [m | rhs]; returns pivots of the coefficient block, or nullopt when
// the augmented column carries a pivot (inconsistent system).
std::optional<std::pair<QMatrix, std::vector<std::size_t>>>
reduce_augmented(const QMatrix &m, std::span<const Rational> rhs) {
    if (rhs.size() != m.rows())
        throw std::invalid_argument("right-hand side length mismatch");
    QMatrix aug(m.rows(), m.cols() + 1);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c)
            aug(r, c) = m(r, c);
        aug(r, m.cols()) = rhs[r];
    }
    auto pivots = rref(aug);
    if (!pivots.empty() && pivots.back() == m.cols())
        return std::nullopt;
    return std::make_pair(std::move(aug), std::move(pivots));
}

} // namespace

SolveResult solve_unique(const QMatrix &m, std::span<const Rational> rhs) {
    auto reduced = reduce_augmented(m, rhs);
    if (!reduced)
        return {SolveStatus::NoSolution, {}};
    auto &[aug, pivots] = *reduced;
    if (pivots.size() < m.cols())
        return {SolveStatus::NotUnique, {}};
    QVector x(m.cols());
    for (std::size_t i = 0; i < pivots.size(); ++i)
        x[pivots[i]] = aug(i, m.cols());
    return {SolveStatus::Unique, std::move(x)};
}

ScalarSolveResult solve_unique(const Matrix &m, const Vector &rhs) {
    if (m.mode() != ScalarMode::ExactRational)
        throw ModeError("solve_unique requires exact rational input");
    QVector q;
    q.reserve(rhs.size());
    for (const auto &s : rhs)
        q.push_back(s.rational());
    auto r = solve_unique(m.to_rational(), q);
    return {r.status, Vector(r.solution.begin(), r.solution.end())};
}

std::optional<QVector> solve_particular(const QMatrix &m, std::span<const Rational> rhs) {
    auto reduced = reduce_augmented(m, rhs);
    if (!reduced)
        return std::nullopt;
    auto &[aug, pivots] = *reduced;
    QVector x(m.cols());
    for (std::size_t i = 0; i < pivots.size(); ++i)
        x[pivots[i]] = aug(i, m.cols());
    return x;
}

std::optional<QMatrix> inverse(const QMatrix &m) {
    if (m.rows() != m.cols())
        return std::nullopt;
    std::size_t n = m.rows();
    QMatrix aug(n, 2 * n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c)
            aug(r, c) = m(r, c);
        aug(r, n + r) = 1;
    }
    auto pivots = rref(aug);
    if (pivots.size() < n || (n > 0 && pivots[n - 1] != n - 1))
        return std::nullopt;
    QMatrix inv(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            inv(r, c) = aug(r, n + c);
    return inv;
}

const char *to_string(SolveStatus s) {
    switch (s) {
    case SolveStatus::Unique:
        return "Unique";
    case SolveStatus::NoSolution:
        return "NoSolution";
    case SolveStatus::NotUnique:
        return "NotUnique";
    }
    return "?";
}

Subspace Subspace::span(std::size_t ambient, const std::vector<QVector> &vectors) {
    Subspace s(ambient);
    if (vectors.empty())
        return s;
    QMatrix m(vectors.size(), ambient);
    for (std::size_t r = 0; r < vectors.size(); ++r) {
        if (vectors[r].size() != ambient)
            throw std::invalid_argument("span vector length mismatch");
        for (std::size_t c = 0; c < ambient; ++c)
            m(r, c) = vectors[r][c];
    }
    s.pivots_ = rref(m);
    for (std::size_t r = 0; r < s.pivots_.size(); ++r)
        s.basis_.emplace_back(m.row(r).begin(), m.row(r).end());
    return s;
}

Subspace Subspace::kernel(const QMatrix &constraints) {
    return span(constraints.cols(), kernel_basis(constraints));
}

std::optional<QVector> Subspace::coordinates(std::span<const Rational> v) const {
    if (v.size() != ambient_)
        throw std::invalid_argument("subspace membership length mismatch");
    // RREF rows: the coordinate on row i is the entry of v at pivot i.
    QVector coords(basis_.size());
    QVector residual(v.begin(), v.end());
    for (std::size_t i = 0; i < basis_.size(); ++i) {
        coords[i] = residual[pivots_[i]];
        if (sgn(coords[i]) == 0)
            continue;
        for (std::size_t c = 0; c < ambient_; ++c)
            if (sgn(basis_[i][c]) != 0)
                residual[c] -= coords[i] * basis_[i][c];
    }
    if (!is_zero(residual))
        return std::nullopt;
    return coords;
}

bool Subspace::contains(std::span<const Rational> v) const { return coordinates(v).has_value(); }

bool Subspace::contains(const Subspace &other) const {
    if (other.ambient_ != ambient_)
        return false;
    for (const auto &b : other.basis_)
        if (!contains(b))
            return false;
    return true;
}

bool operator==(const Subspace &a, const Subspace &b) {
    // RREF bases are canonical.
    return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
}

Coordinatizer::Coordinatizer(QMatrix basis) : basis_(std::move(basis)) {
    QMatrix t = transpose(basis_);
    pivot_rows_ = rref(t);
    if (pivot_rows_.size() != basis_.cols())
        throw std::invalid_argument("coordinatizer basis is linearly dependent");
    QMatrix square(basis_.cols(), basis_.cols());
    for (std::size_t i = 0; i < pivot_rows_.size(); ++i)
        for (std::size_t c = 0; c < basis_.cols(); ++c)
            square(i, c) = basis_(pivot_rows_[i], c);
    auto inv = inverse(square);
    if (!inv)
        throw std::invalid_argument("coordinatizer pivot block is singular");
    pivot_inverse_ = std::move(*inv);
}

std::optional<QVector> Coordinatizer::coordinates(std::span<const Rational> v) const {
    if (v.size() != basis_.rows())
        throw std::invalid_argument("coordinatizer input length mismatch");
    QVector picked(pivot_rows_.size());
    for (std::size_t i = 0; i < pivot_rows_.size(); ++i)
        picked[i] = v[pivot_rows_[i]];
    QVector coords = pivot_inverse_ * std::span<const Rational>(picked);
    QVector back = basis_ * std::span<const Rational>(coords);
    for (std::size_t r = 0; r < back.size(); ++r)
        if (back[r] != v[r])
            return std::nullopt;
    return coords;
}

std::string format_matrix(const QMatrix &m) {
    std::ostringstream os;
    os << "[";
    for (std::size_t r = 0; r < m.rows(); ++r) {
        os << (r ? "; " : "");
        for (std::size_t c = 0; c < m.cols(); ++c)
            os << (c ? " " : "") << m(r, c).get_str();
    }
    os << "]";
    return os.str();
}

} // namespace weilkit

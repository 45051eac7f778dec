#pragma once

#include "weilkit/scalar.hpp"

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace weilkit {

/// Dense row-major matrix.
template <typename T> class BasicMatrix {
public:
    BasicMatrix() = default;
    BasicMatrix(std::size_t rows, std::size_t cols, const T &fill = T())
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    BasicMatrix(std::initializer_list<std::initializer_list<T>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (const auto &row : init) {
            if (row.size() != cols_)
                throw std::invalid_argument("ragged matrix literal");
            data_.insert(data_.end(), row.begin(), row.end());
        }
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    T &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const T &operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    std::vector<T> column(std::size_t c) const {
        std::vector<T> out(rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            out[r] = (*this)(r, c);
        return out;
    }
    void set_column(std::size_t c, std::span<const T> v) {
        for (std::size_t r = 0; r < rows_; ++r)
            (*this)(r, c) = v[r];
    }

    friend bool operator==(const BasicMatrix &a, const BasicMatrix &b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using QVector = std::vector<Rational>;
using QMatrix = BasicMatrix<Rational>;
using Vector = std::vector<Scalar>;

/// Scalar-valued matrix whose entries share one mode.
class Matrix : public BasicMatrix<Scalar> {
public:
    using BasicMatrix<Scalar>::BasicMatrix;
    Matrix(BasicMatrix<Scalar> m);
    static Matrix from_rational(const QMatrix &m, ScalarMode mode = ScalarMode::ExactRational);

    /// Mode shared by all entries; empty matrices report ExactRational.
    /// Throws ModeError when entries disagree.
    ScalarMode mode() const;
    /// Throws ModeError unless every entry is exact.
    QMatrix to_rational() const;
};

QMatrix identity_matrix(std::size_t n);
QMatrix operator*(const QMatrix &a, const QMatrix &b);
QVector operator*(const QMatrix &a, std::span<const Rational> v);
QMatrix transpose(const QMatrix &m);
/// Rows of `top` followed by rows of `bottom`.
QMatrix vstack(const QMatrix &top, const QMatrix &bottom);
/// Matrix whose columns are the given vectors (all of length `rows`).
QMatrix from_columns(std::size_t rows, const std::vector<QVector> &columns);
bool is_zero(std::span<const Rational> v);

/// Reduced row echelon form (in place); returns pivot column indices.
std::vector<std::size_t> rref(QMatrix &m);
std::size_t rank(QMatrix m);

/// Basis of the nullspace, one vector per free column, in column order.
std::vector<QVector> kernel_basis(const QMatrix &m);
/// Rejects Float64 input with ModeError.
std::vector<Vector> kernel_basis(const Matrix &m);

enum class SolveStatus { Unique, NoSolution, NotUnique };

struct SolveResult {
    SolveStatus status;
    QVector solution; // populated only for Unique

    explicit operator bool() const { return status == SolveStatus::Unique; }
};

SolveResult solve_unique(const QMatrix &m, std::span<const Rational> rhs);

struct ScalarSolveResult {
    SolveStatus status;
    Vector solution;
    explicit operator bool() const { return status == SolveStatus::Unique; }
};
ScalarSolveResult solve_unique(const Matrix &m, const Vector &rhs);

/// Some solution of m x = rhs (free variables zero), if consistent.
std::optional<QVector> solve_particular(const QMatrix &m, std::span<const Rational> rhs);

std::optional<QMatrix> inverse(const QMatrix &m);

const char *to_string(SolveStatus s);

/// A linear subspace of Q^n stored by an RREF row basis. Supports
/// membership and coordinates with respect to that basis.
class Subspace {
public:
    Subspace() = default;
    explicit Subspace(std::size_t ambient) : ambient_(ambient) {}
    static Subspace span(std::size_t ambient, const std::vector<QVector> &vectors);
    static Subspace kernel(const QMatrix &constraints);

    std::size_t ambient() const { return ambient_; }
    std::size_t dimension() const { return basis_.size(); }
    const std::vector<QVector> &basis() const { return basis_; }

    bool contains(std::span<const Rational> v) const;
    /// Coordinates of v in basis(); nullopt if v is not a member.
    std::optional<QVector> coordinates(std::span<const Rational> v) const;
    bool contains(const Subspace &other) const;

    friend bool operator==(const Subspace &a, const Subspace &b);

private:
    std::size_t ambient_ = 0;
    std::vector<QVector> basis_;
    std::vector<std::size_t> pivots_;
};

/// Coordinates with respect to a fixed list of linearly independent
/// vectors (the columns of `basis`). Throws std::invalid_argument when the
/// columns are dependent.
class Coordinatizer {
public:
    explicit Coordinatizer(QMatrix basis);
    std::size_t ambient() const { return basis_.rows(); }
    std::size_t dimension() const { return basis_.cols(); }
    const QMatrix &basis() const { return basis_; }
    /// nullopt when v is outside the column span.
    std::optional<QVector> coordinates(std::span<const Rational> v) const;

private:
    QMatrix basis_;
    std::vector<std::size_t> pivot_rows_;
    QMatrix pivot_inverse_;
};

std::string format_matrix(const QMatrix &m);

} // namespace weilkit

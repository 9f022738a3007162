#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace shufreg {

using Rational = mpq_class;
using BigInt = mpz_class;
using QVector = std::vector<Rational>;

/// Dense row-major matrix of exact rationals.
class QMatrix {
public:
    QMatrix() = default;
    QMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    QVector row(std::size_t i) const;
    QVector col(std::size_t j) const;
    QMatrix transpose() const;

    static QMatrix identity(std::size_t n);

    friend bool operator==(const QMatrix&, const QMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> data_;
};

QMatrix operator*(const QMatrix& a, const QMatrix& b);
QVector operator*(const QMatrix& a, const QVector& x);
Rational dot(const QVector& a, const QVector& b);

/// Exact rank by fraction-carrying Gaussian elimination.
std::size_t rank(QMatrix m);

/// Solves the square system a x = b exactly. Returns nullopt when a is singular.
std::optional<QVector> solve(QMatrix a, QVector b);

/// Exact inverse of a square matrix; nullopt when singular.
std::optional<QMatrix> inverse(const QMatrix& a);

/// Exact determinant of a square integer matrix (Bareiss elimination).
BigInt determinant(std::vector<std::vector<BigInt>> m);

/// "num/den" with den omitted when it equals 1.
std::string to_string(const Rational& q);
/// Parses "num/den" or "num"; throws ParseError on malformed input.
Rational rational_from_string(const std::string& s);

/// Exact binary value of a finite double.
Rational exact(double x);
QVector exact(const std::vector<double>& xs);

/// Largest rational of the form m * 2^e (m a 53-bit integer) not exceeding
/// 2^log2_value. Used to turn a log-domain bound into an exact lower bound.
Rational pow2_lower_bound(double log2_value);

/// 2^e for an integer exponent (negative allowed).
Rational pow2(long e);

}  // namespace shufreg

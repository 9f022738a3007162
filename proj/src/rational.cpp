#include "shufreg/rational.hpp"

#include <cmath>
#include <utility>

#include "shufreg/errors.hpp"

namespace shufreg {

QVector QMatrix::row(std::size_t i) const {
    return QVector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                   data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

QVector QMatrix::col(std::size_t j) const {
    QVector out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
    return out;
}

QMatrix QMatrix::transpose() const {
    QMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

QMatrix QMatrix::identity(std::size_t n) {
    QMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

QMatrix operator*(const QMatrix& a, const QMatrix& b) {
    if (a.cols() != b.rows()) throw ArgumentError("QMatrix product: inner dimensions differ");
    QMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t l = 0; l < a.cols(); ++l) {
            if (sgn(a(i, l)) == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += a(i, l) * b(l, j);
        }
    return out;
}

QVector operator*(const QMatrix& a, const QVector& x) {
    if (a.cols() != x.size()) throw ArgumentError("QMatrix-vector product: dimension mismatch");
    QVector out(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out[i] += a(i, j) * x[j];
    return out;
}

Rational dot(const QVector& a, const QVector& b) {
    if (a.size() != b.size()) throw ArgumentError("dot: length mismatch");
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

std::size_t rank(QMatrix m) {
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t pivot = r;
        while (pivot < m.rows() && sgn(m(pivot, c)) == 0) ++pivot;
        if (pivot == m.rows()) continue;
        if (pivot != r)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(r, j), m(pivot, j));
        for (std::size_t i = r + 1; i < m.rows(); ++i) {
            if (sgn(m(i, c)) == 0) continue;
            const Rational f = m(i, c) / m(r, c);
            for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
        }
        ++r;
    }
    return r;
}

std::optional<QVector> solve(QMatrix a, QVector b) {
    const std::size_t n = a.rows();
    if (a.cols() != n || b.size() != n) throw ArgumentError("solve: expected a square system");
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t pivot = c;
        while (pivot < n && sgn(a(pivot, c)) == 0) ++pivot;
        if (pivot == n) return std::nullopt;
        if (pivot != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(c, j), a(pivot, j));
            std::swap(b[c], b[pivot]);
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || sgn(a(i, c)) == 0) continue;
            const Rational f = a(i, c) / a(c, c);
            for (std::size_t j = c; j < n; ++j) a(i, j) -= f * a(c, j);
            b[i] -= f * b[c];
        }
    }
    for (std::size_t i = 0; i < n; ++i) b[i] /= a(i, i);
    return b;
}

std::optional<QMatrix> inverse(const QMatrix& a) {
    const std::size_t n = a.rows();
    if (a.cols() != n) throw ArgumentError("inverse: expected a square matrix");
    QMatrix m = a;
    QMatrix inv = QMatrix::identity(n);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t pivot = c;
        while (pivot < n && sgn(m(pivot, c)) == 0) ++pivot;
        if (pivot == n) return std::nullopt;
        if (pivot != c)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(m(c, j), m(pivot, j));
                std::swap(inv(c, j), inv(pivot, j));
            }
        const Rational p = m(c, c);
        for (std::size_t j = 0; j < n; ++j) {
            m(c, j) /= p;
            inv(c, j) /= p;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || sgn(m(i, c)) == 0) continue;
            const Rational f = m(i, c);
            for (std::size_t j = 0; j < n; ++j) {
                m(i, j) -= f * m(c, j);
                inv(i, j) -= f * inv(c, j);
            }
        }
    }
    return inv;
}

BigInt determinant(std::vector<std::vector<BigInt>> m) {
    const std::size_t n = m.size();
    if (n == 0) return 1;
    for (const auto& row : m)
        if (row.size() != n) throw ArgumentError("determinant: expected a square matrix");
    int sign = 1;
    BigInt prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t swap_row = k + 1;
            while (swap_row < n && m[swap_row][k] == 0) ++swap_row;
            if (swap_row == n) return 0;
            std::swap(m[k], m[swap_row]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                BigInt v = m[i][j] * m[k][k] - m[i][k] * m[k][j];
                mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
                m[i][j] = v;
            }
        }
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

std::string to_string(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational rational_from_string(const std::string& s) {
    Rational q;
    if (s.empty() || q.set_str(s, 10) != 0 || q.get_den() == 0)
        throw ParseError("malformed rational '" + s + "'");
    q.canonicalize();
    return q;
}

Rational exact(double x) {
    if (!std::isfinite(x)) throw ArgumentError("exact: non-finite value");
    return Rational(x);
}

QVector exact(const std::vector<double>& xs) {
    QVector out;
    out.reserve(xs.size());
    for (double x : xs) out.push_back(exact(x));
    return out;
}

Rational pow2(long e) {
    Rational q = 1;
    if (e >= 0)
        mpz_mul_2exp(q.get_num_mpz_t(), q.get_num_mpz_t(), static_cast<mp_bitcnt_t>(e));
    else
        mpz_mul_2exp(q.get_den_mpz_t(), q.get_den_mpz_t(), static_cast<mp_bitcnt_t>(-e));
    return q;
}

Rational pow2_lower_bound(double log2_value) {
    if (!std::isfinite(log2_value)) throw ArgumentError("pow2_lower_bound: non-finite exponent");
    // Absorb the rounding error of the log-domain evaluation before flooring.
    const double safe = log2_value - 1e-9 * std::max(1.0, std::abs(log2_value));
    const double e = std::floor(safe);
    const double mantissa = std::floor(std::exp2(safe - e) * 0x1.0p52);
    return Rational(BigInt(static_cast<unsigned long>(mantissa))) * pow2(static_cast<long>(e) - 52);
}

}  // namespace shufreg

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace shufreg {

/// An r x n matrix with at most one nonzero per row.
class SamplingMatrix {
public:
    struct Entry {
        std::size_t col = 0;
        double weight = 0.0;
    };

    SamplingMatrix(std::size_t r, std::size_t n) : n_(n), rows_(r) {}

    std::size_t rows() const noexcept { return rows_.size(); }
    std::size_t cols() const noexcept { return n_; }

    const std::optional<Entry>& row(std::size_t i) const { return rows_.at(i); }
    /// Throws ArgumentError on a column out of range or a non-positive weight.
    void set(std::size_t row, std::size_t col, double weight);

    /// Sorted distinct columns that carry a nonzero entry.
    std::vector<std::size_t> nonzero_columns() const;

    Eigen::MatrixXd dense() const;
    /// S * M for an n-row matrix M.
    Eigen::MatrixXd apply(const Eigen::MatrixXd& m) const;
    Eigen::VectorXd apply(const Eigen::VectorXd& v) const;

private:
    std::size_t n_;
    std::vector<std::optional<Entry>> rows_;
};

/// The lower barrier quantity
///   x^T (A - l'I)^-2 x / (phi(l', A) - phi(l, A)) - x^T (A - l'I)^-1 x,
/// with l' = ell + delta_l and phi(l, A) = sum_i 1 / (lambda_i(A) - l).
/// Evaluated through the eigendecomposition of the symmetric matrix A.
double lower_barrier_L(const Eigen::VectorXd& x, double delta_l, const Eigen::MatrixXd& A, double ell);

/// Same, with a precomputed eigendecomposition of A.
double lower_barrier_L(const Eigen::VectorXd& x, double delta_l, const Eigen::VectorXd& eigenvalues,
                       const Eigen::MatrixXd& eigenvectors, double ell);

/// The upper barrier quantity for a diagonal B (given by its diagonal)
///   x^T (B - u'I)^-2 x / (phi'(u, B) - phi'(u', B)) - x^T (B - u'I)^-1 x,
/// with u' = u + delta and phi'(u, B) = sum_i 1 / (u - B_ii).
double upper_barrier_U(const Eigen::VectorXd& x, double delta, const Eigen::VectorXd& b_diag, double u);

/// The upper barrier quantity evaluated at the coordinate vector e_i, which
/// reduces to scalar arithmetic on b_diag[i].
double upper_barrier_U_coordinate(std::size_t i, double delta, const Eigen::VectorXd& b_diag, double u);

/// Per-step record of the sampler, exposed for tests.
struct RowSampleStep {
    std::size_t index = 0;
    double t = 0.0;
    double upper = 0.0;   // U(e_i, ...)
    double lower = 0.0;   // L(x_i, ...)
    double ell = 0.0;     // lower barrier before the step
    double u = 0.0;       // upper barrier before the step
    double lambda_min_after = 0.0;
    double b_max_after = 0.0;
};

struct RowSampleTrace {
    std::vector<RowSampleStep> steps;
    double delta = 0.0;
    double delta_l = 1.0;
};

/// Deterministic dual-barrier row sampling. X must have orthonormal columns
/// (checked to 1e-8). Returns an r x n sampling matrix; r defaults to 4k.
/// Throws InternalInvariantError when no admissible index exists or a
/// barrier would be crossed.
SamplingMatrix row_sample(const Eigen::MatrixXd& X, std::optional<std::size_t> r = std::nullopt,
                          RowSampleTrace* trace = nullptr);

/// A minimizer of ||S (X w - b)||^2, the minimum-norm one when S X is rank deficient.
Eigen::VectorXd solve_weighted_ls(const SamplingMatrix& S, const Eigen::MatrixXd& X, const Eigen::VectorXd& b);

/// 1 + 4 (1 + sqrt(n / (4k)))^2
double row_sampling_factor(std::size_t n, std::size_t k);

}  // namespace shufreg

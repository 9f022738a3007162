#include "shufreg/rowsample.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "shufreg/errors.hpp"

namespace shufreg {

namespace {

constexpr double kDenominatorGuard = 1e-14;

}  // namespace

void SamplingMatrix::set(std::size_t row, std::size_t col, double weight) {
    if (row >= rows_.size()) throw ArgumentError("SamplingMatrix: row out of range");
    if (col >= n_) throw ArgumentError("SamplingMatrix: column out of range");
    if (!(weight > 0.0) || !std::isfinite(weight)) throw ArgumentError("SamplingMatrix: weight must be positive");
    rows_[row] = Entry{col, weight};
}

std::vector<std::size_t> SamplingMatrix::nonzero_columns() const {
    std::vector<std::size_t> cols;
    for (const auto& e : rows_)
        if (e) cols.push_back(e->col);
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    return cols;
}

Eigen::MatrixXd SamplingMatrix::dense() const {
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows()), static_cast<Eigen::Index>(n_));
    for (std::size_t i = 0; i < rows(); ++i)
        if (rows_[i]) S(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(rows_[i]->col)) = rows_[i]->weight;
    return S;
}

Eigen::MatrixXd SamplingMatrix::apply(const Eigen::MatrixXd& m) const {
    if (static_cast<std::size_t>(m.rows()) != n_) throw ArgumentError("SamplingMatrix::apply: row count mismatch");
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows()), m.cols());
    for (std::size_t i = 0; i < rows(); ++i)
        if (rows_[i])
            out.row(static_cast<Eigen::Index>(i)) = rows_[i]->weight * m.row(static_cast<Eigen::Index>(rows_[i]->col));
    return out;
}

Eigen::VectorXd SamplingMatrix::apply(const Eigen::VectorXd& v) const {
    return apply(Eigen::MatrixXd(v)).col(0);
}

double lower_barrier_L(const Eigen::VectorXd& x, double delta_l, const Eigen::VectorXd& eigenvalues,
                       const Eigen::MatrixXd& eigenvectors, double ell) {
    const double shifted = ell + delta_l;
    const Eigen::VectorXd z = eigenvectors.transpose() * x;
    double quad2 = 0.0, quad1 = 0.0, phi_gap = 0.0;
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
        const double gap_shifted = eigenvalues(i) - shifted;
        const double gap = eigenvalues(i) - ell;
        if (gap_shifted == 0.0 || gap == 0.0) throw NumericError("lower barrier: eigenvalue coincides with the barrier");
        quad2 += z(i) * z(i) / (gap_shifted * gap_shifted);
        quad1 += z(i) * z(i) / gap_shifted;
        phi_gap += 1.0 / gap_shifted - 1.0 / gap;
    }
    if (std::abs(phi_gap) < kDenominatorGuard) throw NumericError("lower barrier: vanishing potential difference");
    return quad2 / phi_gap - quad1;
}

double lower_barrier_L(const Eigen::VectorXd& x, double delta_l, const Eigen::MatrixXd& A, double ell) {
    if (A.rows() != A.cols() || A.rows() != x.size()) throw ArgumentError("lower barrier: shape mismatch");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(A);
    if (eig.info() != Eigen::Success) throw NumericError("lower barrier: eigendecomposition failed");
    return lower_barrier_L(x, delta_l, eig.eigenvalues(), eig.eigenvectors(), ell);
}

double upper_barrier_U(const Eigen::VectorXd& x, double delta, const Eigen::VectorXd& b_diag, double u) {
    if (x.size() != b_diag.size()) throw ArgumentError("upper barrier: shape mismatch");
    const double shifted = u + delta;
    double quad2 = 0.0, quad1 = 0.0, phi_gap = 0.0;
    for (Eigen::Index i = 0; i < b_diag.size(); ++i) {
        const double gap_shifted = b_diag(i) - shifted;
        const double gap = u - b_diag(i);
        if (gap_shifted == 0.0 || gap == 0.0) throw NumericError("upper barrier: diagonal entry coincides with the barrier");
        quad2 += x(i) * x(i) / (gap_shifted * gap_shifted);
        quad1 += x(i) * x(i) / gap_shifted;
        phi_gap += 1.0 / gap + 1.0 / gap_shifted;  // phi'(u) - phi'(u')
    }
    if (std::abs(phi_gap) < kDenominatorGuard) throw NumericError("upper barrier: vanishing potential difference");
    return quad2 / phi_gap - quad1;
}

namespace {

double upper_phi_gap(double delta, const Eigen::VectorXd& b_diag, double u) {
    const double shifted = u + delta;
    double phi_gap = 0.0;
    for (Eigen::Index i = 0; i < b_diag.size(); ++i) {
        const double gap_shifted = b_diag(i) - shifted;
        const double gap = u - b_diag(i);
        if (gap_shifted == 0.0 || gap == 0.0) throw NumericError("upper barrier: diagonal entry coincides with the barrier");
        phi_gap += 1.0 / gap + 1.0 / gap_shifted;
    }
    if (std::abs(phi_gap) < kDenominatorGuard) throw NumericError("upper barrier: vanishing potential difference");
    return phi_gap;
}

double upper_coordinate_from_gap(std::size_t i, double delta, const Eigen::VectorXd& b_diag, double u,
                                 double phi_gap) {
    const double gap_shifted = b_diag(static_cast<Eigen::Index>(i)) - (u + delta);
    return 1.0 / (gap_shifted * gap_shifted) / phi_gap - 1.0 / gap_shifted;
}

}  // namespace

double upper_barrier_U_coordinate(std::size_t i, double delta, const Eigen::VectorXd& b_diag, double u) {
    if (i >= static_cast<std::size_t>(b_diag.size())) throw ArgumentError("upper barrier: coordinate out of range");
    return upper_coordinate_from_gap(i, delta, b_diag, u, upper_phi_gap(delta, b_diag, u));
}

double row_sampling_factor(std::size_t n, std::size_t k) {
    const double s = 1.0 + std::sqrt(static_cast<double>(n) / (4.0 * static_cast<double>(k)));
    return 1.0 + 4.0 * s * s;
}

SamplingMatrix row_sample(const Eigen::MatrixXd& X, std::optional<std::size_t> r_opt, RowSampleTrace* trace) {
    const std::size_t n = static_cast<std::size_t>(X.rows());
    const std::size_t k = static_cast<std::size_t>(X.cols());
    if (k < 1 || n < k) throw ArgumentError("row_sample requires n >= k >= 1");
    const Eigen::MatrixXd gram = X.transpose() * X;
    const double ortho_err = (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
    if (ortho_err > 1e-8) throw ArgumentError("row_sample: columns are not orthonormal (error " + std::to_string(ortho_err) + ")");
    const std::size_t r = r_opt.value_or(4 * k);
    if (r <= k) throw ArgumentError("row_sample requires r > k");

    const double rd = static_cast<double>(r), kd = static_cast<double>(k), nd = static_cast<double>(n);
    const double delta = (1.0 + nd / rd) / (1.0 - std::sqrt(kd / rd));
    const double delta_l = 1.0;
    const double weight_scale = std::sqrt((1.0 - std::sqrt(kd / rd)) / rd);

    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
    Eigen::VectorXd b_diag = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    SamplingMatrix S(r, n);
    if (trace) {
        trace->steps.clear();
        trace->delta = delta;
        trace->delta_l = delta_l;
    }

    for (std::size_t tau = 0; tau < r; ++tau) {
        const double ell = static_cast<double>(tau) - std::sqrt(rd * kd);
        const double u = delta * (static_cast<double>(tau) + std::sqrt(nd * rd));

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(A);
        if (eig.info() != Eigen::Success) throw NumericError("row_sample: eigendecomposition failed");
        const double phi_gap = upper_phi_gap(delta, b_diag, u);

        std::optional<std::size_t> chosen;
        double upper = 0.0, lower = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double ui = upper_coordinate_from_gap(i, delta, b_diag, u, phi_gap);
            const double li = lower_barrier_L(X.row(static_cast<Eigen::Index>(i)).transpose(), delta_l, eig.eigenvalues(),
                                              eig.eigenvectors(), ell);
            if (std::isfinite(ui) && std::isfinite(li) && ui <= li) {
                chosen = i;
                upper = ui;
                lower = li;
                break;
            }
        }
        if (!chosen)
            throw InternalInvariantError("row_sample: no admissible index at step " + std::to_string(tau));

        const double t = 2.0 / (upper + lower);
        const Eigen::VectorXd xi = X.row(static_cast<Eigen::Index>(*chosen)).transpose();
        A += t * xi * xi.transpose();
        b_diag(static_cast<Eigen::Index>(*chosen)) += t;
        S.set(tau, *chosen, weight_scale / std::sqrt(t));

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> after(A, Eigen::EigenvaluesOnly);
        const double lambda_min = after.eigenvalues().minCoeff();
        const double b_max = b_diag.maxCoeff();
        if (!(lambda_min > ell + delta_l) || !(b_max < u + delta))
            throw InternalInvariantError("row_sample: barrier crossed at step " + std::to_string(tau));
        if (trace) trace->steps.push_back({*chosen, t, upper, lower, ell, u, lambda_min, b_max});
    }
    return S;
}

Eigen::VectorXd solve_weighted_ls(const SamplingMatrix& S, const Eigen::MatrixXd& X, const Eigen::VectorXd& b) {
    if (static_cast<std::size_t>(X.rows()) != S.cols() || b.size() != X.rows())
        throw ArgumentError("solve_weighted_ls: shape mismatch");
    const Eigen::MatrixXd SX = S.apply(X);
    const Eigen::VectorXd Sb = S.apply(b);
    if (SX.isZero(0.0)) return Eigen::VectorXd::Zero(X.cols());
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(SX);
    return cod.solve(Sb);
}

}  // namespace shufreg

#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "shufreg/model.hpp"
#include "shufreg/rng.hpp"

namespace testing {

inline Eigen::MatrixXd gaussian_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    shufreg::Rng rng(seed);
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = rng.normal();
    return m;
}

inline Eigen::VectorXd gaussian_vector(std::size_t n, std::uint64_t seed) {
    return gaussian_matrix(n, 1, seed).col(0);
}

/// Minimum over all permutations of sum_i (b_i - a_{p[i]})^2, by plain enumeration.
inline double min_matching_cost(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<std::size_t> p(a.size());
    std::iota(p.begin(), p.end(), std::size_t{0});
    double best = std::numeric_limits<double>::infinity();
    do {
        double s = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) s += (b[i] - a[p[i]]) * (b[i] - a[p[i]]);
        best = std::min(best, s);
    } while (std::next_permutation(p.begin(), p.end()));
    return best;
}

/// min_w ||X w - Pi^T y||^2 over all permutations, each solved by Householder QR.
inline double exhaustive_opt(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    std::vector<std::size_t> p(static_cast<std::size_t>(y.size()));
    std::iota(p.begin(), p.end(), std::size_t{0});
    const auto qr = X.colPivHouseholderQr();
    double best = std::numeric_limits<double>::infinity();
    do {
        Eigen::VectorXd target(y.size());
        for (std::size_t i = 0; i < p.size(); ++i) target(static_cast<Eigen::Index>(p[i])) = y(static_cast<Eigen::Index>(i));
        const Eigen::VectorXd w = qr.solve(target);
        best = std::min(best, (X * w - target).squaredNorm());
    } while (std::next_permutation(p.begin(), p.end()));
    return best;
}

}  // namespace testing

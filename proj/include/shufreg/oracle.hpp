#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "shufreg/approx.hpp"
#include "shufreg/model.hpp"
#include "shufreg/rational.hpp"

namespace shufreg {

struct OlsResult {
    Eigen::VectorXd w;
    double residual_sq = 0.0;
};

/// Ordinary least squares with a known pairing: w = pinv(X) Pi^T y, the
/// minimum-norm solution when X is rank deficient.
OlsResult ols_given_perm(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Permutation& perm);

struct BruteForceOptions {
    std::size_t max_n = 8;
};

/// Exact minimizer over all n! permutations, visited in lexicographic order;
/// the first strictly smallest cost wins. Throws RefusalError above max_n.
Solution brute_force(const Instance& instance, const BruteForceOptions& options = {});

/// First subset (in increasing bitmask order, bit i = item i) whose exact sum
/// equals target. Throws RefusalError for more than 24 items.
std::optional<std::vector<std::size_t>> subset_sum_brute(const QVector& sources, const Rational& target);

}  // namespace shufreg

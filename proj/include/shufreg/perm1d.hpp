#pragma once

#include <span>

#include "shufreg/model.hpp"

namespace shufreg {

/// Result of matching two equal-length sequences.
///
/// perm pairs b_i with a_{perm[i]}, so cost = sum_i (b_i - a_{perm[i]})^2.
/// With a = Xw and b = y this is the same convention as Solution::perm.
struct MatchResult {
    Permutation perm;
    double cost = 0.0;
};

/// Minimizes ||a - Pi^T b||^2 over permutations by sorting both sequences
/// and pairing order statistics. Ties are broken by original index, so the
/// result is deterministic. O(n log n).
MatchResult sort_match(std::span<const double> a, std::span<const double> b);
MatchResult sort_match(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// Squared 2-Wasserstein distance between the empirical measures of a and b.
double wasserstein2_sq(std::span<const double> a, std::span<const double> b);
double wasserstein2_sq(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// Indices that sort v ascending, ties by index.
std::vector<std::size_t> argsort(std::span<const double> v);

/// Sum of squared differences of the sorted sequences, where b is already
/// sorted ascending. The hot loop of the approximation scheme.
double sorted_match_cost(std::span<const double> a, std::span<const double> b_sorted,
                         std::vector<double>& scratch);

}  // namespace shufreg

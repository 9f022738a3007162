#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "shufreg/model.hpp"
#include "shufreg/rowsample.hpp"

namespace shufreg {

/// A weight vector in original coordinates with its best permutation.
struct Solution {
    Eigen::VectorXd w;
    Permutation perm;  // y_i pairs with row perm[i]
    double cost = 0.0;
};

/// Thin SVD X = U diag(sigma) V^T truncated to the numerical rank.
struct OrthonormalReduction {
    Eigen::MatrixXd U;      // n x k
    Eigen::VectorXd sigma;  // k, positive
    Eigen::MatrixXd V;      // d x k
    std::size_t k = 0;

    /// w_orig = V diag(sigma)^-1 w_reduced
    Eigen::VectorXd to_original(const Eigen::VectorXd& w_reduced) const;
    /// w_reduced = diag(sigma) V^T w_orig
    Eigen::VectorXd to_reduced(const Eigen::VectorXd& w_orig) const;
};

/// Numerical rank uses singular values above 1e-9 * sigma_max. An all-zero
/// X yields k = 0.
OrthonormalReduction orthonormalize(const Eigen::MatrixXd& X);

/// Lazy enumeration of the candidate right-hand sides: coordinates at
/// zero columns of S are 0, every other coordinate ranges over the responses.
/// Order is lexicographic in the response indices of the nonzero columns
/// (the first nonzero column varies slowest).
class CandidateTargets {
public:
    CandidateTargets(const SamplingMatrix& S, Eigen::VectorXd y);

    /// n^m for m nonzero columns, or nullopt if that overflows 64 bits.
    std::optional<std::uint64_t> size() const noexcept { return size_; }
    const std::vector<std::size_t>& support() const noexcept { return support_; }

    /// Writes the next candidate into b. Returns false once exhausted.
    bool next(Eigen::VectorXd& b);
    /// Candidate with the given position in enumeration order.
    Eigen::VectorXd at(std::uint64_t index) const;
    /// The response index assigned to each support column at a position.
    std::vector<std::size_t> digits(std::uint64_t index) const;

private:
    Eigen::VectorXd y_;
    std::vector<std::size_t> support_;
    std::optional<std::uint64_t> size_;
    std::vector<std::size_t> counter_;
    bool started_ = false;
    bool done_ = false;
};

/// Axis-aligned grid net centred at w_tilde with spacing 2 sqrt(eps r_b / c) / sqrt(k)
/// over the l-infinity ball of radius sqrt(c r_b). Every point of the
/// Euclidean ball of radius sqrt(c r_b) is within sqrt(eps r_b / c) of a net
/// point. Row-major order (last coordinate fastest). r_b == 0 yields {w_tilde}.
std::vector<Eigen::VectorXd> build_net(const Eigen::VectorXd& w_tilde, double r_b, double eps, double c);

/// Number of points build_net would return, without materializing them.
std::uint64_t net_size(std::size_t k, double r_b, double eps, double c);

struct FptasOptions {
    /// Hard cap on the total number of net points evaluated; exceeding it
    /// raises BudgetExceededError before any net is evaluated.
    std::uint64_t budget = 2'000'000'000ull;
    /// Worker threads (1 = sequential). The result does not depend on it.
    std::size_t jobs = 1;
    /// Skip candidate branches whose baseline cost exceeds c times the best
    /// baseline. The branch that carries the guarantee is never skipped.
    bool prune = true;
};

struct FptasStats {
    std::size_t k = 0;
    std::size_t support = 0;
    std::uint64_t candidates = 0;
    std::uint64_t branches_evaluated = 0;
    std::uint64_t net_points = 0;
    double c = 0.0;
    double best_baseline = 0.0;
};

/// (1 + eps)-approximate minimizer of ||X w - Pi^T y||^2 over (w, Pi).
/// Requires 0 < eps < 1.
Solution fptas_solve(const Instance& instance, double eps, const FptasOptions& options = {},
                     FptasStats* stats = nullptr);

}  // namespace shufreg

#include "shufreg/oracle.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>

#include "shufreg/errors.hpp"

namespace shufreg {

OlsResult ols_given_perm(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Permutation& perm) {
    if (y.size() != X.rows() || perm.size() != static_cast<std::size_t>(X.rows()))
        throw ArgumentError("ols_given_perm: shape mismatch");
    const Eigen::VectorXd target = unpermute(y, perm);
    OlsResult out;
    if (X.isZero(0.0)) {
        out.w = Eigen::VectorXd::Zero(X.cols());
    } else {
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(X);
        out.w = cod.solve(target);
    }
    out.residual_sq = permuted_cost(X, y, out.w, perm);
    return out;
}

Solution brute_force(const Instance& instance, const BruteForceOptions& options) {
    instance.validate();
    const std::size_t n = instance.n();
    if (n > options.max_n)
        throw RefusalError("brute_force: n = " + std::to_string(n) + " exceeds the cap of " + std::to_string(options.max_n));

    // One factorization serves every permutation.
    const bool zero = instance.X.isZero(0.0);
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
    if (!zero) cod.compute(instance.X);

    std::vector<std::size_t> map(n);
    std::iota(map.begin(), map.end(), std::size_t{0});
    Solution best;
    best.cost = std::numeric_limits<double>::infinity();
    do {
        const Permutation perm(map);
        const Eigen::VectorXd target = unpermute(instance.y, perm);
        const Eigen::VectorXd w = zero ? Eigen::VectorXd::Zero(instance.X.cols()) : Eigen::VectorXd(cod.solve(target));
        const double cost = permuted_cost(instance.X, instance.y, w, perm);
        if (cost < best.cost) {
            best.cost = cost;
            best.w = w;
            best.perm = perm;
        }
    } while (std::next_permutation(map.begin(), map.end()));
    return best;
}

std::optional<std::vector<std::size_t>> subset_sum_brute(const QVector& sources, const Rational& target) {
    const std::size_t m = sources.size();
    if (m > 24) throw RefusalError("subset_sum_brute: " + std::to_string(m) + " items exceed the cap of 24");
    const std::uint32_t masks = std::uint32_t{1} << m;
    for (std::uint32_t mask = 0; mask < masks; ++mask) {
        Rational sum = 0;
        for (std::size_t i = 0; i < m; ++i)
            if (mask & (std::uint32_t{1} << i)) sum += sources[i];
        if (sum == target) {
            std::vector<std::size_t> subset;
            for (std::size_t i = 0; i < m; ++i)
                if (mask & (std::uint32_t{1} << i)) subset.push_back(i);
            return subset;
        }
    }
    return std::nullopt;
}

}  // namespace shufreg

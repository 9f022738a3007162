#include "shufreg/perm1d.hpp"

#include <algorithm>
#include <numeric>

#include "shufreg/errors.hpp"

namespace shufreg {

namespace {

std::span<const double> as_span(const Eigen::VectorXd& v) {
    return {v.data(), static_cast<std::size_t>(v.size())};
}

void check_lengths(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw ArgumentError("length mismatch: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
    if (a.empty()) throw ArgumentError("sequences must be non-empty");
}

}  // namespace

std::vector<std::size_t> argsort(std::span<const double> v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return v[i] < v[j]; });
    return order;
}

MatchResult sort_match(std::span<const double> a, std::span<const double> b) {
    check_lengths(a, b);
    const std::vector<std::size_t> oa = argsort(a);
    const std::vector<std::size_t> ob = argsort(b);
    std::vector<std::size_t> map(a.size());
    double cost = 0.0;
    for (std::size_t r = 0; r < a.size(); ++r) {
        map[ob[r]] = oa[r];
        const double diff = a[oa[r]] - b[ob[r]];
        cost += diff * diff;
    }
    return {Permutation(std::move(map)), cost};
}

MatchResult sort_match(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return sort_match(as_span(a), as_span(b));
}

double wasserstein2_sq(std::span<const double> a, std::span<const double> b) {
    return sort_match(a, b).cost / static_cast<double>(a.size());
}

double wasserstein2_sq(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return wasserstein2_sq(as_span(a), as_span(b));
}

double sorted_match_cost(std::span<const double> a, std::span<const double> b_sorted,
                         std::vector<double>& scratch) {
    scratch.assign(a.begin(), a.end());
    std::sort(scratch.begin(), scratch.end());
    double cost = 0.0;
    for (std::size_t i = 0; i < scratch.size(); ++i) {
        const double diff = scratch[i] - b_sorted[i];
        cost += diff * diff;
    }
    return cost;
}

}  // namespace shufreg

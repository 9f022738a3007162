#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "helpers.hpp"
#include "shufreg/perm1d.hpp"
#include "shufreg/rng.hpp"

using namespace shufreg;

TEST_CASE("sort_match examples") {
    SUBCASE("b is a rearrangement of a") {
        const auto r = sort_match(std::vector<double>{1, 2, 3}, std::vector<double>{3, 1, 2});
        CHECK(r.cost == 0.0);
        CHECK(r.perm == Permutation({2, 0, 1}));
    }
    SUBCASE("two points") {
        const auto r = sort_match(std::vector<double>{0, 1}, std::vector<double>{10, 0});
        CHECK(r.cost == 81.0);
        CHECK(r.perm == Permutation({1, 0}));
    }
    SUBCASE("identical inputs") {
        const std::vector<double> a{4, -1, 2.5, 0};
        const auto r = sort_match(a, a);
        CHECK(r.cost == 0.0);
        CHECK(r.perm == Permutation::identity(4));
    }
}

TEST_CASE("wasserstein examples") {
    const std::vector<double> a{0.3, -2, 5};
    CHECK(wasserstein2_sq(a, a) == 0.0);
    CHECK(wasserstein2_sq(std::vector<double>{0, 1}, std::vector<double>{10, 0}) == 40.5);
    const std::vector<double> c(5, 1.25), ct(5, 1.25 + 0.5);
    CHECK(wasserstein2_sq(c, ct) == 0.25);
}

TEST_CASE("sort_match agrees with exhaustive matching") {
    Rng rng(77);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 1 + rng.below(7);
        std::vector<double> a(n), b(n);
        for (auto& v : a) v = rng.normal();
        for (auto& v : b) v = rng.normal();
        const double brute = testing::min_matching_cost(a, b);
        const auto r = sort_match(a, b);
        CHECK(std::abs(r.cost - brute) <= 1e-12 * std::max(1.0, brute));
        double recomputed = 0.0;
        for (std::size_t i = 0; i < n; ++i) recomputed += (b[i] - a[r.perm[i]]) * (b[i] - a[r.perm[i]]);
        CHECK(r.cost == doctest::Approx(recomputed).epsilon(1e-14));
    }
}

TEST_CASE("sort_match cost is invariant under rearranging either input") {
    Rng rng(5);
    std::vector<double> a(6), b(6);
    for (auto& v : a) v = rng.uniform();
    for (auto& v : b) v = rng.uniform();
    const double base = sort_match(a, b).cost;
    std::reverse(a.begin(), a.end());
    std::rotate(b.begin(), b.begin() + 2, b.end());
    CHECK(sort_match(a, b).cost == doctest::Approx(base).epsilon(1e-14));
}

TEST_CASE("pure shift gives the squared shift") {
    std::vector<double> a{3, -1, 0.5, 2}, b = a;
    for (auto& v : b) v += 0.75;
    CHECK(wasserstein2_sq(a, b) == doctest::Approx(0.5625).epsilon(1e-14));
}

TEST_CASE("alignment is monotone on distinct entries") {
    const std::vector<double> a{0.4, -3, 2, 7, 1}, b{10, -2, 0, 5, 3};
    const auto r = sort_match(a, b);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j)
            if (b[i] < b[j]) CHECK(a[r.perm[i]] < a[r.perm[j]]);
}

TEST_CASE("ties are broken by index") {
    const auto r = sort_match(std::vector<double>{1, 1, 1}, std::vector<double>{2, 2, 2});
    CHECK(r.perm == Permutation::identity(3));
    CHECK(argsort(std::vector<double>{2, 1, 2, 1}) == std::vector<std::size_t>{1, 3, 0, 2});
}

TEST_CASE("sorted_match_cost matches sort_match") {
    std::vector<double> a{0.5, -1, 4}, b{2, 0, -3}, scratch;
    std::vector<double> bs = b;
    std::sort(bs.begin(), bs.end());
    CHECK(sorted_match_cost(a, bs, scratch) == doctest::Approx(sort_match(a, b).cost));
}

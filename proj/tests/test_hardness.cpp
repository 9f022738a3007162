#include "doctest.h"

#include <algorithm>

#include "shufreg/errors.hpp"
#include "shufreg/hardness.hpp"
#include "shufreg/oracle.hpp"
#include "shufreg/rng.hpp"

using namespace shufreg;

TEST_CASE("reduction layout, k = 1") {
    const PlsInstance pls = reduce_3partition({{4, 5, 6}, 1, 15});
    CHECK(pls.A == std::vector<std::vector<std::int64_t>>{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1}});
    CHECK(pls.b == std::vector<std::int64_t>{4, 5, 6, 15});
}

TEST_CASE("reduction layout, k = 2") {
    const PlsInstance pls = reduce_3partition({{4, 4, 7, 7, 4, 4}, 2, 15});
    REQUIRE(pls.n() == 8);
    REQUIRE(pls.d() == 6);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) CHECK(pls.A[i][j] == (i == j ? 1 : 0));
    CHECK(pls.A[6] == std::vector<std::int64_t>{1, 1, 1, 0, 0, 0});
    CHECK(pls.A[7] == std::vector<std::int64_t>{0, 0, 0, 1, 1, 1});
    CHECK(pls.b == std::vector<std::int64_t>{4, 4, 7, 7, 4, 4, 15, 15});
}

TEST_CASE("constraint violations are named") {
    CHECK_THROWS_WITH_AS(reduce_3partition({{3, 6, 6}, 1, 15}), doctest::Contains("C/4 < z_i < C/2"), ArgumentError);
    CHECK_THROWS_WITH_AS(reduce_3partition({{4, 4, 8}, 1, 16}), doctest::Contains("C/4 < z_i < C/2"), ArgumentError);
    CHECK_THROWS_WITH_AS(reduce_3partition({{4, 5, 7}, 1, 15}), doctest::Contains("sum z_i = C*k"), ArgumentError);
    CHECK_THROWS_WITH_AS(reduce_3partition({{4, 5}, 1, 9}), doctest::Contains("len(z) = 3k"), ArgumentError);
}

TEST_CASE("3-partition by enumeration") {
    CHECK(check_3partition_brute({{4, 5, 6}, 1, 15}));
    CHECK_FALSE(check_3partition_brute({{4, 4, 4, 6, 6, 6}, 2, 15}));
    CHECK(check_3partition_brute({{4, 4, 7, 7, 4, 4}, 2, 15}));
    ThreePartitionInstance big = planted_3partition(5, 30, 1);
    CHECK_THROWS_AS(check_3partition_brute(big), RefusalError);
}

TEST_CASE("permuted linear system by enumeration") {
    CHECK(pls_feasible_brute(reduce_3partition({{4, 5, 6}, 1, 15})));
    CHECK_FALSE(pls_feasible_brute(reduce_3partition({{4, 4, 4, 6, 6, 6}, 2, 15})));
    CHECK(pls_feasible_brute({{{1, 0}, {0, 1}}, {1, 2}}));
    // (1,1) x = b has no solution unless both entries agree.
    CHECK_FALSE(pls_feasible_brute({{{1}, {1}}, {1, 2}}));
    PlsInstance wide = reduce_3partition(planted_3partition(3, 30, 2));
    CHECK_THROWS_AS(pls_feasible_brute(wide), RefusalError);
}

TEST_CASE("feasibility agrees with the floating-point optimum") {
    for (auto z : {std::vector<std::int64_t>{4, 4, 4, 6, 6, 6}, std::vector<std::int64_t>{4, 4, 7, 7, 4, 4}}) {
        const PlsInstance pls = reduce_3partition({z, 2, 15});
        const double cost = brute_force(pls.to_instance()).cost;
        CHECK(pls_feasible_brute(pls) == (cost < 1e-9));
    }
}

TEST_CASE("planted instances") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const std::size_t k = 1 + seed % 2;
        const ThreePartitionInstance tp = planted_3partition(k, 15 + 2 * static_cast<std::int64_t>(seed), seed);
        CHECK_NOTHROW(tp.validate());
        CHECK(check_3partition_brute(tp));
        const PlsInstance pls = reduce_3partition(tp);
        CHECK(pls_feasible_brute(pls));
        // Each z_i appears once in b, followed by k copies of C.
        CHECK(std::vector<std::int64_t>(pls.b.begin(), pls.b.begin() + 3 * static_cast<long>(k)) == tp.z);
        CHECK(std::count(pls.b.begin(), pls.b.end(), tp.C) >= static_cast<long>(k));
    }
    CHECK_THROWS_AS(planted_3partition(1, 4, 0), ArgumentError);
}

TEST_CASE("reduction equivalence on random instances") {
    // Random multisets with the right sum; some are yes, some no.
    Rng rng(12);
    int yes = 0, no = 0;
    for (int trial = 0; trial < 200 && (yes < 5 || no < 5); ++trial) {
        const std::int64_t C = 21;
        std::vector<std::int64_t> z(6);
        for (auto& v : z) v = 6 + static_cast<std::int64_t>(rng.below(5));
        const std::int64_t sum = z[0] + z[1] + z[2] + z[3] + z[4] + z[5];
        if (sum != 2 * C) continue;
        const ThreePartitionInstance tp{z, 2, C};
        const bool lhs = check_3partition_brute(tp);
        CHECK(lhs == pls_feasible_brute(reduce_3partition(tp)));
        (lhs ? yes : no)++;
    }
    CHECK(yes > 0);
    CHECK(no > 0);
}

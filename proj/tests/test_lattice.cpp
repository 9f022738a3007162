#include "doctest.h"

#include <algorithm>
#include <numeric>

#include "shufreg/errors.hpp"
#include "shufreg/lattice.hpp"
#include "shufreg/oracle.hpp"

using namespace shufreg;

namespace {

/// Every permutation of {0..n} under which y_i = w^T x_{p[i]} has an exact solution.
std::vector<Permutation> consistent_pairings(const RationalInstance& full) {
    const std::size_t m = full.X.rows(), d = full.X.cols();
    std::vector<std::size_t> p(m);
    std::iota(p.begin(), p.end(), std::size_t{0});
    std::vector<Permutation> out;
    do {
        QMatrix aug(m, d + 1), A(m, d);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < d; ++j) aug(i, j) = A(i, j) = full.X(p[i], j);
            aug(i, d) = full.y[i];
        }
        if (rank(aug) == rank(A)) out.emplace_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

RationalInstance quantized_instance(std::size_t n, std::size_t d, std::uint64_t seed, GroundTruth* truth) {
    NoiselessOptions opts;
    opts.anchored = false;
    opts.quantization_bits = 16;
    auto [inst, t] = gen_noiseless_anchored(n, d, random_weights(d, 1.0, seed), seed, opts);
    if (truth) *truth = t;
    return to_rational(inst.flatten());
}

QVector exact_w(const GroundTruth& t) {
    return exact(std::vector<double>(t.w_bar.data(), t.w_bar.data() + t.w_bar.size()));
}

}  // namespace

TEST_CASE("subset-sum basis layout") {
    SubsetSumInstance ssi;
    ssi.sources = {Rational(1, 2), Rational(3, 4), Rational(-5)};
    ssi.target = Rational(5, 4);
    ssi.beta = 8;
    const LatticeBasis b = subset_sum_basis(ssi);
    REQUIRE(b.rank() == 4);
    REQUIRE(b.dim() == 5);
    CHECK(b.scale == 1);  // beta already clears every denominator
    CHECK(b.columns[0] == IntVector{1, 0, 0, 0, 10});
    CHECK(b.columns[1] == IntVector{0, 1, 0, 0, -4});
    CHECK(b.columns[2] == IntVector{0, 0, 1, 0, -6});
    CHECK(b.columns[3] == IntVector{0, 0, 0, 1, 40});

    ssi.beta = 1;
    const LatticeBasis c = subset_sum_basis(ssi);
    CHECK(c.scale == 4);
    CHECK(c.columns[0].back() == 5);
    CHECK(c.columns[1].back() == -2);

    ssi.beta = 0;
    CHECK_THROWS_AS(subset_sum_basis(ssi), ArgumentError);
}

TEST_CASE("decode subset vectors") {
    std::vector<std::size_t> s;
    CHECK(decode_subset_vector({1, 1, 0, 1, 0}, s));
    CHECK(s == std::vector<std::size_t>{0, 2});
    CHECK(decode_subset_vector({-2, 0, -2, 0, 0}, s));
    CHECK(s == std::vector<std::size_t>{1});
    CHECK_FALSE(decode_subset_vector({1, 1, 0, 1, 3}, s));
    CHECK_FALSE(decode_subset_vector({0, 1, 0, 1, 0}, s));
    CHECK_FALSE(decode_subset_vector({1, 2, 0, 1, 0}, s));
}

TEST_CASE("lagarias-odlyzko examples") {
    SUBCASE("single forced item") {
        SubsetSumInstance ssi{{Rational(7)}, Rational(7), Rational(1 << 10)};
        const auto r = lagarias_odlyzko(ssi);
        REQUIRE(r.subset);
        CHECK(*r.subset == std::vector<std::size_t>{0});
    }
    SUBCASE("five items") {
        SubsetSumInstance ssi{{3, 5, 9, 17, 33}, 45, Rational(1 << 16)};
        const auto r = lagarias_odlyzko(ssi);
        REQUIRE(r.subset);
        CHECK(*r.subset == std::vector<std::size_t>{0, 2, 4});
        CHECK(subset_sum_brute(ssi.sources, ssi.target) == r.subset);
    }
    SUBCASE("no solution") {
        SubsetSumInstance ssi{{2, 4, 6, 8, 10}, 7, Rational(1 << 16)};
        CHECK_FALSE(subset_sum_brute(ssi.sources, ssi.target));
        CHECK_FALSE(lagarias_odlyzko(ssi).subset);
    }
}

TEST_CASE("build_sources") {
    SUBCASE("scalar case") {
        const Rational w(3, 2), x0(5), x1(-4);
        const SubsetSumInstance ssi = build_sources({x0}, [&] {
            QMatrix X(1, 1);
            X(0, 0) = x1;
            return X;
        }(), {w * x1}, w * x0);
        REQUIRE(ssi.sources.size() == 1);
        CHECK(ssi.sources[0] == w * x1 * x0 / x1);
        CHECK(ssi.sources[0] == ssi.target);
    }
    SUBCASE("true pairing sums to the anchor response") {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            NoiselessOptions opts;
            opts.quantization_bits = 16;
            auto [inst, truth] = gen_noiseless_anchored(4, 3, random_weights(3, 1.0, seed), seed, opts);
            REQUIRE(truth.pi_bar[0] == 0);
            const RationalAnchoredInstance q = to_rational(inst);
            const SubsetSumInstance ssi = build_sources(q.x0, q.X, q.y, q.y0);
            Rational sum = 0;
            for (std::size_t i = 0; i < 4; ++i) sum += ssi.sources[i * 4 + (truth.pi_bar[i + 1] - 1)];
            CHECK(sum == ssi.target);
        }
    }
    SUBCASE("zero weight gives zero sources") {
        auto [inst, truth] = gen_noiseless_anchored(3, 2, Eigen::VectorXd::Zero(2), 1);
        const RationalAnchoredInstance q = to_rational(inst);
        const SubsetSumInstance ssi = build_sources(q.x0, q.X, q.y, q.y0);
        CHECK(std::all_of(ssi.sources.begin(), ssi.sources.end(), [](const Rational& c) { return sgn(c) == 0; }));
        CHECK(sgn(ssi.target) == 0);
    }
    SUBCASE("rank deficient covariates") {
        QMatrix X(3, 2);
        X(0, 0) = 1;
        X(1, 0) = 2;
        X(2, 0) = 3;
        CHECK_THROWS_AS(build_sources({1, 1}, X, {1, 2, 3}, 1), RankError);
    }
}

TEST_CASE("weight norm lower bound") {
    CHECK(w_norm_lower_bound(Eigen::VectorXd::Zero(3)) == 0.0);
    CHECK(w_norm_lower_bound(Eigen::Vector2d(std::sqrt(2.0), std::sqrt(2.0))) == doctest::Approx(1.0));
    int below = 0;
    for (std::uint64_t s = 0; s < 200; ++s) {
        auto [inst, truth] = gen_gaussian_noisy(50, 3, random_weights(3, 1.0, s), 0.0, s);
        if (w_norm_lower_bound(inst.y) <= 1.0) ++below;
    }
    CHECK(below >= 190);
}

TEST_CASE("epsilon bound") {
    const double lb = 0.7;
    for (std::size_t n : {2, 3, 4, 6}) {
        for (std::size_t d : {2, 3}) {
            if (d > n) continue;
            const Rational eps = epsilon_bound(n, d, 0.1, lb);
            CHECK(sgn(eps) > 0);
            CHECK(eps < exact(lb));
            CHECK(epsilon_bound(n, d, 0.05, lb) < eps);
            CHECK(epsilon_bound(2 * n, d, 0.1, lb) < eps);
        }
    }
    CHECK_THROWS_AS(epsilon_bound(3, 1, 0.1, lb), ArgumentError);
    CHECK_THROWS_AS(epsilon_bound(3, 2, 1.5, lb), ArgumentError);
    CHECK_THROWS_AS(epsilon_bound(3, 2, 0.1, 0.0), ArgumentError);
    // A larger |Z_R| exponent gives a smaller bound.
    CHECK(epsilon_bound(3, 2, 0.1, lb, 2.0) < epsilon_bound(3, 2, 0.1, lb, 1.0));
}

TEST_CASE("beta is the smallest admissible power of two") {
    const Rational eps = Rational(3, 1000);
    const Rational full = beta_for(3, eps, BetaPolicy::FullExponent);
    const Rational half = beta_for(3, eps, BetaPolicy::HalfExponent);
    // 2^9 / 0.003 = 170666.7 -> 2^18; 2^4.5 / 0.003 = 7542.5 -> 2^13.
    CHECK(full == pow2(18));
    CHECK(half == pow2(13));
    CHECK(beta_for(2, Rational(1), BetaPolicy::FullExponent) == pow2(4));
    CHECK_THROWS_AS(beta_for(2, Rational(0), BetaPolicy::FullExponent), ArgumentError);
}

TEST_CASE("find_permutation with a single pair") {
    RationalAnchoredInstance a;
    a.x0 = {Rational(3)};
    a.X = QMatrix(1, 1);
    a.X(0, 0) = Rational(-7, 4);
    a.y0 = Rational(9, 2);
    a.y = {Rational(3, 2) * a.X(0, 0)};
    RecoveryOptions opts;
    opts.eps_override = Rational(1, 1024);
    const PermutationResult r = find_permutation(a, opts);
    REQUIRE(r.perm);
    CHECK(*r.perm == Permutation::identity(1));
}

TEST_CASE("recover on quantized noiseless instances") {
    for (auto [n, d] : {std::pair<std::size_t, std::size_t>{3, 2}, {4, 3}}) {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            GroundTruth truth;
            const RationalInstance full = quantized_instance(n, d, seed + 100 * n, &truth);
            const RecoveryAttempt attempt = recover(full);
            REQUIRE(attempt.result);
            const RecoveryResult& r = *attempt.result;
            CHECK(r.perm == truth.pi_bar);
            CHECK(r.w == exact_w(truth));
            for (std::size_t i = 0; i <= n; ++i) CHECK(dot(full.X.row(r.perm[i]), r.w) == full.y[i]);
            // The exhaustive oracle finds the same pairing and no other.
            if (n == 3) CHECK(consistent_pairings(full) == std::vector<Permutation>{truth.pi_bar});
        }
    }
}

TEST_CASE("half exponent policy also recovers") {
    GroundTruth truth;
    const RationalInstance full = quantized_instance(3, 2, 7, &truth);
    RecoveryOptions opts;
    opts.policy = BetaPolicy::HalfExponent;
    const RecoveryAttempt attempt = recover(full, opts);
    REQUIRE(attempt.result);
    CHECK(attempt.result->perm == truth.pi_bar);
}

TEST_CASE("beta below the minimum is rejected") {
    const RationalInstance full = quantized_instance(3, 2, 1, nullptr);
    RecoveryOptions opts;
    opts.beta_override = Rational(2);
    CHECK_THROWS_AS(recover(full, opts), ArgumentError);
}

TEST_CASE("recovery in one dimension needs an explicit eps") {
    const RationalInstance full = quantized_instance(2, 1, 3, nullptr);
    CHECK_THROWS_AS(recover(full), ArgumentError);
    RecoveryOptions opts;
    opts.eps_override = Rational(1, 1 << 20);
    const RecoveryAttempt attempt = recover(full, opts);
    if (attempt.result)
        for (std::size_t i = 0; i < 3; ++i) CHECK(dot(full.X.row(attempt.result->perm[i]), attempt.result->w) == full.y[i]);
}

TEST_CASE("degenerate and noisy inputs") {
    SUBCASE("zero weight") {
        NoiselessOptions opts;
        opts.quantization_bits = 16;
        auto [inst, truth] = gen_noiseless_anchored(3, 2, Eigen::VectorXd::Zero(2), 2, opts);
        CHECK_THROWS_AS(recover(to_rational(inst.flatten())), DegenerateInstanceError);
    }
    SUBCASE("noise makes recovery fail, not answer wrongly") {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            auto [inst, truth] = gen_gaussian_noisy(4, 2, random_weights(2, 1.0, seed), 0.1, seed);
            const RationalInstance q = quantize(inst, QuantizationConfig{16});
            const RecoveryAttempt attempt = recover(q);
            CHECK_FALSE(attempt.result);
            CHECK_FALSE(attempt.failure.empty());
        }
    }
}

TEST_CASE("planted vector lies in the lattice") {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        NoiselessOptions opts;
        opts.quantization_bits = 16;
        const std::size_t n = 3;
        auto [inst, truth] = gen_noiseless_anchored(n, 2, random_weights(2, 1.0, seed), seed, opts);
        const RationalAnchoredInstance q = to_rational(inst);
        SubsetSumInstance ssi = build_sources(q.x0, q.X, q.y, q.y0);
        ssi.beta = pow2(40);
        const LatticeBasis B = subset_sum_basis(ssi);
        std::vector<std::size_t> planted;
        for (std::size_t i = 0; i < n; ++i) planted.push_back(i * n + truth.pi_bar[i + 1] - 1);
        std::sort(planted.begin(), planted.end());
        IntVector v(B.dim(), 0);
        v[0] = 1;
        for (std::size_t s : planted) v[s + 1] = 1;
        const auto coords = lattice_coordinates(B, v);
        REQUIRE(coords);
        CHECK(*coords == planted_coefficients(n * n, planted));
        CHECK(squared_norm(v) == static_cast<long>(n + 1));
        IntVector off = v;
        off.back() = 1;
        CHECK_FALSE(lattice_coordinates(B, off));
    }
}

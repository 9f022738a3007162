#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "helpers.hpp"
#include "shufreg/errors.hpp"
#include "shufreg/io.hpp"
#include "shufreg/model.hpp"

using namespace shufreg;

namespace {

bool is_identity_sorted(std::vector<std::size_t> map) {
    std::sort(map.begin(), map.end());
    for (std::size_t i = 0; i < map.size(); ++i)
        if (map[i] != i) return false;
    return true;
}

double sample_variance(const Eigen::VectorXd& v) {
    const double mean = v.mean();
    return (v.array() - mean).square().sum() / static_cast<double>(v.size() - 1);
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("shufreg_test_" + name);
}

}  // namespace

TEST_CASE("permutation validation") {
    CHECK_NOTHROW(Permutation({2, 0, 1}));
    CHECK_THROWS_AS(Permutation({0, 0, 1}), ArgumentError);
    CHECK_THROWS_AS(Permutation({0, 3, 1}), ArgumentError);
    const Permutation p({2, 0, 1});
    const Permutation inv = p.inverse();
    for (std::size_t i = 0; i < 3; ++i) CHECK(inv[p[i]] == i);
}

TEST_CASE("gaussian generator, zero weight and zero noise") {
    auto [inst, truth] = gen_gaussian_noisy(2, 1, Eigen::VectorXd::Zero(1), 0.0, 42);
    CHECK(inst.y(0) == 0.0);
    CHECK(inst.y(1) == 0.0);
    CHECK(std::isinf(truth.snr));
}

TEST_CASE("noiseless gaussian responses are exact permuted inner products") {
    const Eigen::VectorXd w = Eigen::Vector2d(1.0, 1.0);
    auto [inst, truth] = gen_gaussian_noisy(5, 2, w, 0.0, 7);
    REQUIRE(is_identity_sorted(truth.pi_bar.map()));
    for (std::size_t i = 0; i < 5; ++i) {
        const Eigen::Index r = static_cast<Eigen::Index>(truth.pi_bar[i]);
        double dot = 0.0;
        for (Eigen::Index j = 0; j < 2; ++j) dot += w(j) * inst.X(r, j);
        CHECK(inst.y(static_cast<Eigen::Index>(i)) == dot);
    }
    std::vector<double> ys(inst.y.begin(), inst.y.end()), fits;
    for (Eigen::Index i = 0; i < 5; ++i) fits.push_back(inst.X.row(i).dot(w));
    std::sort(ys.begin(), ys.end());
    std::sort(fits.begin(), fits.end());
    for (std::size_t i = 0; i < 5; ++i) CHECK(ys[i] == doctest::Approx(fits[i]).epsilon(1e-15));
}

TEST_CASE("gaussian response variance matches the weight norm") {
    auto [inst, truth] = gen_gaussian_noisy(10000, 1, Eigen::VectorXd::Ones(1), 0.0, 3);
    CHECK(std::abs(sample_variance(inst.y) - 1.0) < 0.05);
}

TEST_CASE("uniform generator support and variance") {
    auto [inst, truth] = gen_uniform_noisy(100000, 1, Eigen::VectorXd::Ones(1), 0.0, 5);
    CHECK(inst.y.cwiseAbs().maxCoeff() <= 0.5);
    CHECK(std::abs(sample_variance(inst.y) - 1.0 / 12.0) < 0.05 / 12.0);
}

TEST_CASE("pure noise is standard normal (Kolmogorov-Smirnov)") {
    auto [inst, truth] = gen_uniform_noisy(10000, 1, Eigen::VectorXd::Zero(1), 1.0, 8);
    std::vector<double> v(inst.y.begin(), inst.y.end());
    std::sort(v.begin(), v.end());
    double ks = 0.0;
    const double n = static_cast<double>(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double cdf = 0.5 * std::erfc(-v[i] / std::sqrt(2.0));
        ks = std::max({ks, std::abs(cdf - static_cast<double>(i) / n), std::abs(cdf - static_cast<double>(i + 1) / n)});
    }
    // 1% critical value is 1.63 / sqrt(n).
    CHECK(ks < 1.63 / std::sqrt(n));
}

TEST_CASE("generators are deterministic in the seed") {
    const Eigen::VectorXd w = Eigen::Vector3d(0.2, -0.5, 1.0);
    auto [a, ta] = gen_gaussian_noisy(6, 3, w, 0.3, 99);
    auto [b, tb] = gen_gaussian_noisy(6, 3, w, 0.3, 99);
    auto [c, tc] = gen_gaussian_noisy(6, 3, w, 0.3, 100);
    CHECK(a.X == b.X);
    CHECK(a.y == b.y);
    CHECK(ta.pi_bar == tb.pi_bar);
    CHECK(a.X != c.X);
}

TEST_CASE("covariates do not depend on the noise level") {
    const Eigen::VectorXd w = Eigen::Vector2d(1.0, 0.0);
    auto [a, ta] = gen_gaussian_noisy(6, 2, w, 0.0, 4);
    auto [b, tb] = gen_gaussian_noisy(6, 2, w, 2.0, 4);
    CHECK(a.X == b.X);
    CHECK(ta.pi_bar == tb.pi_bar);
}

TEST_CASE("noiseless anchored generator") {
    SUBCASE("n = 1 scalar") {
        auto [inst, truth] = gen_noiseless_anchored(1, 1, Eigen::VectorXd::Constant(1, 2.0), 17);
        CHECK(inst.y0 == 2.0 * inst.x0(0));
        CHECK(inst.y(0) == 2.0 * inst.X(0, 0));
        CHECK(truth.pi_bar == Permutation::identity(2));
    }
    SUBCASE("true pairing recovers w") {
        const Eigen::VectorXd w = Eigen::Vector2d(0.7, -1.3);
        auto [inst, truth] = gen_noiseless_anchored(3, 2, w, 5);
        const Instance flat = inst.flatten();
        Eigen::MatrixXd paired(4, 2);
        for (Eigen::Index i = 0; i < 4; ++i) paired.row(i) = flat.X.row(static_cast<Eigen::Index>(truth.pi_bar[static_cast<std::size_t>(i)]));
        const Eigen::VectorXd w_hat = paired.colPivHouseholderQr().solve(flat.y);
        CHECK((w_hat - w).norm() < 1e-12);
    }
    SUBCASE("zero weight gives zero responses") {
        auto [inst, truth] = gen_noiseless_anchored(3, 2, Eigen::VectorXd::Zero(2), 5);
        CHECK(inst.y0 == 0.0);
        CHECK(inst.y.isZero(0.0));
    }
    SUBCASE("unanchored permutation records the anchor") {
        NoiselessOptions opts;
        opts.anchored = false;
        bool moved = false;
        for (std::uint64_t s = 0; s < 20; ++s) {
            auto [inst, truth] = gen_noiseless_anchored(3, 2, Eigen::Vector2d(1, 1), s, opts);
            REQUIRE(truth.anchor);
            CHECK(*truth.anchor == truth.pi_bar[0]);
            moved = moved || *truth.anchor != 0;
        }
        CHECK(moved);
    }
    SUBCASE("quantized generation is exactly consistent") {
        NoiselessOptions opts;
        opts.anchored = false;
        opts.quantization_bits = 16;
        auto [inst, truth] = gen_noiseless_anchored(4, 3, Eigen::Vector3d(0.3, 0.4, -0.5), 12, opts);
        const RationalInstance q = to_rational(inst.flatten());
        const QVector w = exact(std::vector<double>(truth.w_bar.data(), truth.w_bar.data() + 3));
        for (std::size_t i = 0; i < 5; ++i) {
            CHECK(dot(q.X.row(truth.pi_bar[i]), w) == q.y[i]);
            for (std::size_t j = 0; j < 3; ++j) CHECK(Rational(q.X(i, j) * 65536).get_den() == 1);
        }
    }
}

TEST_CASE("quantize examples") {
    const QuantizationConfig p2{2};
    CHECK(quantize(0.3, p2) == Rational(1, 4));
    CHECK(quantize(0.375, p2) == Rational(1, 2));
    CHECK(quantize(0.125, p2) == Rational(0));
    CHECK(quantize(-0.375, p2) == Rational(-1, 2));
    CHECK(quantize(0.5, QuantizationConfig{53}) == Rational(1, 2));
    CHECK(quantize(Rational(3, 8), p2) == Rational(1, 2));
}

TEST_CASE("quantize is idempotent") {
    auto [inst, truth] = gen_gaussian_noisy(5, 3, Eigen::Vector3d(1, 2, 3), 0.5, 1);
    const QuantizationConfig cfg{10};
    const RationalInstance once = quantize(inst, cfg);
    const RationalInstance twice = quantize(once, cfg);
    CHECK(once.X == twice.X);
    CHECK(once.y == twice.y);
    for (std::size_t i = 0; i < 5; ++i) CHECK(Rational(once.y[i] * 1024).get_den() == 1);
}

TEST_CASE("random weights have the requested norm") {
    const Eigen::VectorXd w = random_weights(7, 2.5, 3);
    CHECK(w.norm() == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("permutation helpers agree with the cost definition") {
    const Eigen::MatrixXd X = testing::gaussian_matrix(4, 2, 1);
    const Eigen::VectorXd y = testing::gaussian_vector(4, 2);
    const Eigen::VectorXd w = Eigen::Vector2d(0.5, -1.0);
    const Permutation p({3, 0, 2, 1});
    double direct = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        const double r = y(static_cast<Eigen::Index>(i)) - X.row(static_cast<Eigen::Index>(p[i])).dot(w);
        direct += r * r;
    }
    CHECK(permuted_cost(X, y, w, p) == doctest::Approx(direct).epsilon(1e-14));
    CHECK((X * w - unpermute(y, p)).squaredNorm() == doctest::Approx(direct).epsilon(1e-14));
    CHECK((permute_rows(X, p) * w - y).squaredNorm() == doctest::Approx(direct).epsilon(1e-14));
}

TEST_CASE("instance file round trip") {
    Instance inst;
    inst.X = testing::gaussian_matrix(3, 2, 4);
    inst.y = testing::gaussian_vector(3, 5);
    const auto path = temp_file("roundtrip.json");
    write_instance(path, inst);
    const Instance back = read_instance(path);
    CHECK(back.X == inst.X);
    CHECK(back.y == inst.y);
    std::filesystem::remove(path);
}

TEST_CASE("anchored file round trip keeps truth") {
    NoiselessOptions opts;
    opts.anchored = false;
    auto [inst, truth] = gen_noiseless_anchored(3, 2, Eigen::Vector2d(0.6, 0.8), 2, opts);
    InstanceFile file = InstanceFile::from(inst);
    file.truth = truth;
    const InstanceFile back = parse_instance(dump_instance(file));
    REQUIRE(back.has_anchor());
    CHECK(back.anchored().x0 == inst.x0);
    CHECK(back.anchored().y0 == inst.y0);
    REQUIRE(back.truth);
    CHECK(back.truth->pi_bar == truth.pi_bar);
    CHECK(back.truth->anchor == truth.anchor);
    CHECK(std::isinf(back.truth->snr));
    CHECK(dump_instance(back) == dump_instance(file));
}

TEST_CASE("instance file errors") {
    CHECK_THROWS_AS(parse_instance(R"({"n":2,"d":1,"x":[[1],[2]],"y":[1]})"), SchemaError);
    CHECK_THROWS_AS(parse_instance(R"({"n":2,"d":1,"x":[[1],[2]],"y":[1, NaN]})"), ParseError);
    CHECK_THROWS_AS(parse_instance(R"({"n":2,"d":1,"x":[[1],[2]],"y":[1, 2)"), ParseError);
    CHECK_THROWS_AS(parse_instance(R"({"n":2,"d":2,"x":[[1],[2]],"y":[1,2]})"), SchemaError);
    CHECK_THROWS_AS(parse_instance(R"({"n":2,"d":1,"x":[[1],["a"]],"y":[1,2]})"), SchemaError);
}

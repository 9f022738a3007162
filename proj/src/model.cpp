#include "shufreg/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "shufreg/errors.hpp"
#include "shufreg/rng.hpp"

namespace shufreg {

Permutation::Permutation(std::vector<std::size_t> map) : map_(std::move(map)) {
    if (!is_bijection(map_)) throw ArgumentError("Permutation: map is not a bijection");
}

Permutation Permutation::identity(std::size_t m) {
    std::vector<std::size_t> map(m);
    std::iota(map.begin(), map.end(), std::size_t{0});
    return Permutation(std::move(map));
}

Permutation Permutation::inverse() const {
    std::vector<std::size_t> inv(map_.size());
    for (std::size_t i = 0; i < map_.size(); ++i) inv[map_[i]] = i;
    return Permutation(std::move(inv));
}

bool Permutation::is_bijection(std::span<const std::size_t> map) {
    std::vector<bool> seen(map.size(), false);
    for (std::size_t v : map) {
        if (v >= map.size() || seen[v]) return false;
        seen[v] = true;
    }
    return true;
}

namespace {

void check_finite(const Eigen::MatrixXd& m, const char* what) {
    if (!m.allFinite()) throw SchemaError(std::string(what) + " contains a non-finite entry");
}

/// Plain left-to-right dot product; the generators and the exactness checks
/// must agree bit for bit, so this avoids any vectorized reassociation.
double row_dot(const Eigen::MatrixXd& X, Eigen::Index row, const Eigen::VectorXd& w) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < X.cols(); ++j) s += X(row, j) * w(j);
    return s;
}

void check_dims(std::size_t n, std::size_t d, const Eigen::VectorXd& w_bar) {
    if (n < 1) throw ArgumentError("n must be at least 1");
    if (d < 1) throw ArgumentError("d must be at least 1");
    if (static_cast<std::size_t>(w_bar.size()) != d)
        throw ArgumentError("w_bar has length " + std::to_string(w_bar.size()) + ", expected d = " +
                            std::to_string(d));
    if (!w_bar.allFinite()) throw ArgumentError("w_bar contains a non-finite entry");
}

template <typename Draw>
std::pair<Instance, GroundTruth> gen_noisy(std::size_t n, std::size_t d, const Eigen::VectorXd& w_bar,
                                           double sigma, std::uint64_t seed, Draw draw) {
    check_dims(n, d, w_bar);
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ArgumentError("sigma must be finite and >= 0");

    Rng cov_rng(seed, Stream::Covariates);
    Instance inst;
    inst.X.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < inst.X.rows(); ++i)
        for (Eigen::Index j = 0; j < inst.X.cols(); ++j) inst.X(i, j) = draw(cov_rng);

    GroundTruth truth;
    truth.w_bar = w_bar;
    truth.pi_bar = random_permutation(n, derive_seed(seed, {static_cast<std::uint64_t>(Stream::Permutation)}));
    truth.sigma = sigma;
    truth.snr = snr_of(w_bar, sigma);

    Rng noise_rng(seed, Stream::Noise);
    inst.y.resize(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        double yi = row_dot(inst.X, static_cast<Eigen::Index>(truth.pi_bar[i]), w_bar);
        if (sigma > 0.0) yi += sigma * noise_rng.normal();
        inst.y(static_cast<Eigen::Index>(i)) = yi;
    }
    return {std::move(inst), std::move(truth)};
}

}  // namespace

void Instance::validate() const {
    if (X.rows() != y.size())
        throw SchemaError("X has " + std::to_string(X.rows()) + " rows but y has length " +
                          std::to_string(y.size()));
    if (X.rows() < 1 || X.cols() < 1) throw SchemaError("instance must have n >= 1 and d >= 1");
    check_finite(X, "X");
    check_finite(y, "y");
}

void AnchoredInstance::validate() const {
    if (X.rows() != y.size())
        throw SchemaError("X has " + std::to_string(X.rows()) + " rows but y has length " +
                          std::to_string(y.size()));
    if (x0.size() != X.cols())
        throw SchemaError("x0 has length " + std::to_string(x0.size()) + ", expected d = " +
                          std::to_string(X.cols()));
    if (X.cols() < 1) throw SchemaError("instance must have d >= 1");
    check_finite(X, "X");
    check_finite(y, "y");
    check_finite(x0, "x0");
    if (!std::isfinite(y0)) throw SchemaError("y0 is not finite");
}

Instance AnchoredInstance::flatten() const {
    Instance out;
    out.X.resize(X.rows() + 1, X.cols());
    out.X.row(0) = x0.transpose();
    out.X.bottomRows(X.rows()) = X;
    out.y.resize(y.size() + 1);
    out.y(0) = y0;
    out.y.tail(y.size()) = y;
    return out;
}

double snr_of(const Eigen::VectorXd& w_bar, double sigma) {
    if (sigma == 0.0) return std::numeric_limits<double>::infinity();
    return w_bar.squaredNorm() / (sigma * sigma);
}

Rational quantize(double value, QuantizationConfig cfg) {
    if (cfg.p < 1) throw ArgumentError("quantization requires p >= 1");
    if (!std::isfinite(value)) throw ArgumentError("cannot quantize a non-finite value");
    // Scaling by a power of two is exact; nearbyint rounds ties to even under
    // the default rounding mode.
    const double scaled = std::ldexp(value, cfg.p);
    const double m = std::nearbyint(scaled);
    return exact(m) * pow2(-cfg.p);
}

Rational quantize(const Rational& value, QuantizationConfig cfg) {
    if (cfg.p < 1) throw ArgumentError("quantization requires p >= 1");
    const Rational scaled = value * pow2(cfg.p);
    BigInt floor_num;
    mpz_fdiv_q(floor_num.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
    const Rational frac = scaled - Rational(floor_num);
    BigInt m = floor_num;
    const int cmp_half = cmp(frac, Rational(1, 2));
    if (cmp_half > 0 || (cmp_half == 0 && mpz_odd_p(floor_num.get_mpz_t()))) m += 1;
    return Rational(m) * pow2(-cfg.p);
}

RationalInstance quantize(const Instance& instance, QuantizationConfig cfg) {
    RationalInstance out{QMatrix(instance.n(), instance.d()), QVector(instance.n())};
    for (std::size_t i = 0; i < instance.n(); ++i) {
        for (std::size_t j = 0; j < instance.d(); ++j)
            out.X(i, j) = quantize(instance.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)), cfg);
        out.y[i] = quantize(instance.y(static_cast<Eigen::Index>(i)), cfg);
    }
    return out;
}

RationalInstance quantize(const RationalInstance& instance, QuantizationConfig cfg) {
    RationalInstance out{QMatrix(instance.X.rows(), instance.X.cols()), QVector(instance.y.size())};
    for (std::size_t i = 0; i < instance.X.rows(); ++i)
        for (std::size_t j = 0; j < instance.X.cols(); ++j) out.X(i, j) = quantize(instance.X(i, j), cfg);
    for (std::size_t i = 0; i < instance.y.size(); ++i) out.y[i] = quantize(instance.y[i], cfg);
    return out;
}

RationalAnchoredInstance quantize(const AnchoredInstance& instance, QuantizationConfig cfg) {
    RationalAnchoredInstance out;
    out.x0.resize(instance.d());
    for (std::size_t j = 0; j < instance.d(); ++j) out.x0[j] = quantize(instance.x0(static_cast<Eigen::Index>(j)), cfg);
    out.y0 = quantize(instance.y0, cfg);
    const RationalInstance body = quantize(Instance{instance.X, instance.y}, cfg);
    out.X = body.X;
    out.y = body.y;
    return out;
}

RationalInstance to_rational(const Instance& instance) {
    RationalInstance out{QMatrix(instance.n(), instance.d()), QVector(instance.n())};
    for (std::size_t i = 0; i < instance.n(); ++i) {
        for (std::size_t j = 0; j < instance.d(); ++j)
            out.X(i, j) = exact(instance.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
        out.y[i] = exact(instance.y(static_cast<Eigen::Index>(i)));
    }
    return out;
}

RationalAnchoredInstance to_rational(const AnchoredInstance& instance) {
    RationalAnchoredInstance out;
    const RationalInstance body = to_rational(Instance{instance.X, instance.y});
    out.X = body.X;
    out.y = body.y;
    out.y0 = exact(instance.y0);
    out.x0 = exact(std::vector<double>(instance.x0.data(), instance.x0.data() + instance.x0.size()));
    return out;
}

Eigen::VectorXd to_double(const QVector& v) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i].get_d();
    return out;
}

std::pair<Instance, GroundTruth> gen_gaussian_noisy(std::size_t n, std::size_t d, const Eigen::VectorXd& w_bar,
                                                    double sigma, std::uint64_t seed) {
    return gen_noisy(n, d, w_bar, sigma, seed, [](Rng& rng) { return rng.normal(); });
}

std::pair<Instance, GroundTruth> gen_uniform_noisy(std::size_t n, std::size_t d, const Eigen::VectorXd& w_bar,
                                                   double sigma, std::uint64_t seed) {
    return gen_noisy(n, d, w_bar, sigma, seed, [](Rng& rng) { return rng.uniform(-0.5, 0.5); });
}

std::pair<AnchoredInstance, GroundTruth> gen_noiseless_anchored(std::size_t n, std::size_t d,
                                                                const Eigen::VectorXd& w_bar, std::uint64_t seed,
                                                                NoiselessOptions options) {
    check_dims(n, d, w_bar);
    if (n < d) throw ArgumentError("noiseless model requires n >= d");

    Rng cov_rng(seed, Stream::Covariates);
    Eigen::MatrixXd all(static_cast<Eigen::Index>(n + 1), static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < all.rows(); ++i)
        for (Eigen::Index j = 0; j < all.cols(); ++j) all(i, j) = cov_rng.normal();
    Eigen::VectorXd w = w_bar;

    if (options.quantization_bits) {
        const QuantizationConfig cfg{*options.quantization_bits};
        for (Eigen::Index i = 0; i < all.rows(); ++i)
            for (Eigen::Index j = 0; j < all.cols(); ++j) all(i, j) = quantize(all(i, j), cfg).get_d();
        for (Eigen::Index j = 0; j < w.size(); ++j) w(j) = quantize(w(j), cfg).get_d();
    }

    const std::uint64_t perm_seed = derive_seed(seed, {static_cast<std::uint64_t>(Stream::Permutation)});
    std::vector<std::size_t> map(n + 1);
    if (options.anchored) {
        const Permutation rest = random_permutation(n, perm_seed);
        map[0] = 0;
        for (std::size_t i = 0; i < n; ++i) map[i + 1] = rest[i] + 1;
    } else {
        map = random_permutation(n + 1, perm_seed).map();
    }

    GroundTruth truth;
    truth.w_bar = w;
    truth.pi_bar = Permutation(std::move(map));
    truth.sigma = 0.0;
    truth.snr = std::numeric_limits<double>::infinity();
    truth.anchor = truth.pi_bar[0];

    Eigen::VectorXd ys(static_cast<Eigen::Index>(n + 1));
    for (std::size_t i = 0; i <= n; ++i)
        ys(static_cast<Eigen::Index>(i)) = row_dot(all, static_cast<Eigen::Index>(truth.pi_bar[i]), w);

    if (options.quantization_bits) {
        // The quantized values are dyadic with few significant bits, so the
        // double evaluation above should be exact. Verify it.
        const QVector wq = exact(std::vector<double>(w.data(), w.data() + w.size()));
        for (std::size_t i = 0; i <= n; ++i) {
            Rational yi = 0;
            for (std::size_t j = 0; j < d; ++j)
                yi += exact(all(static_cast<Eigen::Index>(truth.pi_bar[i]), static_cast<Eigen::Index>(j))) * wq[j];
            if (yi != exact(ys(static_cast<Eigen::Index>(i))))
                throw ArgumentError("quantized responses are not exactly representable; lower quantization_bits");
        }
    }

    AnchoredInstance inst;
    inst.x0 = all.row(0).transpose();
    inst.X = all.bottomRows(static_cast<Eigen::Index>(n));
    inst.y0 = ys(0);
    inst.y = ys.tail(static_cast<Eigen::Index>(n));
    return {std::move(inst), std::move(truth)};
}

Eigen::VectorXd random_weights(std::size_t d, double norm, std::uint64_t seed) {
    if (d < 1) throw ArgumentError("d must be at least 1");
    Rng rng(seed, Stream::Weights);
    Eigen::VectorXd w(static_cast<Eigen::Index>(d));
    double sq = 0.0;
    do {
        for (Eigen::Index j = 0; j < w.size(); ++j) w(j) = rng.normal();
        sq = w.squaredNorm();
    } while (sq == 0.0);
    return w * (norm / std::sqrt(sq));
}

Permutation random_permutation(std::size_t m, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::size_t> map(m);
    std::iota(map.begin(), map.end(), std::size_t{0});
    for (std::size_t i = m; i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.below(i));
        std::swap(map[i - 1], map[j]);
    }
    return Permutation(std::move(map));
}

double permuted_cost(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Eigen::VectorXd& w,
                     const Permutation& perm) {
    if (static_cast<std::size_t>(X.rows()) != perm.size() || y.size() != X.rows() || w.size() != X.cols())
        throw ArgumentError("permuted_cost: shape mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < perm.size(); ++i) {
        const double r = y(static_cast<Eigen::Index>(i)) - row_dot(X, static_cast<Eigen::Index>(perm[i]), w);
        s += r * r;
    }
    return s;
}

Eigen::MatrixXd permute_rows(const Eigen::MatrixXd& X, const Permutation& perm) {
    Eigen::MatrixXd out(X.rows(), X.cols());
    for (std::size_t i = 0; i < perm.size(); ++i)
        out.row(static_cast<Eigen::Index>(i)) = X.row(static_cast<Eigen::Index>(perm[i]));
    return out;
}

Eigen::VectorXd unpermute(const Eigen::VectorXd& y, const Permutation& perm) {
    Eigen::VectorXd out(y.size());
    for (std::size_t i = 0; i < perm.size(); ++i)
        out(static_cast<Eigen::Index>(perm[i])) = y(static_cast<Eigen::Index>(i));
    return out;
}

}  // namespace shufreg

#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "shufreg/rational.hpp"

namespace shufreg {

/// A bijection on {0, ..., m-1}, stored as map[i] = pi(i).
///
/// Throughout the library a permutation attached to an instance pairs
/// response i with covariate row perm[i]: y_i ~ w^T x_{perm[i]}.
class Permutation {
public:
    Permutation() = default;
    /// Throws ArgumentError unless map is a bijection.
    explicit Permutation(std::vector<std::size_t> map);

    static Permutation identity(std::size_t m);

    std::size_t size() const noexcept { return map_.size(); }
    std::size_t operator[](std::size_t i) const { return map_[i]; }
    const std::vector<std::size_t>& map() const noexcept { return map_; }
    Permutation inverse() const;

    static bool is_bijection(std::span<const std::size_t> map);

    friend bool operator==(const Permutation&, const Permutation&) = default;

private:
    std::vector<std::size_t> map_;
};

/// n covariate rows and n responses with unknown pairing.
struct Instance {
    Eigen::MatrixXd X;  // n x d
    Eigen::VectorXd y;  // n

    std::size_t n() const noexcept { return static_cast<std::size_t>(X.rows()); }
    std::size_t d() const noexcept { return static_cast<std::size_t>(X.cols()); }

    /// Throws SchemaError when shapes disagree or an entry is not finite.
    void validate() const;
};

/// The n+1 measurements of the noiseless model. Row 0 is split out as the
/// anchor (x0, y0); X and y hold measurements 1..n.
struct AnchoredInstance {
    Eigen::VectorXd x0;
    Eigen::MatrixXd X;
    double y0 = 0.0;
    Eigen::VectorXd y;

    std::size_t n() const noexcept { return static_cast<std::size_t>(X.rows()); }
    std::size_t d() const noexcept { return static_cast<std::size_t>(X.cols()); }

    void validate() const;
    /// All n+1 measurements stacked with the anchor first.
    Instance flatten() const;
};

struct GroundTruth {
    Eigen::VectorXd w_bar;
    Permutation pi_bar;
    double sigma = 0.0;
    /// ||w_bar||^2 / sigma^2, +infinity when sigma == 0.
    double snr = std::numeric_limits<double>::infinity();
    /// Set by the noiseless generator: the covariate index that response 0
    /// is paired with (pi_bar(0)).
    std::optional<std::size_t> anchor;
};

double snr_of(const Eigen::VectorXd& w_bar, double sigma);

struct QuantizationConfig {
    int p = 16;  // fractional bits
};

/// Exact-rational counterparts of the instance types.
struct RationalInstance {
    QMatrix X;
    QVector y;
};

struct RationalAnchoredInstance {
    QVector x0;
    QMatrix X;
    Rational y0;
    QVector y;

    std::size_t n() const noexcept { return X.rows(); }
    std::size_t d() const noexcept { return X.cols(); }
};

/// Nearest multiple of 2^-p, ties to the even multiple.
Rational quantize(double value, QuantizationConfig cfg);
/// Entry-wise quantization; every entry is replaced independently.
RationalInstance quantize(const Instance& instance, QuantizationConfig cfg);
RationalAnchoredInstance quantize(const AnchoredInstance& instance, QuantizationConfig cfg);
/// Quantization of an exact value to the same grid.
Rational quantize(const Rational& value, QuantizationConfig cfg);
RationalInstance quantize(const RationalInstance& instance, QuantizationConfig cfg);

/// Exact (lossless) conversion of double data.
RationalInstance to_rational(const Instance& instance);
RationalAnchoredInstance to_rational(const AnchoredInstance& instance);
Eigen::VectorXd to_double(const QVector& v);

/// Options for the noiseless generator.
struct NoiselessOptions {
    /// When true, pi_bar(0) = 0 is forced; otherwise pi_bar is uniform over
    /// all permutations of {0..n} and the anchor index is recorded.
    bool anchored = true;
    /// When set, covariates and w_bar are first quantized to this many
    /// fractional bits and the responses are recomputed from the quantized
    /// values; the result is then exactly consistent in rational arithmetic.
    std::optional<int> quantization_bits;
};

/// Gaussian covariates, uniform pi_bar, Gaussian noise of standard deviation sigma.
std::pair<Instance, GroundTruth> gen_gaussian_noisy(std::size_t n, std::size_t d,
                                                    const Eigen::VectorXd& w_bar, double sigma,
                                                    std::uint64_t seed);

/// As gen_gaussian_noisy with covariates uniform on [-1/2, 1/2].
std::pair<Instance, GroundTruth> gen_uniform_noisy(std::size_t n, std::size_t d,
                                                   const Eigen::VectorXd& w_bar, double sigma,
                                                   std::uint64_t seed);

/// Noiseless model with n+1 Gaussian measurements. GroundTruth::pi_bar is a
/// permutation of {0..n} indexed the same way as AnchoredInstance::flatten().
std::pair<AnchoredInstance, GroundTruth> gen_noiseless_anchored(std::size_t n, std::size_t d,
                                                                const Eigen::VectorXd& w_bar,
                                                                std::uint64_t seed,
                                                                NoiselessOptions options = {});

/// Uniformly random direction scaled to the requested norm.
Eigen::VectorXd random_weights(std::size_t d, double norm, std::uint64_t seed);

/// Fisher-Yates shuffle of {0..m-1}.
Permutation random_permutation(std::size_t m, std::uint64_t seed);

/// sum_i (y_i - w^T x_{perm[i]})^2
double permuted_cost(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Eigen::VectorXd& w,
                     const Permutation& perm);

/// Rows of X reordered so that row i is x_{perm[i]} (the matrix Pi X).
Eigen::MatrixXd permute_rows(const Eigen::MatrixXd& X, const Permutation& perm);
/// Vector v with entry perm[i] set to y_i (the vector Pi^T y).
Eigen::VectorXd unpermute(const Eigen::VectorXd& y, const Permutation& perm);

}  // namespace shufreg

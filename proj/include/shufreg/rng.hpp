#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <optional>

namespace shufreg {

/// SplitMix64 finalizer. Used for seeding and for deriving child seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Derives a child seed from a parent seed and a list of integer labels.
/// Deterministic and order sensitive: derive_seed(s, {a, b}) != derive_seed(s, {b, a})
/// in general.
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> labels) noexcept;

/// Independent streams used by the instance generators. Each field of a
/// generated instance draws from its own stream so that, e.g., the covariates
/// for a given seed do not depend on the noise level.
enum class Stream : std::uint64_t {
    Covariates = 1,
    Permutation = 2,
    Noise = 3,
    Weights = 4,
    Auxiliary = 5,
};

/// xoshiro256** with SplitMix64 seeding. Normal variates come from the
/// Box-Muller transform (both outputs of a pair are used, cos first).
/// Sequences are identical on every platform with an IEEE-754 libm.
class Rng {
public:
    explicit Rng(std::uint64_t seed) noexcept;
    Rng(std::uint64_t seed, Stream stream) noexcept;

    std::uint64_t next_u64() noexcept;
    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept;
    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) noexcept;
    /// Unbiased uniform integer in [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound) noexcept;
    double normal() noexcept;

private:
    std::array<std::uint64_t, 4> s_{};
    std::optional<double> spare_normal_;
};

}  // namespace shufreg

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "shufreg/model.hpp"

namespace shufreg {

/// 3k integers to be split into k triples of equal sum C.
struct ThreePartitionInstance {
    std::vector<std::int64_t> z;
    std::size_t k = 0;
    std::int64_t C = 0;

    /// Throws ArgumentError naming the violated constraint
    /// ("len(z) = 3k", "sum z_i = C*k" or "C/4 < z_i < C/2").
    void validate() const;
};

/// Integer system A x = b_pi with n = 4k rows and d = 3k columns.
struct PlsInstance {
    std::vector<std::vector<std::int64_t>> A;  // row-major, n x d
    std::vector<std::int64_t> b;

    std::size_t n() const noexcept { return A.size(); }
    std::size_t d() const noexcept { return A.empty() ? 0 : A.front().size(); }
    /// The same data as a floating-point instance (A as covariates, b as responses).
    Instance to_instance() const;
};

/// Identity block over k triple-indicator rows; b = (z_1..z_d, C, ..., C).
PlsInstance reduce_3partition(const ThreePartitionInstance& tp);

/// Exhaustive search over triple partitions. Refuses k > 4.
bool check_3partition_brute(const ThreePartitionInstance& tp);

/// Exact decision: is some rearrangement of b in the column space of A?
/// Refuses n > 8.
bool pls_feasible_brute(const PlsInstance& pls);

/// Yes-instance with k planted triples summing to C, shuffled.
ThreePartitionInstance planted_3partition(std::size_t k, std::int64_t C, std::uint64_t seed);

}  // namespace shufreg

#pragma once

#include <cstddef>
#include <vector>

#include "shufreg/rational.hpp"

namespace shufreg {

using IntVector = std::vector<BigInt>;

/// A lattice given by integer basis columns. `scale` records the factor the
/// rational data was multiplied by to make the basis integral (1 for plain
/// integer lattices).
struct LatticeBasis {
    std::vector<IntVector> columns;
    BigInt scale = 1;

    std::size_t rank() const noexcept { return columns.size(); }
    std::size_t dim() const noexcept { return columns.empty() ? 0 : columns.front().size(); }
};

BigInt dot(const IntVector& a, const IntVector& b);
BigInt squared_norm(const IntVector& v);

struct LllOptions {
    /// Lovasz parameter, must lie in (1/4, 1).
    Rational delta = Rational(3, 4);
};

struct LllStats {
    std::size_t swaps = 0;
    std::size_t size_reductions = 0;
};

/// Exact-integer LLL reduction (integral Gram-Schmidt with the d_i / lambda_ij
/// recurrences, no floating point anywhere). The output spans the same
/// lattice, is size reduced and satisfies the Lovasz condition for every
/// adjacent pair. When `transform` is non-null it receives the unimodular
/// matrix T (column j of the output = sum_i T[i][j] * input column i).
/// Throws ArgumentError on linearly dependent columns.
LatticeBasis lll_reduce(const LatticeBasis& basis, const LllOptions& options = {},
                        std::vector<IntVector>* transform = nullptr, LllStats* stats = nullptr);

}  // namespace shufreg

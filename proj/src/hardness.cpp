#include "shufreg/hardness.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <string>

#include "shufreg/errors.hpp"
#include "shufreg/rational.hpp"
#include "shufreg/rng.hpp"

namespace shufreg {

void ThreePartitionInstance::validate() const {
    if (k == 0) throw ArgumentError("3-partition: k must be positive");
    if (z.size() != 3 * k) throw ArgumentError("3-partition: constraint len(z) = 3k violated");
    const std::int64_t sum = std::accumulate(z.begin(), z.end(), std::int64_t{0});
    if (sum != C * static_cast<std::int64_t>(k)) throw ArgumentError("3-partition: constraint sum z_i = C*k violated");
    for (std::size_t i = 0; i < z.size(); ++i) {
        // C/4 < z_i < C/2 in integers: 4 z_i > C and 2 z_i < C.
        if (!(4 * z[i] > C && 2 * z[i] < C))
            throw ArgumentError("3-partition: constraint C/4 < z_i < C/2 violated at z[" + std::to_string(i) +
                                "] = " + std::to_string(z[i]));
    }
}

Instance PlsInstance::to_instance() const {
    Instance inst;
    inst.X.resize(static_cast<Eigen::Index>(n()), static_cast<Eigen::Index>(d()));
    inst.y.resize(static_cast<Eigen::Index>(n()));
    for (std::size_t i = 0; i < n(); ++i) {
        for (std::size_t j = 0; j < d(); ++j)
            inst.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = static_cast<double>(A[i][j]);
        inst.y(static_cast<Eigen::Index>(i)) = static_cast<double>(b[i]);
    }
    return inst;
}

PlsInstance reduce_3partition(const ThreePartitionInstance& tp) {
    tp.validate();
    const std::size_t d = 3 * tp.k, n = d + tp.k;
    PlsInstance pls;
    pls.A.assign(n, std::vector<std::int64_t>(d, 0));
    pls.b.resize(n);
    for (std::size_t i = 0; i < d; ++i) {
        pls.A[i][i] = 1;
        pls.b[i] = tp.z[i];
    }
    for (std::size_t j = 0; j < tp.k; ++j) {
        for (std::size_t t = 0; t < 3; ++t) pls.A[d + j][3 * j + t] = 1;
        pls.b[d + j] = tp.C;
    }
    return pls;
}

namespace {

bool split_triples(const std::vector<std::int64_t>& z, std::vector<bool>& used, std::int64_t C) {
    const auto first = std::find(used.begin(), used.end(), false);
    if (first == used.end()) return true;
    const std::size_t a = static_cast<std::size_t>(first - used.begin());
    used[a] = true;
    for (std::size_t b = a + 1; b < z.size(); ++b) {
        if (used[b]) continue;
        used[b] = true;
        for (std::size_t c = b + 1; c < z.size(); ++c) {
            if (used[c] || z[a] + z[b] + z[c] != C) continue;
            used[c] = true;
            if (split_triples(z, used, C)) return true;
            used[c] = false;
        }
        used[b] = false;
    }
    used[a] = false;
    return false;
}

/// Rows spanning {v : v^T A = 0}, from elimination on [A | I].
std::vector<QVector> left_nullspace(const PlsInstance& pls) {
    const std::size_t n = pls.n(), d = pls.d();
    std::vector<QVector> rows(n, QVector(d + n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) rows[i][j] = pls.A[i][j];
        rows[i][d + i] = 1;
    }
    std::size_t pivot_row = 0;
    for (std::size_t col = 0; col < d && pivot_row < n; ++col) {
        std::size_t p = pivot_row;
        while (p < n && sgn(rows[p][col]) == 0) ++p;
        if (p == n) continue;
        std::swap(rows[p], rows[pivot_row]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == pivot_row || sgn(rows[r][col]) == 0) continue;
            const Rational f = rows[r][col] / rows[pivot_row][col];
            for (std::size_t c = 0; c < d + n; ++c) rows[r][c] -= f * rows[pivot_row][c];
        }
        ++pivot_row;
    }
    std::vector<QVector> out;
    for (std::size_t r = pivot_row; r < n; ++r) out.emplace_back(rows[r].begin() + static_cast<std::ptrdiff_t>(d), rows[r].end());
    return out;
}

}  // namespace

bool check_3partition_brute(const ThreePartitionInstance& tp) {
    tp.validate();
    if (tp.k > 4) throw RefusalError("check_3partition_brute: k = " + std::to_string(tp.k) + " exceeds the cap of 4");
    std::vector<bool> used(tp.z.size(), false);
    return split_triples(tp.z, used, tp.C);
}

bool pls_feasible_brute(const PlsInstance& pls) {
    const std::size_t n = pls.n();
    if (n == 0 || pls.b.size() != n) throw ArgumentError("pls_feasible_brute: shape mismatch");
    for (const auto& row : pls.A)
        if (row.size() != pls.d()) throw ArgumentError("pls_feasible_brute: ragged matrix");
    if (n > 8) throw RefusalError("pls_feasible_brute: n = " + std::to_string(n) + " exceeds the cap of 8");

    const std::vector<QVector> null = left_nullspace(pls);
    // Distinct rearrangements of b are enough.
    std::vector<std::int64_t> b = pls.b;
    std::sort(b.begin(), b.end());
    do {
        const bool in_span = std::all_of(null.begin(), null.end(), [&](const QVector& v) {
            Rational s = 0;
            for (std::size_t i = 0; i < n; ++i) s += v[i] * b[i];
            return sgn(s) == 0;
        });
        if (in_span) return true;
    } while (std::next_permutation(b.begin(), b.end()));
    return false;
}

ThreePartitionInstance planted_3partition(std::size_t k, std::int64_t C, std::uint64_t seed) {
    if (k == 0) throw ArgumentError("planted_3partition: k must be positive");
    const std::int64_t lo = C / 4 + 1, hi = (C - 1) / 2;
    std::vector<std::array<std::int64_t, 3>> triples;
    for (std::int64_t a = lo; a <= hi; ++a)
        for (std::int64_t b = lo; b <= hi; ++b) {
            const std::int64_t c = C - a - b;
            if (4 * c > C && 2 * c < C) triples.push_back({a, b, c});
        }
    if (triples.empty()) throw ArgumentError("planted_3partition: no triple satisfies C/4 < z_i < C/2 for this C");

    Rng rng(seed, Stream::Auxiliary);
    ThreePartitionInstance tp;
    tp.k = k;
    tp.C = C;
    for (std::size_t j = 0; j < k; ++j) {
        const auto& t = triples[rng.below(triples.size())];
        tp.z.insert(tp.z.end(), t.begin(), t.end());
    }
    for (std::size_t i = tp.z.size(); i > 1; --i) std::swap(tp.z[i - 1], tp.z[rng.below(i)]);
    return tp;
}

}  // namespace shufreg

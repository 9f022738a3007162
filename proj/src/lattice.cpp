#include "shufreg/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "shufreg/errors.hpp"

namespace shufreg {

namespace {

double log2_of(const BigInt& z) {
    long exp = 0;
    const double mant = mpz_get_d_2exp(&exp, z.get_mpz_t());
    return std::log2(std::abs(mant)) + static_cast<double>(exp);
}

double log2_of(const Rational& q) {
    return log2_of(q.get_num()) - log2_of(q.get_den());
}

BigInt lcm_of_denominators(const QVector& values) {
    BigInt l = 1;
    for (const Rational& v : values) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
    return l;
}

/// Whether beta * eps >= 2^(n^2 / 2), i.e. (beta * eps)^2 >= 2^(n^2).
bool beta_meets_half_exponent(std::size_t n, const Rational& eps, const Rational& beta) {
    const Rational be = beta * eps;
    return be * be >= pow2(static_cast<long>(n * n));
}

Eigen::VectorXd as_doubles(const QVector& v) {
    return to_double(v);
}

bool all_zero(const QVector& v) {
    return std::all_of(v.begin(), v.end(), [](const Rational& q) { return sgn(q) == 0; });
}

}  // namespace

void SubsetSumInstance::validate() const {
    if (sources.empty()) throw ArgumentError("subset-sum instance has no sources");
    if (sgn(beta) <= 0) throw ArgumentError("subset-sum instance requires beta > 0");
}

LatticeBasis subset_sum_basis(const SubsetSumInstance& ssi) {
    ssi.validate();
    const std::size_t m = ssi.sources.size();
    QVector bottom(m + 1);
    bottom[0] = ssi.beta * ssi.target;
    for (std::size_t j = 0; j < m; ++j) bottom[j + 1] = -ssi.beta * ssi.sources[j];
    const BigInt scale = lcm_of_denominators(bottom);

    LatticeBasis basis;
    basis.scale = scale;
    basis.columns.assign(m + 1, IntVector(m + 2, 0));
    for (std::size_t j = 0; j <= m; ++j) {
        basis.columns[j][j] = 1;
        const Rational scaled = bottom[j] * scale;
        basis.columns[j][m + 1] = scaled.get_num();
    }
    return basis;
}

bool decode_subset_vector(const IntVector& v, std::vector<std::size_t>& subset) {
    if (v.size() < 2) return false;
    const BigInt& z = v.front();
    if (z == 0 || v.back() != 0) return false;
    subset.clear();
    for (std::size_t j = 1; j + 1 < v.size(); ++j) {
        if (v[j] == z) {
            subset.push_back(j - 1);
        } else if (v[j] != 0) {
            return false;
        }
    }
    return true;
}

SubsetSumResult lagarias_odlyzko(const SubsetSumInstance& ssi, const LagariasOdlyzkoOptions& options) {
    const LatticeBasis reduced = lll_reduce(subset_sum_basis(ssi), options.lll);
    SubsetSumResult out;
    std::vector<std::size_t> subset;
    const std::size_t scan = options.scan_all ? reduced.rank() : 1;
    for (std::size_t c = 0; c < scan; ++c) {
        if (!decode_subset_vector(reduced.columns[c], subset)) continue;
        Rational sum = 0;
        for (std::size_t i : subset) sum += ssi.sources[i];
        if (sum != ssi.target) continue;
        out.subset = subset;
        out.from_fallback = c != 0;
        return out;
    }
    return out;
}

SubsetSumInstance build_sources(const QVector& x0, const QMatrix& X, const QVector& y, const Rational& y0) {
    const std::size_t n = X.rows(), d = X.cols();
    if (x0.size() != d || y.size() != n) throw ArgumentError("build_sources: shape mismatch");
    if (n < d) throw ArgumentError("build_sources: requires n >= d");
    if (rank(X) < d) throw RankError("build_sources: covariate matrix has rank below d");

    const QMatrix Xt = X.transpose();
    const std::optional<QMatrix> gram_inv = inverse(Xt * X);
    if (!gram_inv) throw RankError("build_sources: X^T X is singular");
    const QMatrix pinv = *gram_inv * Xt;  // d x n, column j is xt_j

    QVector proj(n);
    for (std::size_t j = 0; j < n; ++j) proj[j] = dot(pinv.col(j), x0);

    SubsetSumInstance ssi;
    ssi.sources.resize(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) ssi.sources[i * n + j] = y[i] * proj[j];
    ssi.target = y0;
    ssi.beta = 1;
    return ssi;
}

double w_norm_lower_bound(const Eigen::VectorXd& y) {
    if (y.size() < 1) throw ArgumentError("w_norm_lower_bound: empty response vector");
    return std::sqrt(y.squaredNorm() / (2.0 * static_cast<double>(y.size())));
}

double log2_epsilon_bound(std::size_t n, std::size_t d, double delta, double w_norm_lb, double zr_exponent) {
    if (d < 2) throw ArgumentError("epsilon_bound: d = 1 is unsupported (the exponent 1/(d-1) is undefined)");
    if (n < d) throw ArgumentError("epsilon_bound: requires n >= d");
    if (!(delta > 0.0 && delta < 1.0)) throw ArgumentError("epsilon_bound: delta must lie in (0, 1)");
    if (!(w_norm_lb > 0.0) || !std::isfinite(w_norm_lb)) throw ArgumentError("epsilon_bound: w_norm_lb must be positive");
    if (!(zr_exponent > 0.0)) throw ArgumentError("epsilon_bound: zr_exponent must be positive");

    const double nd = static_cast<double>(n), dd = static_cast<double>(d);
    const double power = 2.0 + 1.0 / (dd - 1.0);
    // log2(delta / (6 |Z_R|)) with |Z_R| = 2^(K n^4)
    const double log2_eta = std::log2(delta / 6.0) - zr_exponent * nd * nd * nd * nd;
    const double spread = std::sqrt(nd) + std::sqrt(dd) + std::sqrt(2.0 * std::log(2.0 / delta));
    return std::log2(std::numbers::pi / 4.0) + 0.5 * std::log2((dd - 1.0) / nd) + power * log2_eta -
           2.0 * std::log2(spread) + std::log2(w_norm_lb);
}

Rational epsilon_bound(std::size_t n, std::size_t d, double delta, double w_norm_lb, double zr_exponent) {
    return pow2_lower_bound(log2_epsilon_bound(n, d, delta, w_norm_lb, zr_exponent));
}

Rational beta_for(std::size_t n, const Rational& eps, BetaPolicy policy) {
    if (sgn(eps) <= 0) throw ArgumentError("beta_for: eps must be positive");
    const long n2 = static_cast<long>(n * n);
    auto meets = [&](long e) {
        const Rational be = pow2(e) * eps;
        if (policy == BetaPolicy::FullExponent) return be >= pow2(n2);
        return be * be >= pow2(n2);
    };
    const double target = (policy == BetaPolicy::FullExponent ? static_cast<double>(n2) : 0.5 * static_cast<double>(n2)) -
                          log2_of(eps);
    long e = static_cast<long>(std::ceil(target));
    while (!meets(e)) ++e;
    while (meets(e - 1)) --e;
    return pow2(e);
}

Rational recovery_epsilon(std::size_t n, std::size_t d, const QVector& y, const RecoveryOptions& options) {
    if (options.eps_override) {
        if (sgn(*options.eps_override) <= 0) throw ArgumentError("eps override must be positive");
        return *options.eps_override;
    }
    if (d < 2) throw ArgumentError("recovery with d = 1 requires an explicit eps override");
    const double lb = w_norm_lower_bound(as_doubles(y));
    if (!(lb > 0.0)) throw DegenerateInstanceError("all responses are zero; every permutation fits");
    return epsilon_bound(n, d, options.delta, lb, options.zr_exponent);
}

PermutationResult find_permutation(const RationalAnchoredInstance& anchored, const RecoveryOptions& options,
                                   const Rational& beta) {
    const std::size_t n = anchored.n();
    SubsetSumInstance ssi = build_sources(anchored.x0, anchored.X, anchored.y, anchored.y0);
    if (all_zero(ssi.sources) && sgn(ssi.target) == 0)
        throw DegenerateInstanceError("all source numbers and the target are zero");
    ssi.beta = beta;

    PermutationResult out;
    const SubsetSumResult res = lagarias_odlyzko(ssi, options.solver);
    if (!res.subset) {
        out.failure = "reduced basis has no subset vector";
        return out;
    }
    out.from_fallback = res.from_fallback;
    if (res.subset->size() != n) {
        out.failure = "subset is not a permutation support";
        return out;
    }
    std::vector<std::size_t> map(n, n);
    std::vector<bool> used(n, false);
    for (std::size_t idx : *res.subset) {
        const std::size_t i = idx / n, j = idx % n;
        if (map[i] != n || used[j]) {
            out.failure = "subset is not a permutation support";
            return out;
        }
        map[i] = j;
        used[j] = true;
    }
    out.perm = Permutation(std::move(map));
    return out;
}

PermutationResult find_permutation(const RationalAnchoredInstance& anchored, const RecoveryOptions& options) {
    const std::size_t n = anchored.n();
    const Rational eps = recovery_epsilon(n, anchored.d(), anchored.y, options);
    const Rational beta = options.beta_override ? *options.beta_override : beta_for(n, eps, options.policy);
    if (options.check_beta && !beta_meets_half_exponent(n, eps, beta))
        throw ArgumentError("find_permutation: beta is below 2^(n^2/2) / eps");
    return find_permutation(anchored, options, beta);
}

RecoveryAttempt recover(const RationalInstance& full, const RecoveryOptions& options) {
    const std::size_t rows = full.X.rows(), d = full.X.cols();
    if (rows != full.y.size()) throw ArgumentError("recover: shape mismatch");
    if (rows < 2) throw ArgumentError("recover: needs at least two measurements");
    const std::size_t n = rows - 1;
    if (n < d) throw ArgumentError("recover: requires n >= d (at least d+1 measurements)");
    if (all_zero(full.y)) throw DegenerateInstanceError("all responses are zero; every permutation fits");

    const QVector tail_y(full.y.begin() + 1, full.y.end());
    const Rational eps = recovery_epsilon(n, d, tail_y, options);
    const Rational beta = options.beta_override ? *options.beta_override : beta_for(n, eps, options.policy);
    if (options.check_beta && !beta_meets_half_exponent(n, eps, beta))
        throw ArgumentError("recover: beta is below 2^(n^2/2) / eps");

    RecoveryAttempt attempt;
    for (std::size_t a = 0; a <= n; ++a) {
        // Covariate a takes the anchor slot; covariate 0 takes slot a.
        auto original = [a](std::size_t slot) { return slot == a ? 0 : (slot == 0 ? a : slot); };
        RationalAnchoredInstance anchored;
        anchored.x0 = full.X.row(a);
        anchored.y0 = full.y[0];
        anchored.X = QMatrix(n, d);
        anchored.y = tail_y;
        for (std::size_t s = 1; s <= n; ++s)
            for (std::size_t j = 0; j < d; ++j) anchored.X(s - 1, j) = full.X(original(s), j);

        const PermutationResult pr = find_permutation(anchored, options, beta);
        if (!pr.perm) {
            attempt.failure = pr.failure;
            continue;
        }
        std::vector<std::size_t> map(n + 1);
        map[0] = a;
        for (std::size_t i = 0; i < n; ++i) map[i + 1] = original((*pr.perm)[i] + 1);
        const Permutation perm(std::move(map));

        // Normal equations over all n+1 pairs, then exact verification.
        QMatrix gram(d, d);
        QVector rhs(d);
        for (std::size_t i = 0; i <= n; ++i) {
            const QVector xi = full.X.row(perm[i]);
            for (std::size_t p = 0; p < d; ++p) {
                rhs[p] += xi[p] * full.y[i];
                for (std::size_t q = 0; q < d; ++q) gram(p, q) += xi[p] * xi[q];
            }
        }
        const std::optional<QVector> w = solve(gram, rhs);
        if (!w) {
            attempt.failure = "paired covariates are rank deficient";
            continue;
        }
        bool consistent = true;
        for (std::size_t i = 0; i <= n && consistent; ++i) consistent = dot(full.X.row(perm[i]), *w) == full.y[i];
        if (!consistent) {
            attempt.failure = "recovered pairing does not satisfy every equation";
            continue;
        }
        attempt.result = RecoveryResult{perm, *w, a, pr.from_fallback};
        attempt.failure.clear();
        return attempt;
    }
    if (attempt.failure.empty()) attempt.failure = "no anchor produced a verified solution";
    return attempt;
}

IntVector planted_coefficients(std::size_t m, const std::vector<std::size_t>& subset) {
    IntVector z(m + 1, 0);
    z[0] = 1;
    for (std::size_t j : subset) {
        if (j >= m) throw ArgumentError("planted_coefficients: index out of range");
        z[j + 1] = 1;
    }
    return z;
}

std::optional<IntVector> lattice_coordinates(const LatticeBasis& basis, const IntVector& v) {
    const std::size_t k = basis.rank(), dim = basis.dim();
    if (v.size() != dim) throw ArgumentError("lattice_coordinates: dimension mismatch");
    QMatrix gram(k, k);
    QVector rhs(k);
    for (std::size_t i = 0; i < k; ++i) {
        rhs[i] = Rational(dot(basis.columns[i], v));
        for (std::size_t j = 0; j < k; ++j) gram(i, j) = Rational(dot(basis.columns[i], basis.columns[j]));
    }
    const std::optional<QVector> z = solve(gram, rhs);
    if (!z) throw ArgumentError("lattice_coordinates: basis is linearly dependent");
    IntVector coords(k);
    for (std::size_t i = 0; i < k; ++i) {
        if ((*z)[i].get_den() != 1) return std::nullopt;
        coords[i] = (*z)[i].get_num();
    }
    for (std::size_t r = 0; r < dim; ++r) {
        BigInt s = 0;
        for (std::size_t i = 0; i < k; ++i) s += coords[i] * basis.columns[i][r];
        if (s != v[r]) return std::nullopt;
    }
    return coords;
}

}  // namespace shufreg

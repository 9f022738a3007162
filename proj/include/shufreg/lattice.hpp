#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shufreg/lll.hpp"
#include "shufreg/model.hpp"
#include "shufreg/rational.hpp"

namespace shufreg {

/// Source numbers c_i, target t, and the lattice weight beta.
struct SubsetSumInstance {
    QVector sources;
    Rational target;
    Rational beta = 1;

    /// Throws ArgumentError when beta <= 0 or there are no sources.
    void validate() const;
};

/// Columns of the subset-sum lattice, before integerization:
///   column 0 = (e_0, beta * t), column j = (e_j, -beta * c_j) for j = 1..m.
/// The bottom row is multiplied by the least common denominator of its
/// entries, which is recorded in LatticeBasis::scale; this keeps the
/// (1, chi, 0) pattern of subset vectors intact.
LatticeBasis subset_sum_basis(const SubsetSumInstance& ssi);

/// True when the integer vector v of length m+2 has the form
/// z * (1, chi, 0) with z != 0 and chi a 0/1 vector; the subset is written
/// to `subset`.
bool decode_subset_vector(const IntVector& v, std::vector<std::size_t>& subset);

struct SubsetSumResult {
    std::optional<std::vector<std::size_t>> subset;
    /// True when the subset was read off a reduced basis vector other than
    /// the first one.
    bool from_fallback = false;
};

struct LagariasOdlyzkoOptions {
    LllOptions lll;
    /// Scan every reduced vector for the subset pattern when the first one
    /// does not match.
    bool scan_all = true;
};

/// Lattice-reduction subset-sum solver. A returned subset always sums to the
/// target exactly; failure is reported as an empty optional.
SubsetSumResult lagarias_odlyzko(const SubsetSumInstance& ssi, const LagariasOdlyzkoOptions& options = {});

/// The n^2 source numbers c_(i,j) = y_i * (xt_j . x0), where xt_j is column j
/// of the exact pseudoinverse of X, indexed (i, j) -> i * n + j; target y0.
/// beta is left at 1. Throws RankError when rank(X) < d.
SubsetSumInstance build_sources(const QVector& x0, const QMatrix& X, const QVector& y, const Rational& y0);

/// sqrt(sum_i y_i^2 / (2n))
double w_norm_lower_bound(const Eigen::VectorXd& y);

/// log2 of the separation bound used to size beta, with |Z_R| replaced by
/// 2^(zr_exponent * n^4). Requires n >= d >= 2, 0 < delta < 1, w_norm_lb > 0.
double log2_epsilon_bound(std::size_t n, std::size_t d, double delta, double w_norm_lb, double zr_exponent = 1.0);

/// Exact rational lower bound on the separation bound above.
Rational epsilon_bound(std::size_t n, std::size_t d, double delta, double w_norm_lb, double zr_exponent = 1.0);

enum class BetaPolicy {
    /// beta >= 2^(n^2) / eps (the exponent in the recovery guarantee).
    FullExponent,
    /// beta >= 2^(n^2 / 2) / eps (the exponent required by the subset-sum step).
    HalfExponent,
};

struct RecoveryOptions {
    double delta = 0.1;
    BetaPolicy policy = BetaPolicy::FullExponent;
    /// Multiplier on n^4 in the crude bound on |Z_R|.
    double zr_exponent = 1.0;
    /// Required for d = 1, where the closed-form bound is undefined.
    std::optional<Rational> eps_override;
    /// Use this beta instead of the policy (still checked against the
    /// minimum 2^(n^2/2) / eps unless check_beta is false).
    std::optional<Rational> beta_override;
    bool check_beta = true;
    LagariasOdlyzkoOptions solver;
};

/// Smallest power of two that is >= 2^(exponent) / eps.
Rational beta_for(std::size_t n, const Rational& eps, BetaPolicy policy);

/// eps used to size beta for the given responses (override or closed form).
Rational recovery_epsilon(std::size_t n, std::size_t d, const QVector& y, const RecoveryOptions& options);

struct PermutationResult {
    std::optional<Permutation> perm;  // on {0..n-1}, y_i pairs with x_{perm[i]}
    bool from_fallback = false;
    std::string failure;
};

/// Recovers the pairing of an anchored exact instance (y0 pairs with x0) via
/// the subset-sum reduction. Failure (not an exception) when the reduced
/// basis does not reveal a permutation.
PermutationResult find_permutation(const RationalAnchoredInstance& anchored, const RecoveryOptions& options,
                                   const Rational& beta);
PermutationResult find_permutation(const RationalAnchoredInstance& anchored, const RecoveryOptions& options = {});

struct RecoveryResult {
    Permutation perm;  // on {0..n}: response i pairs with covariate perm[i]
    QVector w;
    std::size_t anchor = 0;
    bool from_fallback = false;
};

struct RecoveryAttempt {
    std::optional<RecoveryResult> result;
    std::string failure;
};

/// Exact recovery from n+1 unpaired measurements (rows of `full`). Tries
/// every anchor in increasing order and returns the first (w, perm) that
/// satisfies all n+1 equations exactly. Throws DegenerateInstanceError when
/// every response is zero.
RecoveryAttempt recover(const RationalInstance& full, const RecoveryOptions& options = {});

/// The planted lattice vector (1, chi, 0) as integer coefficients for the
/// basis columns: coefficient 1 for column 0 and for every column in subset.
IntVector planted_coefficients(std::size_t m, const std::vector<std::size_t>& subset);

/// Solves basis * z = v exactly; nullopt if v is not an integer combination.
std::optional<IntVector> lattice_coordinates(const LatticeBasis& basis, const IntVector& v);

}  // namespace shufreg

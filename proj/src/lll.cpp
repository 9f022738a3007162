#include "shufreg/lll.hpp"

#include <algorithm>
#include <utility>

#include "shufreg/errors.hpp"

namespace shufreg {

BigInt dot(const IntVector& a, const IntVector& b) {
    if (a.size() != b.size()) throw ArgumentError("dot: length mismatch");
    BigInt s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) mpz_addmul(s.get_mpz_t(), a[i].get_mpz_t(), b[i].get_mpz_t());
    return s;
}

BigInt squared_norm(const IntVector& v) {
    return dot(v, v);
}

namespace {

void divexact(BigInt& x, const BigInt& d) {
    mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), d.get_mpz_t());
}

/// x -= r * y, element-wise.
void submul(IntVector& x, const BigInt& r, const IntVector& y) {
    for (std::size_t i = 0; i < x.size(); ++i) mpz_submul(x[i].get_mpz_t(), r.get_mpz_t(), y[i].get_mpz_t());
}

/// Integral LLL state. Indices are 1-based to mirror the d_0 = 1 convention;
/// slot 0 of b, h and lambda is unused.
class IntegralLll {
public:
    IntegralLll(std::vector<IntVector> columns, const Rational& delta, LllStats& stats)
        : n_(columns.size()), b_(n_ + 1), h_(n_ + 1), d_(n_ + 1), lambda_(n_ + 1, IntVector(n_ + 1)),
          p_(delta.get_num()), q_(delta.get_den()), stats_(stats) {
        for (std::size_t i = 1; i <= n_; ++i) {
            b_[i] = std::move(columns[i - 1]);
            h_[i] = IntVector(n_, 0);
            h_[i][i - 1] = 1;
        }
    }

    void run() {
        d_[0] = 1;
        d_[1] = squared_norm(b_[1]);
        if (d_[1] == 0) throw ArgumentError("lll_reduce: basis columns are linearly dependent");
        std::size_t k = 2, kmax = 1;
        while (k <= n_) {
            if (k > kmax) {
                kmax = k;
                extend_gram_schmidt(k);
            }
            reduce(k, k - 1);
            if (lovasz_fails(k)) {
                swap(k, kmax);
                k = std::max<std::size_t>(2, k - 1);
            } else {
                for (std::size_t l = k - 1; l-- > 1;) reduce(k, l);
                ++k;
            }
        }
    }

    std::vector<IntVector> columns() && {
        return std::vector<IntVector>(std::make_move_iterator(b_.begin() + 1), std::make_move_iterator(b_.end()));
    }
    const std::vector<IntVector>& transform_columns() const { return h_; }

private:
    void extend_gram_schmidt(std::size_t k) {
        for (std::size_t j = 1; j <= k; ++j) {
            BigInt u = dot(b_[k], b_[j]);
            for (std::size_t i = 1; i < j; ++i) {
                u = d_[i] * u - lambda_[k][i] * lambda_[j][i];
                divexact(u, d_[i - 1]);
            }
            if (j < k) {
                lambda_[k][j] = std::move(u);
            } else {
                if (u == 0) throw ArgumentError("lll_reduce: basis columns are linearly dependent");
                d_[k] = std::move(u);
            }
        }
    }

    void reduce(std::size_t k, std::size_t l) {
        BigInt twice = 2 * lambda_[k][l];
        if (abs(twice) <= d_[l]) return;
        // Nearest integer to lambda / d.
        BigInt r;
        BigInt num = twice + d_[l];
        BigInt den = 2 * d_[l];
        mpz_fdiv_q(r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        submul(b_[k], r, b_[l]);
        submul(h_[k], r, h_[l]);
        mpz_submul(lambda_[k][l].get_mpz_t(), r.get_mpz_t(), d_[l].get_mpz_t());
        for (std::size_t i = 1; i < l; ++i)
            mpz_submul(lambda_[k][i].get_mpz_t(), r.get_mpz_t(), lambda_[l][i].get_mpz_t());
        ++stats_.size_reductions;
    }

    bool lovasz_fails(std::size_t k) const {
        const BigInt lhs = q_ * d_[k] * d_[k - 2];
        const BigInt rhs = p_ * d_[k - 1] * d_[k - 1] - q_ * lambda_[k][k - 1] * lambda_[k][k - 1];
        return lhs < rhs;
    }

    void swap(std::size_t k, std::size_t kmax) {
        std::swap(b_[k], b_[k - 1]);
        std::swap(h_[k], h_[k - 1]);
        for (std::size_t j = 1; j + 2 <= k; ++j) std::swap(lambda_[k][j], lambda_[k - 1][j]);
        const BigInt lam = lambda_[k][k - 1];
        BigInt big = d_[k - 2] * d_[k] + lam * lam;
        divexact(big, d_[k - 1]);
        for (std::size_t i = k + 1; i <= kmax; ++i) {
            const BigInt t = lambda_[i][k];
            BigInt upper = d_[k] * lambda_[i][k - 1] - lam * t;
            divexact(upper, d_[k - 1]);
            lambda_[i][k] = std::move(upper);
            BigInt lower = big * t + lam * lambda_[i][k];
            divexact(lower, d_[k]);
            lambda_[i][k - 1] = std::move(lower);
        }
        d_[k - 1] = std::move(big);
        ++stats_.swaps;
    }

    std::size_t n_;
    std::vector<IntVector> b_;
    std::vector<IntVector> h_;
    IntVector d_;
    std::vector<IntVector> lambda_;
    BigInt p_, q_;
    LllStats& stats_;
};

}  // namespace

LatticeBasis lll_reduce(const LatticeBasis& basis, const LllOptions& options, std::vector<IntVector>* transform,
                        LllStats* stats) {
    if (basis.columns.empty()) throw ArgumentError("lll_reduce: empty basis");
    const std::size_t dim = basis.dim();
    for (const auto& c : basis.columns)
        if (c.size() != dim) throw ArgumentError("lll_reduce: columns have different lengths");
    if (basis.rank() > dim) throw ArgumentError("lll_reduce: basis columns are linearly dependent");
    if (!(options.delta > Rational(1, 4) && options.delta < 1)) throw ArgumentError("lll_reduce: delta must lie in (1/4, 1)");

    LllStats local;
    IntegralLll lll(basis.columns, options.delta, local);
    lll.run();
    if (transform) {
        const auto& h = lll.transform_columns();
        const std::size_t k = basis.rank();
        transform->assign(k, IntVector(k));
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t i = 0; i < k; ++i) (*transform)[i][j] = h[j + 1][i];
    }
    if (stats) *stats = local;
    LatticeBasis out;
    out.scale = basis.scale;
    out.columns = std::move(lll).columns();
    return out;
}

}  // namespace shufreg

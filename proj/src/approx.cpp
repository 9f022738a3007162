#include "shufreg/approx.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <thread>
#include <tuple>

#include "shufreg/errors.hpp"
#include "shufreg/perm1d.hpp"

namespace shufreg {

Eigen::VectorXd OrthonormalReduction::to_original(const Eigen::VectorXd& w_reduced) const {
    if (k == 0) return Eigen::VectorXd::Zero(V.rows());
    return V * w_reduced.cwiseQuotient(sigma);
}

Eigen::VectorXd OrthonormalReduction::to_reduced(const Eigen::VectorXd& w_orig) const {
    if (k == 0) return Eigen::VectorXd::Zero(0);
    return sigma.cwiseProduct(V.transpose() * w_orig);
}

OrthonormalReduction orthonormalize(const Eigen::MatrixXd& X) {
    if (X.rows() < 1 || X.cols() < 1) throw ArgumentError("orthonormalize: empty matrix");
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& s = svd.singularValues();
    OrthonormalReduction red;
    const double smax = s.size() > 0 ? s(0) : 0.0;
    std::size_t k = 0;
    if (smax > 0.0)
        while (k < static_cast<std::size_t>(s.size()) && s(static_cast<Eigen::Index>(k)) > 1e-9 * smax) ++k;
    const auto ki = static_cast<Eigen::Index>(k);
    red.k = k;
    red.U = svd.matrixU().leftCols(ki);
    red.sigma = s.head(ki);
    red.V = svd.matrixV().leftCols(ki);
    return red;
}

CandidateTargets::CandidateTargets(const SamplingMatrix& S, Eigen::VectorXd y)
    : y_(std::move(y)), support_(S.nonzero_columns()) {
    if (static_cast<std::size_t>(y_.size()) != S.cols()) throw ArgumentError("CandidateTargets: y length mismatch");
    const auto n = static_cast<std::uint64_t>(y_.size());
    std::uint64_t total = 1;
    bool overflow = false;
    for (std::size_t i = 0; i < support_.size(); ++i) {
        if (n != 0 && total > std::numeric_limits<std::uint64_t>::max() / n) {
            overflow = true;
            break;
        }
        total *= n;
    }
    if (!overflow) size_ = total;
    counter_.assign(support_.size(), 0);
}

bool CandidateTargets::next(Eigen::VectorXd& b) {
    if (done_) return false;
    if (!started_) {
        started_ = true;
    } else {
        std::size_t pos = counter_.size();
        while (pos > 0) {
            --pos;
            if (++counter_[pos] < static_cast<std::size_t>(y_.size())) break;
            counter_[pos] = 0;
            if (pos == 0) {
                done_ = true;
                return false;
            }
        }
        if (counter_.empty()) {
            done_ = true;
            return false;
        }
    }
    b = Eigen::VectorXd::Zero(y_.size());
    for (std::size_t i = 0; i < support_.size(); ++i)
        b(static_cast<Eigen::Index>(support_[i])) = y_(static_cast<Eigen::Index>(counter_[i]));
    return true;
}

std::vector<std::size_t> CandidateTargets::digits(std::uint64_t index) const {
    if (size_ && index >= *size_) throw ArgumentError("CandidateTargets::digits: index out of range");
    std::vector<std::size_t> out(support_.size());
    const auto n = static_cast<std::uint64_t>(y_.size());
    for (std::size_t i = support_.size(); i > 0; --i) {
        out[i - 1] = static_cast<std::size_t>(index % n);
        index /= n;
    }
    return out;
}

Eigen::VectorXd CandidateTargets::at(std::uint64_t index) const {
    const std::vector<std::size_t> dig = digits(index);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(y_.size());
    for (std::size_t i = 0; i < support_.size(); ++i)
        b(static_cast<Eigen::Index>(support_[i])) = y_(static_cast<Eigen::Index>(dig[i]));
    return b;
}

namespace {

struct GridShape {
    double spacing = 0.0;
    std::int64_t half_width = 0;  // offsets run over [-half_width, half_width]
};

GridShape grid_shape(std::size_t k, double r_b, double eps, double c) {
    if (!(eps > 0.0 && eps < 1.0)) throw ArgumentError("net: eps must lie in (0, 1)");
    if (!(r_b >= 0.0) || !std::isfinite(r_b)) throw ArgumentError("net: r_b must be finite and >= 0");
    if (!(c >= 1.0)) throw ArgumentError("net: c must be at least 1");
    if (r_b == 0.0 || k == 0) return {0.0, 0};
    const double radius = std::sqrt(c * r_b);
    const double spacing = 2.0 * std::sqrt(eps * r_b / c) / std::sqrt(static_cast<double>(k));
    return {spacing, static_cast<std::int64_t>(std::ceil(radius / spacing))};
}

/// Calls visit(v) for every net point in row-major order; stops early when
/// visit returns false.
template <typename Visit>
void for_each_net_point(const Eigen::VectorXd& center, const GridShape& g, Visit&& visit) {
    const auto k = static_cast<std::size_t>(center.size());
    if (g.half_width == 0 || k == 0) {
        visit(center);
        return;
    }
    std::vector<std::int64_t> offset(k, -g.half_width);
    Eigen::VectorXd v(center.size());
    for (;;) {
        for (std::size_t j = 0; j < k; ++j)
            v(static_cast<Eigen::Index>(j)) = center(static_cast<Eigen::Index>(j)) + g.spacing * static_cast<double>(offset[j]);
        if (!visit(v)) return;
        std::size_t pos = k;
        while (pos > 0) {
            --pos;
            if (++offset[pos] <= g.half_width) break;
            offset[pos] = -g.half_width;
            if (pos == 0) return;
        }
    }
}

std::uint64_t saturating_pow(std::uint64_t base, std::size_t exp) {
    std::uint64_t out = 1;
    for (std::size_t i = 0; i < exp; ++i) {
        if (out > std::numeric_limits<std::uint64_t>::max() / base) return std::numeric_limits<std::uint64_t>::max();
        out *= base;
    }
    return out;
}

struct Best {
    double cost = std::numeric_limits<double>::infinity();
    std::uint64_t branch = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t point = std::numeric_limits<std::uint64_t>::max();
    Eigen::VectorXd w;

    bool better_than(const Best& o) const {
        return std::tie(cost, branch, point) < std::tie(o.cost, o.branch, o.point);
    }
};

}  // namespace

std::uint64_t net_size(std::size_t k, double r_b, double eps, double c) {
    const GridShape g = grid_shape(k, r_b, eps, c);
    if (g.half_width == 0) return 1;
    return saturating_pow(static_cast<std::uint64_t>(2 * g.half_width + 1), k);
}

std::vector<Eigen::VectorXd> build_net(const Eigen::VectorXd& w_tilde, double r_b, double eps, double c) {
    const GridShape g = grid_shape(static_cast<std::size_t>(w_tilde.size()), r_b, eps, c);
    std::vector<Eigen::VectorXd> net;
    for_each_net_point(w_tilde, g, [&](const Eigen::VectorXd& v) {
        net.push_back(v);
        return true;
    });
    return net;
}

Solution fptas_solve(const Instance& instance, double eps, const FptasOptions& options, FptasStats* stats) {
    instance.validate();
    if (!(eps > 0.0 && eps < 1.0)) throw ArgumentError("fptas_solve: eps must lie in (0, 1)");
    const std::size_t n = instance.n();
    const OrthonormalReduction red = orthonormalize(instance.X);

    auto finish = [&](const Eigen::VectorXd& w_reduced) {
        Solution sol;
        sol.w = red.to_original(w_reduced);
        const Eigen::VectorXd fitted = instance.X * sol.w;
        MatchResult m = sort_match(fitted, instance.y);
        sol.perm = std::move(m.perm);
        sol.cost = permuted_cost(instance.X, instance.y, sol.w, sol.perm);
        return sol;
    };

    FptasStats local;
    local.k = red.k;
    if (red.k == 0) {
        if (stats) *stats = local;
        return finish(Eigen::VectorXd::Zero(0));
    }

    const Eigen::MatrixXd& U = red.U;
    const SamplingMatrix S = row_sample(U);
    const double c = row_sampling_factor(n, red.k);
    CandidateTargets targets(S, instance.y);
    if (!targets.size()) throw BudgetExceededError("fptas_solve: candidate count overflows");
    const std::uint64_t num_candidates = *targets.size();
    if (num_candidates > options.budget)
        throw BudgetExceededError("fptas_solve: " + std::to_string(num_candidates) + " candidate targets exceed budget " +
                                  std::to_string(options.budget));

    std::vector<double> y_sorted(instance.y.data(), instance.y.data() + n);
    std::sort(y_sorted.begin(), y_sorted.end());

    // Baselines: the sketched least-squares fit for each candidate and its
    // best-permutation cost.
    const Eigen::MatrixXd SU = S.apply(U);
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(SU);
    std::vector<Eigen::VectorXd> w_tilde(num_candidates);
    std::vector<double> r_b(num_candidates);
    {
        std::vector<double> scratch;
        Eigen::VectorXd b;
        std::uint64_t idx = 0;
        while (targets.next(b)) {
            w_tilde[idx] = cod.solve(S.apply(b));
            const Eigen::VectorXd fitted = U * w_tilde[idx];
            r_b[idx] = sorted_match_cost({fitted.data(), n}, y_sorted, scratch);
            ++idx;
        }
    }
    const double best_baseline = *std::min_element(r_b.begin(), r_b.end());
    const double prune_above = c * best_baseline * (1.0 + 1e-9) + 1e-300;

    std::vector<std::uint64_t> active;
    std::uint64_t total_points = 0;
    for (std::uint64_t idx = 0; idx < num_candidates; ++idx) {
        if (options.prune && r_b[idx] > prune_above) continue;
        active.push_back(idx);
        const std::uint64_t pts = net_size(red.k, r_b[idx], eps, c);
        total_points = (total_points > std::numeric_limits<std::uint64_t>::max() - pts)
                           ? std::numeric_limits<std::uint64_t>::max()
                           : total_points + pts;
    }
    if (total_points > options.budget)
        throw BudgetExceededError("fptas_solve: " + std::to_string(total_points) + " net points exceed budget " +
                                  std::to_string(options.budget));

    auto evaluate = [&](std::size_t begin, std::size_t end) {
        Best best;
        std::vector<double> scratch;
        Eigen::VectorXd fitted(static_cast<Eigen::Index>(n));
        for (std::size_t a = begin; a < end; ++a) {
            const std::uint64_t idx = active[a];
            const GridShape g = grid_shape(red.k, r_b[idx], eps, c);
            std::uint64_t point = 0;
            for_each_net_point(w_tilde[idx], g, [&](const Eigen::VectorXd& v) {
                fitted.noalias() = U * v;
                const double cost = sorted_match_cost({fitted.data(), n}, y_sorted, scratch);
                if (cost < best.cost) {
                    best.cost = cost;
                    best.branch = idx;
                    best.point = point;
                    best.w = v;
                }
                ++point;
                return true;
            });
        }
        return best;
    };

    Best best;
    const std::size_t jobs = std::max<std::size_t>(1, std::min(options.jobs, active.size()));
    if (jobs == 1) {
        best = evaluate(0, active.size());
    } else {
        std::vector<Best> partial(jobs);
        std::vector<std::thread> workers;
        const std::size_t chunk = (active.size() + jobs - 1) / jobs;
        for (std::size_t j = 0; j < jobs; ++j) {
            const std::size_t begin = std::min(active.size(), j * chunk);
            const std::size_t end = std::min(active.size(), begin + chunk);
            workers.emplace_back([&, j, begin, end] { partial[j] = evaluate(begin, end); });
        }
        for (auto& t : workers) t.join();
        for (const Best& p : partial)
            if (p.better_than(best)) best = p;
    }

    local.support = targets.support().size();
    local.candidates = num_candidates;
    local.branches_evaluated = active.size();
    local.net_points = total_points;
    local.c = c;
    local.best_baseline = best_baseline;
    if (stats) *stats = local;
    return finish(best.w);
}

}  // namespace shufreg

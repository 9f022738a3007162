#include "shufreg/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <thread>

#include "shufreg/approx.hpp"
#include "shufreg/errors.hpp"
#include "shufreg/oracle.hpp"
#include "shufreg/rng.hpp"

namespace shufreg {

Model parse_model(const std::string& s) {
    if (s == "gaussian") return Model::Gaussian;
    if (s == "uniform") return Model::Uniform;
    if (s == "noiseless") return Model::Noiseless;
    throw ArgumentError("unknown model '" + s + "' (expected gaussian, uniform or noiseless)");
}

Solver parse_solver(const std::string& s) {
    if (s == "fptas") return Solver::Fptas;
    if (s == "brute") return Solver::Brute;
    if (s == "lattice") return Solver::Lattice;
    if (s == "none") return Solver::None;
    throw ArgumentError("unknown solver '" + s + "' (expected fptas, brute, lattice or none)");
}

std::string to_string(Model m) {
    switch (m) {
        case Model::Gaussian: return "gaussian";
        case Model::Uniform: return "uniform";
        case Model::Noiseless: return "noiseless";
    }
    return "?";
}

std::string to_string(Solver s) {
    switch (s) {
        case Solver::Fptas: return "fptas";
        case Solver::Brute: return "brute";
        case Solver::Lattice: return "lattice";
        case Solver::None: return "none";
    }
    return "?";
}

namespace {

std::string fmt(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

/// Runs body(i) for i in [0, count) on up to `jobs` threads.
template <typename F>
void parallel_for(std::size_t count, std::size_t jobs, F&& body) {
    jobs = std::max<std::size_t>(1, std::min(jobs, count));
    if (jobs == 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    std::vector<std::thread> workers;
    std::mutex error_mutex;
    for (std::size_t j = 0; j < jobs; ++j) {
        workers.emplace_back([&] {
            for (std::size_t i = next++; i < count && !failed; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                    failed = true;
                }
            }
        });
    }
    for (auto& w : workers) w.join();
    if (error) std::rethrow_exception(error);
}

struct TrialResult {
    double err = 0.0;
    bool success = false;
    double baseline_err = 0.0;
};

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double sample_std(const std::vector<double>& v, double mean) {
    if (v.size() < 2) return 0.0;
    double s = 0.0;
    for (double x : v) s += (x - mean) * (x - mean);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

TrialResult run_trial(const ExperimentConfig& cfg, double snr, std::uint64_t seed) {
    const double sigma = std::isinf(snr) ? 0.0 : 1.0 / std::sqrt(snr);
    Eigen::VectorXd w_bar = random_weights(cfg.d, 1.0, seed);
    Instance inst;
    GroundTruth truth;
    if (cfg.model == Model::Noiseless) {
        NoiselessOptions opts;
        opts.anchored = false;
        opts.quantization_bits = cfg.p;
        auto [anchored, t] = gen_noiseless_anchored(cfg.n, cfg.d, w_bar, seed, opts);
        inst = anchored.flatten();
        truth = std::move(t);
    } else {
        auto gen = cfg.model == Model::Gaussian ? gen_gaussian_noisy : gen_uniform_noisy;
        auto [i, t] = gen(cfg.n, cfg.d, w_bar, sigma, seed);
        inst = std::move(i);
        truth = std::move(t);
    }
    w_bar = truth.w_bar;

    TrialResult out;
    out.baseline_err = (ols_given_perm(inst.X, inst.y, truth.pi_bar).w - w_bar).norm();

    switch (cfg.solver) {
        case Solver::None:
            out.err = out.baseline_err;
            out.success = true;
            break;
        case Solver::Brute:
        case Solver::Fptas: {
            const Solution s = cfg.solver == Solver::Brute ? brute_force(inst) : fptas_solve(inst, cfg.eps);
            out.err = (s.w - w_bar).norm();
            out.success = s.perm == truth.pi_bar;
            break;
        }
        case Solver::Lattice: {
            RecoveryOptions opts;
            opts.delta = cfg.delta;
            RecoveryAttempt attempt;
            try {
                attempt = recover(to_rational(inst), opts);
            } catch (const DegenerateInstanceError&) {
            } catch (const RankError&) {
            }
            if (attempt.result) {
                const QVector w_exact = exact(std::vector<double>(w_bar.data(), w_bar.data() + w_bar.size()));
                out.err = (to_double(attempt.result->w) - w_bar).norm();
                out.success = attempt.result->perm == truth.pi_bar && attempt.result->w == w_exact;
            } else {
                // A declared failure counts as the estimate w_hat = 0.
                out.err = w_bar.norm();
                out.success = false;
            }
            break;
        }
    }
    return out;
}

}  // namespace

void ExperimentConfig::validate() const {
    if (trials < 1) throw ArgumentError("trials must be at least 1");
    if (n < 1 || d < 1) throw ArgumentError("n and d must be positive");
    if (snr.empty()) throw ArgumentError("the snr grid is empty");
    for (double s : snr)
        if (!(s > 0.0)) throw ArgumentError("snr grid values must be positive, got " + fmt(s));
    if (solver == Solver::Lattice && model != Model::Noiseless)
        throw ArgumentError("the lattice solver requires the noiseless model");
    if (solver == Solver::Fptas && !(eps > 0.0 && eps < 1.0)) throw ArgumentError("eps must lie in (0, 1)");
    if (!(delta > 0.0 && delta < 1.0)) throw ArgumentError("delta must lie in (0, 1)");
    if (p < 1 || p > 40) throw ArgumentError("quantization bits must lie in [1, 40]");
    if (model == Model::Noiseless && n < d) throw ArgumentError("the noiseless model requires n >= d");
    const std::size_t rows = model == Model::Noiseless ? n + 1 : n;
    if (solver == Solver::Brute && rows > BruteForceOptions{}.max_n)
        throw RefusalError("brute solver cap exceeded in cell (snr=" + fmt(snr.front()) + ", n=" + std::to_string(n) +
                           ", d=" + std::to_string(d) + "): " + std::to_string(rows) + " rows > " +
                           std::to_string(BruteForceOptions{}.max_n));
}

std::vector<SweepRow> sweep_snr(const ExperimentConfig& config) {
    config.validate();
    const std::size_t cells = config.snr.size(), trials = config.trials;
    std::vector<TrialResult> results(cells * trials);

    const auto t0 = std::chrono::steady_clock::now();
    parallel_for(cells * trials, config.jobs, [&](std::size_t idx) {
        const std::size_t s = idx / trials, t = idx % trials;
        results[idx] = run_trial(config, config.snr[s], derive_seed(config.seed, {s, t}));
    });
    const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::vector<SweepRow> rows;
    for (std::size_t s = 0; s < cells; ++s) {
        std::vector<double> errs, base;
        std::size_t ok = 0;
        for (std::size_t t = 0; t < trials; ++t) {
            const TrialResult& r = results[s * trials + t];
            errs.push_back(r.err);
            base.push_back(r.baseline_err);
            ok += r.success ? 1 : 0;
        }
        SweepRow row;
        row.snr = config.model == Model::Noiseless ? std::numeric_limits<double>::infinity() : config.snr[s];
        row.n = config.n;
        row.d = config.d;
        row.trials = trials;
        row.mean_err = mean_of(errs);
        row.std_err = sample_std(errs, row.mean_err);
        row.success_rate = static_cast<double>(ok) / static_cast<double>(trials);
        row.baseline_mean_err = mean_of(base);
        if (config.timing) row.wall_time = total / static_cast<double>(cells);
        rows.push_back(row);
    }
    return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows, bool timing) {
    out << "snr,n,d,trials,mean_err,std_err,success_rate,baseline_mean_err" << (timing ? ",wall_time" : "") << "\n";
    for (const SweepRow& r : rows) {
        out << fmt(r.snr) << ',' << r.n << ',' << r.d << ',' << r.trials << ',' << fmt(r.mean_err) << ','
            << fmt(r.std_err) << ',' << fmt(r.success_rate) << ',' << fmt(r.baseline_mean_err);
        if (timing) out << ',' << fmt(r.wall_time.value_or(0.0));
        out << "\n";
    }
}

OrderStatsReport check_order_stats(std::size_t n, std::size_t trials, std::uint64_t seed) {
    if (n < 2) throw ArgumentError("check_order_stats: n must be at least 2");
    if (trials < 1) throw ArgumentError("check_order_stats: trials must be at least 1");
    OrderStatsReport rep;
    rep.n = n;
    rep.trials = trials;
    rep.order_mean.assign(n, 0.0);
    Rng rng(seed, Stream::Auxiliary);
    std::vector<double> u(n);
    double mirror = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        for (double& v : u) v = rng.uniform(-0.5, 0.5);
        std::sort(u.begin(), u.end());
        for (std::size_t i = 0; i < n; ++i) {
            const double s = u[i] + u[n - 1 - i];
            mirror += s * s;
            rep.order_mean[i] += u[i];
        }
    }
    const double nt = static_cast<double>(trials), nd = static_cast<double>(n);
    rep.mirror_sum_mean = mirror / nt;
    for (double& m : rep.order_mean) m /= nt;
    rep.mirror_sum_closed = n % 2 == 0 ? 0.5 * (1.0 - 1.0 / (nd + 1.0)) : 0.5 * (1.0 - 1.0 / (nd + 2.0));
    rep.relative_error = std::abs(rep.mirror_sum_mean - rep.mirror_sum_closed) / rep.mirror_sum_closed;
    for (std::size_t r = 1; r <= n; ++r) rep.order_expected.push_back(static_cast<double>(r) / (nd + 1.0) - 0.5);
    return rep;
}

void write_order_stats_csv(std::ostream& out, const OrderStatsReport& rep) {
    out << "quantity,index,empirical,expected\n";
    out << "mirror_sum,," << fmt(rep.mirror_sum_mean) << ',' << fmt(rep.mirror_sum_closed) << "\n";
    for (std::size_t r = 0; r < rep.n; ++r)
        out << "order_mean," << r + 1 << ',' << fmt(rep.order_mean[r]) << ',' << fmt(rep.order_expected[r]) << "\n";
}

W2Report check_w2_scaling(const std::vector<std::size_t>& ns, std::size_t trials, std::uint64_t seed, std::size_t d) {
    if (ns.empty()) throw ArgumentError("check_w2_scaling: empty n grid");
    if (trials < 1) throw ArgumentError("check_w2_scaling: trials must be at least 1");
    if (d < 1) throw ArgumentError("check_w2_scaling: d must be positive");
    W2Report rep;
    for (std::size_t g = 0; g < ns.size(); ++g) {
        const std::size_t n = ns[g];
        if (n < 3) throw ArgumentError("check_w2_scaling: every n must be at least 3");
        std::vector<double> vals;
        for (std::size_t t = 0; t < trials; ++t) {
            const std::uint64_t s = derive_seed(seed, {g, t});
            const Eigen::VectorXd u = random_weights(d, 1.0, derive_seed(s, {1}));
            const Eigen::VectorXd v = random_weights(d, 1.0, derive_seed(s, {2}));
            Rng rng(s, Stream::Covariates);
            Eigen::MatrixXd X(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
            for (Eigen::Index i = 0; i < X.rows(); ++i)
                for (Eigen::Index j = 0; j < X.cols(); ++j) X(i, j) = rng.normal();
            Eigen::VectorXd a = X * u, b = X * v;
            std::sort(a.begin(), a.end());
            std::sort(b.begin(), b.end());
            vals.push_back((a - b).squaredNorm());
        }
        W2Row row;
        row.n = n;
        row.d = d;
        row.trials = trials;
        row.mean_sq = mean_of(vals);
        row.std_sq = sample_std(vals, row.mean_sq);
        row.mean_sq_per_n = row.mean_sq / static_cast<double>(n);
        rep.rows.push_back(row);
    }
    rep.non_increasing = true;
    for (std::size_t g = 1; g < rep.rows.size(); ++g)
        if (rep.rows[g].mean_sq_per_n > rep.rows[g - 1].mean_sq_per_n) rep.non_increasing = false;
    rep.shrink_ratio = rep.rows.front().mean_sq_per_n / rep.rows.back().mean_sq_per_n;
    return rep;
}

void write_w2_csv(std::ostream& out, const W2Report& rep) {
    out << "n,d,trials,mean_sq,std_sq,mean_sq_per_n\n";
    for (const W2Row& r : rep.rows)
        out << r.n << ',' << r.d << ',' << r.trials << ',' << fmt(r.mean_sq) << ',' << fmt(r.std_sq) << ','
            << fmt(r.mean_sq_per_n) << "\n";
}

}  // namespace shufreg

// Command-line front end: instance generation, solvers, experiments.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "shufreg/approx.hpp"
#include "shufreg/errors.hpp"
#include "shufreg/experiment.hpp"
#include "shufreg/hardness.hpp"
#include "shufreg/io.hpp"
#include "shufreg/lattice.hpp"
#include "shufreg/oracle.hpp"
#include "shufreg/rng.hpp"

using namespace shufreg;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitSolverFailure = 3;
constexpr int kExitInternal = 4;

/// Writes text to `path`, or to stdout when path is empty or "-".
void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ArgumentError("cannot open " + path + " for writing");
    out << text;
}

json vector_json(const Eigen::VectorXd& v) {
    json a = json::array();
    for (double x : v) a.push_back(x);
    return a;
}

struct GenArgs {
    std::string model = "gaussian";
    std::size_t n = 0, d = 0;
    double snr = 1.0;
    std::uint64_t seed = 0;
    int p = 16;
    bool fix_anchor = false;
    std::string output;
};

int cmd_gen(const GenArgs& a) {
    const Model model = parse_model(a.model);
    if (a.n < 1 || a.d < 1) throw ArgumentError("--n and --d must be positive");
    if (!(a.snr > 0.0)) throw ArgumentError("--snr must be positive");
    const Eigen::VectorXd w = random_weights(a.d, 1.0, a.seed);
    InstanceFile file;
    if (model == Model::Noiseless) {
        NoiselessOptions opts;
        opts.anchored = a.fix_anchor;
        opts.quantization_bits = a.p;
        auto [inst, truth] = gen_noiseless_anchored(a.n, a.d, w, a.seed, opts);
        file = InstanceFile::from(inst);
        file.truth = truth;
        file.quantization = QuantizationConfig{a.p};
    } else {
        const double sigma = 1.0 / std::sqrt(a.snr);
        auto gen = model == Model::Gaussian ? gen_gaussian_noisy : gen_uniform_noisy;
        auto [inst, truth] = gen(a.n, a.d, w, sigma, a.seed);
        file = InstanceFile::from(inst);
        file.truth = truth;
    }
    emit(a.output, dump_instance(file));
    std::cerr << "gen: model=" << a.model << " n=" << a.n << " d=" << a.d << " seed=" << a.seed
              << (a.output.empty() ? "" : " -> " + a.output) << "\n";
    return kExitOk;
}

struct SolveArgs {
    std::string input;
    std::string solver = "fptas";
    double eps = 0.5;
    double delta = 0.1;
    std::string beta_policy = "full";
    std::size_t jobs = 1;
    std::string output;
};

int cmd_solve(const SolveArgs& a) {
    const Solver solver = parse_solver(a.solver);
    const InstanceFile file = read_instance_file(a.input);
    const Instance inst = file.has_anchor() ? file.anchored().flatten() : file.body;
    json out;
    switch (solver) {
        case Solver::None:
            throw ArgumentError("solve needs --solver fptas, brute or lattice");
        case Solver::Fptas:
        case Solver::Brute: {
            FptasOptions fo;
            fo.jobs = a.jobs;
            const Solution s = solver == Solver::Brute ? brute_force(inst) : fptas_solve(inst, a.eps, fo);
            out["w"] = vector_json(s.w);
            out["perm"] = s.perm.map();
            out["cost"] = s.cost;
            break;
        }
        case Solver::Lattice: {
            RecoveryOptions ro;
            ro.delta = a.delta;
            if (a.beta_policy == "half") {
                ro.policy = BetaPolicy::HalfExponent;
            } else if (a.beta_policy != "full") {
                throw ArgumentError("--beta-policy must be full or half");
            }
            RecoveryAttempt attempt;
            try {
                attempt = recover(to_rational(inst), ro);
            } catch (const DegenerateInstanceError& e) {
                attempt.failure = e.what();
            } catch (const RankError& e) {
                attempt.failure = e.what();
            }
            if (!attempt.result) {
                out["failure"] = attempt.failure;
                emit(a.output, out.dump() + "\n");
                return kExitSolverFailure;
            }
            json w = json::array();
            for (const Rational& q : attempt.result->w) w.push_back(to_string(q));
            out["w"] = w;
            out["perm"] = attempt.result->perm.map();
            out["cost"] = "0";
            out["anchor"] = attempt.result->anchor;
            break;
        }
    }
    emit(a.output, out.dump() + "\n");
    return kExitOk;
}

struct SweepArgs {
    ExperimentConfig cfg;
    std::string model = "gaussian", solver = "brute", output;
};

int cmd_sweep(SweepArgs a) {
    a.cfg.model = parse_model(a.model);
    a.cfg.solver = parse_solver(a.solver);
    if (a.cfg.model == Model::Noiseless) a.cfg.snr = {std::numeric_limits<double>::infinity()};
    std::ostringstream csv;
    write_sweep_csv(csv, sweep_snr(a.cfg), a.cfg.timing);
    emit(a.output, csv.str());
    return kExitOk;
}

int cmd_order_stats(std::size_t n, std::size_t trials, std::uint64_t seed, const std::string& output) {
    const OrderStatsReport rep = check_order_stats(n, trials, seed);
    std::ostringstream csv;
    write_order_stats_csv(csv, rep);
    emit(output, csv.str());
    std::cerr << "check-order-stats: n=" << n << " empirical=" << rep.mirror_sum_mean
              << " closed_form=" << rep.mirror_sum_closed << " relative_error=" << rep.relative_error << "\n";
    return kExitOk;
}

int cmd_w2(const std::vector<std::size_t>& ns, std::size_t trials, std::uint64_t seed, std::size_t d,
           double min_shrink, const std::string& output) {
    const W2Report rep = check_w2_scaling(ns, trials, seed, d);
    std::ostringstream csv;
    write_w2_csv(csv, rep);
    emit(output, csv.str());
    const bool ok = rep.non_increasing && rep.shrink_ratio >= min_shrink;
    std::cerr << "check-w2: non_increasing=" << (rep.non_increasing ? "true" : "false")
              << " shrink_ratio=" << rep.shrink_ratio << " required=" << min_shrink << (ok ? " ok" : " FAILED")
              << "\n";
    return ok ? kExitOk : kExitSolverFailure;
}

int cmd_reduce(const std::vector<std::int64_t>& z, std::size_t k, std::int64_t C, const std::string& output) {
    ThreePartitionInstance tp{z, k, C};
    const PlsInstance pls = reduce_3partition(tp);
    emit(output, dump_instance(InstanceFile::from(pls.to_instance())));
    std::cerr << "reduce: " << pls.n() << "x" << pls.d() << " system"
              << (output.empty() ? "" : " -> " + output) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Shuffled linear regression: generators, solvers and experiments"};
    app.require_subcommand(1);

    std::size_t env_jobs = 1;
    if (const char* env = std::getenv("SHUFFLE_REGRESS_JOBS")) {
        try {
            env_jobs = std::max<std::size_t>(1, std::stoul(env));
        } catch (const std::exception&) {
            std::cerr << "error: SHUFFLE_REGRESS_JOBS must be a positive integer\n";
            return kExitUsage;
        }
    }

    GenArgs gen;
    auto* g = app.add_subcommand("gen", "Generate a random instance as JSON");
    g->add_option("--model", gen.model, "gaussian, uniform or noiseless")->capture_default_str();
    g->add_option("--n", gen.n, "Number of measurements (noiseless: n+1 are written)")->required();
    g->add_option("--d", gen.d, "Dimension")->required();
    g->add_option("--snr", gen.snr, "Signal-to-noise ratio, sigma = 1/sqrt(snr)")->capture_default_str();
    g->add_option("--seed", gen.seed)->capture_default_str();
    g->add_option("--p", gen.p, "Fractional bits of the noiseless quantization")->capture_default_str();
    g->add_flag("--fix-anchor", gen.fix_anchor, "Noiseless: force pi_bar(0) = 0");
    g->add_option("-o,--output", gen.output, "Output path (default stdout)");

    SolveArgs solve;
    auto* s = app.add_subcommand("solve", "Solve an instance file");
    s->add_option("--input", solve.input)->required()->check(CLI::ExistingFile);
    s->add_option("--solver", solve.solver, "fptas, brute or lattice")->capture_default_str();
    s->add_option("--eps", solve.eps, "FPTAS accuracy")->capture_default_str();
    s->add_option("--delta", solve.delta, "Lattice failure probability")->capture_default_str();
    s->add_option("--beta-policy", solve.beta_policy, "full (2^(n^2)/eps) or half (2^(n^2/2)/eps)")
        ->capture_default_str();
    s->add_option("--jobs", solve.jobs)->default_val(env_jobs);
    s->add_option("-o,--output", solve.output);

    SweepArgs sweep;
    auto* w = app.add_subcommand("sweep-snr", "Monte-Carlo error sweep over an SNR grid (CSV)");
    w->add_option("--model", sweep.model)->capture_default_str();
    w->add_option("--n", sweep.cfg.n)->required();
    w->add_option("--d", sweep.cfg.d)->required();
    w->add_option("--snr", sweep.cfg.snr, "Comma-separated grid")->delimiter(',');
    w->add_option("--trials", sweep.cfg.trials)->capture_default_str();
    w->add_option("--seed", sweep.cfg.seed)->capture_default_str();
    w->add_option("--solver", sweep.solver, "fptas, brute, lattice or none")->capture_default_str();
    w->add_option("--eps", sweep.cfg.eps)->capture_default_str();
    w->add_option("--delta", sweep.cfg.delta)->capture_default_str();
    w->add_option("--p", sweep.cfg.p)->capture_default_str();
    w->add_option("--jobs", sweep.cfg.jobs)->default_val(env_jobs);
    w->add_flag("--timing", sweep.cfg.timing, "Add a wall_time column (not reproducible)");
    w->add_option("-o,--output", sweep.output);

    std::size_t os_n = 10, os_trials = 100000;
    std::uint64_t os_seed = 0;
    std::string os_out;
    auto* o = app.add_subcommand("check-order-stats", "Order-statistic identity for uniform samples (CSV)");
    o->add_option("--n", os_n)->capture_default_str();
    o->add_option("--trials", os_trials)->capture_default_str();
    o->add_option("--seed", os_seed)->capture_default_str();
    o->add_option("-o,--output", os_out);

    std::vector<std::size_t> w2_n = {100, 1000, 10000};
    std::size_t w2_trials = 50, w2_d = 20;
    std::uint64_t w2_seed = 0;
    double w2_shrink = 4.0;
    std::string w2_out;
    auto* c = app.add_subcommand("check-w2", "Sorted-projection distance scaling in n (CSV)");
    c->add_option("--n", w2_n, "Comma-separated grid")->delimiter(',')->capture_default_str();
    c->add_option("--trials", w2_trials)->capture_default_str();
    c->add_option("--seed", w2_seed)->capture_default_str();
    c->add_option("--d", w2_d)->capture_default_str();
    c->add_option("--min-shrink", w2_shrink, "Required ratio between the first and last per-n means")
        ->capture_default_str();
    c->add_option("-o,--output", w2_out);

    std::vector<std::int64_t> rz;
    std::size_t rk = 0;
    std::int64_t rC = 0;
    std::string r_out;
    auto* r = app.add_subcommand("reduce", "3-Partition to permuted linear system (JSON)");
    r->add_option("--z", rz, "Comma-separated integers")->delimiter(',')->required();
    r->add_option("--k", rk)->required();
    r->add_option("--C", rC)->required();
    r->add_option("-o,--output", r_out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*g) return cmd_gen(gen);
        if (*s) return cmd_solve(solve);
        if (*w) return cmd_sweep(sweep);
        if (*o) return cmd_order_stats(os_n, os_trials, os_seed, os_out);
        if (*c) return cmd_w2(w2_n, w2_trials, w2_seed, w2_d, w2_shrink, w2_out);
        if (*r) return cmd_reduce(rz, rk, rC, r_out);
    } catch (const InternalInvariantError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    } catch (const NumericError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitUsage;
}

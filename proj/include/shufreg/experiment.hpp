#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "shufreg/lattice.hpp"

namespace shufreg {

enum class Model { Gaussian, Uniform, Noiseless };
/// None skips the solver and reports only the known-permutation baseline.
enum class Solver { Fptas, Brute, Lattice, None };

Model parse_model(const std::string& s);
Solver parse_solver(const std::string& s);
std::string to_string(Model m);
std::string to_string(Solver s);

struct ExperimentConfig {
    Model model = Model::Gaussian;
    std::size_t n = 6;
    std::size_t d = 2;
    /// SNR grid; +infinity means sigma = 0.
    std::vector<double> snr = {1.0};
    std::size_t trials = 10;
    std::uint64_t seed = 0;
    Solver solver = Solver::Brute;
    double eps = 0.5;
    double delta = 0.1;
    int p = 16;
    std::size_t jobs = 1;
    /// Add a wall_time column. Off by default because timings are not reproducible.
    bool timing = false;

    /// Throws ArgumentError for invalid fields or an incompatible solver and
    /// RefusalError when a cell exceeds an oracle cap.
    void validate() const;
};

struct SweepRow {
    double snr = 0.0;
    std::size_t n = 0;
    std::size_t d = 0;
    std::size_t trials = 0;
    /// Mean and sample standard deviation of ||w_hat - w_bar||_2.
    double mean_err = 0.0;
    double std_err = 0.0;
    /// Fraction of trials whose permutation equals pi_bar exactly (and, for
    /// the lattice solver, whose w equals the quantized w_bar exactly).
    double success_rate = 0.0;
    /// Mean error of least squares with the true permutation.
    double baseline_mean_err = 0.0;
    std::optional<double> wall_time;
};

/// One row per SNR value, in grid order. Trial t of cell s uses the seed
/// derive_seed(seed, {s, t}) and ||w_bar|| = 1, sigma = 1 / sqrt(snr).
std::vector<SweepRow> sweep_snr(const ExperimentConfig& config);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows, bool timing);

struct OrderStatsReport {
    std::size_t n = 0;
    std::size_t trials = 0;
    /// Empirical mean of sum_i (U_(i) + U_(n+1-i))^2 for U uniform on [-1/2, 1/2].
    double mirror_sum_mean = 0.0;
    /// 1/2 (1 - 1/(n+1)) for even n, 1/2 (1 - 1/(n+2)) for odd n.
    double mirror_sum_closed = 0.0;
    double relative_error = 0.0;
    /// Empirical E[U_(r)] and r/(n+1) - 1/2, r = 1..n.
    std::vector<double> order_mean;
    std::vector<double> order_expected;
};

OrderStatsReport check_order_stats(std::size_t n, std::size_t trials, std::uint64_t seed);
void write_order_stats_csv(std::ostream& out, const OrderStatsReport& report);

struct W2Row {
    std::size_t n = 0;
    std::size_t d = 0;
    std::size_t trials = 0;
    /// Mean and sample standard deviation of ||(Xu)_sorted - (Xu')_sorted||^2.
    double mean_sq = 0.0;
    double std_sq = 0.0;
    double mean_sq_per_n = 0.0;
};

struct W2Report {
    std::vector<W2Row> rows;
    /// mean_sq_per_n is non-increasing along the grid.
    bool non_increasing = false;
    /// mean_sq_per_n of the first row over that of the last row.
    double shrink_ratio = 0.0;
};

/// For each n, `trials` draws of a standard Gaussian X (n x d) and unit u, u'.
W2Report check_w2_scaling(const std::vector<std::size_t>& ns, std::size_t trials, std::uint64_t seed,
                          std::size_t d = 20);
void write_w2_csv(std::ostream& out, const W2Report& report);

}  // namespace shufreg

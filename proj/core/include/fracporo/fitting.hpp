#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace fracporo {

/// Top-surface creep record under a constant applied stress.
struct CreepDataset {
    std::string sample_id;
    double h = 0.0;   ///< m
    double P_A = 0.0; ///< Pa
    std::vector<double> t; ///< s, strictly increasing, t[0] >= 0
    std::vector<double> u; ///< m

    void validate() const;
};

enum class CreepModel { fractional, classical };

struct FitResult {
    double M = 0.0;
    double beta = 0.0;
    double lambda_beta = 0.0;
    double rms = 0.0;
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
};

/// RMS misfit of the incompressible step-load creep curve at the dataset timestamps, m.
double rms_objective(const CreepDataset& data, double M, double beta, double lambda_beta, double series_tol = 1e-12);

struct NelderMeadOptions {
    double reflection = 1.0;
    double expansion = 2.0;
    double contraction = 0.5;
    double shrink = 0.5;
    double x_tol = 1e-7;      ///< max vertex distance from the best vertex
    double f_tol = 1e-8;      ///< objective spread, relative to |f_best|
    double f_abs_tol = 1e-300;
    int max_iterations = 5000;
    double initial_step = 0.05;       ///< relative perturbation for the initial simplex
    double initial_step_zero = 0.00025; ///< used for zero components
};

struct NelderMeadResult {
    std::vector<double> x;
    double f = 0.0;
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
};

using Objective = std::function<double(const std::vector<double>&)>;

NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0, const NelderMeadOptions& options = {});

struct FitOptions {
    double series_tol = 1e-8;       ///< during the search
    double final_series_tol = 1e-12; ///< for the reported rms
    /// Objective spread also accepted below this fraction of max |u| (noise-free data).
    double f_abs_tol_data = 1e-10;
    NelderMeadOptions nm;
    /// Called with every (M, beta, lambda_beta) the objective evaluates.
    std::function<void(double, double, double)> observer;
};

/// (M, beta, lambda_beta) start: drained plateau, beta = 0.5, half-settlement time.
std::array<double, 3> initial_guess(const CreepDataset& data);

/// Derivative-free fit in (log M, logit beta, log lambda_beta); classical fixes beta = 0.
FitResult fit_creep(const CreepDataset& data, CreepModel model,
                    std::optional<std::array<double, 3>> x0 = std::nullopt, const FitOptions& options = {});

/// Best of n seeded starts; start 0 is x0 (or the data-driven guess).
FitResult multistart_fit(const CreepDataset& data, CreepModel model, int n_starts, std::uint64_t seed = 1,
                         std::optional<std::array<double, 3>> x0 = std::nullopt, const FitOptions& options = {});

/// Creep curve sampled at `t` with optional multiplicative Gaussian noise of relative size `noise`.
CreepDataset synthesize_creep(const std::string& sample_id, double M, double beta, double lambda_beta, double h,
                              double P_A, const std::vector<double>& t, double noise = 0.0,
                              std::uint64_t seed = 1);

/// Uniform cadence 0, dt, ..., t_end.
std::vector<double> uniform_times(double dt, double t_end);

} // namespace fracporo

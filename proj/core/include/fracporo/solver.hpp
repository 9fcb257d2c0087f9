#pragma once

#include "fracporo/material.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace fracporo {

/// Uniform space-time grid; z = 0 is the loaded top, z = h the drained base.
struct Grid1D {
    double h = 0.0;
    int nz = 61;
    double dt = 0.1;
    int nt = 4000;

    double dz() const { return h / (nz - 1); }
    void validate() const;
};

enum class LoadMode { stress_step, stress_ramp_hold, displacement_ramp_steps };

/**
 * @brief Piecewise-linear load history.
 *
 * Stress modes prescribe the compressive top stress (Pa); the displacement
 * mode prescribes the top compression (m). Values are held after the last knot.
 */
struct LoadProgram {
    LoadMode mode = LoadMode::stress_step;
    std::vector<std::pair<double, double>> knots; ///< (t, value), t increasing

    double value(double t) const;
    bool stress_controlled() const { return mode != LoadMode::displacement_ramp_steps; }

    static LoadProgram stress_step(double P_A);
    static LoadProgram stress_ramp_hold(double P_A, double ramp_time);

    /**
     * Preconditioning compression followed by equal relaxation steps, all
     * ramps at `rate` (fraction of h per second) and each followed by a hold.
     */
    static LoadProgram relaxation(double h, double precondition = 0.10, int steps = 5, double step = 0.02,
                                  double rate = 0.003, double hold = 300.0, double precondition_hold = 300.0);
};

struct SolverOptions {
    std::size_t memory_window = 0; ///< GL short-memory window in steps, 0 = full history
    int output_every = 1;          ///< keep every n-th step
};

/// Fields on the output grid; p[k][i] and u[k][i] at time t[k], depth z[i].
struct SolveResult {
    std::vector<double> z;
    std::vector<double> t;
    std::vector<std::vector<double>> p;       ///< Pa
    std::vector<std::vector<double>> u;       ///< m, compression positive, u(h) = 0
    std::vector<double> flux_base;            ///< outflow through the base, m/s
    std::vector<double> reaction_stress_top;  ///< compressive top stress, Pa
};

/**
 * @brief Implicit fixed-step solve of the 1D fractional consolidation problem.
 *
 * Lumped linear elements in space, backward Euler for storage, GL convolution
 * (current step included) for the fractional flux. The memory starts from the
 * unloaded state, so a step load is resolved in the first increment; the t = 0
 * row of a stress step reports the undrained state.
 */
SolveResult solve(const Grid1D& grid, const LoadProgram& load, const ConsolidationParams& params,
                  SolverOptions options = {});
SolveResult solve(const Grid1D& grid, const LoadProgram& load, const MaterialParams& params,
                  SolverOptions options = {});

/// Displacement-controlled run; throws unless the program is a displacement program.
SolveResult simulate_relaxation(const Grid1D& grid, const LoadProgram& program, const ConsolidationParams& params,
                                SolverOptions options = {});

/// Stress ramp followed by a hold.
SolveResult simulate_creep_with_ramp(const Grid1D& grid, double P_A, double ramp_time,
                                     const ConsolidationParams& params, SolverOptions options = {});

/// Total fluid content per unit area sum_i m_i zeta_i for output row k.
double fluid_content(const SolveResult& result, const ConsolidationParams& params, std::size_t k);

/// Relative L2 norm ||a - b|| / ||b|| over all rows.
double relative_l2(const std::vector<std::vector<double>>& a, const std::vector<std::vector<double>>& b,
                   std::size_t first_row = 0);

} // namespace fracporo

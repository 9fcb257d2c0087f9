#pragma once

#include "fracporo/material.hpp"

#include <vector>

namespace fracporo {

/// 1D confined compression: loaded, impermeable top at z = 0; fixed, drained base at z = h.
struct ConsolidationProblem {
    double h = 0.0;   ///< sample height, m
    double P_A = 0.0; ///< applied compressive stress, Pa
    ConsolidationParams params;
    double series_tol = 1e-10; ///< truncation tolerance relative to the field scale
    int n_max = 9999;          ///< largest odd harmonic
    bool single_term = false;  ///< keep only n = 1

    void validate() const;
};

struct SeriesStats {
    int terms = 0;          ///< odd harmonics summed explicitly
    bool converged = false; ///< stop criterion met before n_max
    bool tail_used = false; ///< asymptotic tail added in closed form
};

/// Pore pressure p(z, t), Pa.
double pore_pressure(const ConsolidationProblem& prob, double z, double t, SeriesStats* stats = nullptr);
std::vector<double> pore_pressure_profile(const ConsolidationProblem& prob, const std::vector<double>& z,
                                          double t, SeriesStats* stats = nullptr);

/// Axial displacement u(z, t), m (positive = compression toward the base).
double displacement(const ConsolidationProblem& prob, double z, double t, SeriesStats* stats = nullptr);
std::vector<double> displacement_profile(const ConsolidationProblem& prob, const std::vector<double>& z,
                                         double t, SeriesStats* stats = nullptr);

/// Top-surface creep curve of the incompressible model, the fitting form.
double displacement_incompressible(double M, double beta, double lambda_beta, double h, double P_A, double t,
                                   double series_tol = 1e-10, int n_max = 9999);

/// The same creep curve at many times, sharing one Mittag-Leffler evaluator.
std::vector<double> creep_curve_incompressible(double M, double beta, double lambda_beta, double h, double P_A,
                                               const std::vector<double>& t, double series_tol = 1e-10,
                                               int n_max = 9999);

/// Fluid discharge per unit area through the drained base, m/s. Throws for t <= 0 when beta > 0.
double flux_at_base(const ConsolidationProblem& prob, double t, SeriesStats* stats = nullptr);

/// Fractional-Darcy flux under a constant gradient, normalized by its value at t_ref.
double normalized_flux_constant_gradient(double lambda_beta, double beta, double grad_p, double t,
                                         double t_ref = 1.0);

/// Sample weight W0 - w_s A int_0^t flux, kg.
double weight_loss(const ConsolidationProblem& prob, double W0, double w_s, double area, double t,
                   SeriesStats* stats = nullptr);

/**
 * @brief Discharged fluid volume per unit area up to T by quadrature of flux_at_base.
 *
 * Oracle for weight_loss. Below the time where the drainage front is still far
 * from the loaded face the flux follows the half-space law C t^{-(1+beta)/2},
 * which is integrated in closed form; the rest uses tanh-sinh in log t.
 */
double discharged_volume_quadrature(const ConsolidationProblem& prob, double T, double tol = 1e-8);

/// Classical Terzaghi pore pressure (beta = 0) coded from the exponential series directly.
double terzaghi_classical(const ConsolidationProblem& prob, double z, double t);

/// Classical Terzaghi displacement (beta = 0) from the same exponential series.
double terzaghi_displacement(const ConsolidationProblem& prob, double z, double t);

/// Linear biphasic creep displacement, solution of u_zz = u_t / (H_A k).
double biphasic_displacement(const BiphasicParams& bi, double h, double P_A, double z, double t);

/// Undrained state right after a step load.
double undrained_pressure(const ConsolidationProblem& prob, double z);
double undrained_displacement(const ConsolidationProblem& prob, double z);

/// Drained settlement of the top surface.
double drained_settlement(const ConsolidationProblem& prob);

} // namespace fracporo

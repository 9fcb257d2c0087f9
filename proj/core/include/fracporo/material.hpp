#pragma once

#include <optional>

namespace fracporo {

/// Fractional Biot parameter set (SI units).
struct MaterialParams {
    double K = 0.0;           ///< drained bulk modulus, Pa
    double G = 0.0;           ///< shear modulus, Pa
    double alpha = 1.0;       ///< Biot coefficient
    double B = 1.0;           ///< Skempton coefficient
    double lambda_beta = 0.0; ///< anomalous permeability, m^4 N^-1 s^(beta-1)
    double beta = 0.0;        ///< fractional order
    std::optional<double> poisson; ///< annotation only
};

struct DerivedParams {
    double K_u = 0.0;        ///< undrained bulk modulus, Pa
    double gamma = 0.0;      ///< initial pore pressure / applied stress
    double lambda_bar = 0.0; ///< consolidation diffusivity, m^2 s^(beta-1)
    double M = 0.0;          ///< aggregate modulus (3K+4G)/3, Pa
    double nu_u = 0.0;       ///< undrained Poisson ratio
};

struct BiphasicParams {
    double H_A = 0.0;         ///< aggregate modulus, Pa
    double k_over_mu = 0.0;   ///< permeability, m^4 N^-1 s^-1
    double gamma_ratio = 1.0; ///< solid/fluid volume ratio
};

/**
 * @brief Reduced 1D record consumed by the closed forms and the solver.
 *
 * Either built from a compressible MaterialParams or as the incompressible
 * limit (alpha = B = 1, gamma = 1, lambda_bar = lambda_beta M).
 */
struct ConsolidationParams {
    double M = 0.0;
    double alpha = 1.0;
    double gamma = 1.0;
    double lambda_beta = 0.0;
    double lambda_bar = 0.0;
    double beta = 0.0;
    bool incompressible = false;

    /// Storage coefficient S = lambda_beta / lambda_bar = alpha^2 (1/(K_u-K) + 1/M).
    double storage() const { return lambda_beta / lambda_bar; }
};

void validate(const MaterialParams& params);
void validate(const BiphasicParams& params);

/// Throws std::domain_error when alpha*B == 1 (use incompressible()).
DerivedParams derive(const MaterialParams& params);

/// Undrained initial pore pressure ratio from B and nu_u: B (1+nu_u) / (3 (1-nu_u)).
double undrained_pressure_ratio(double B, double nu_u);

ConsolidationParams consolidation_params(const MaterialParams& params);
ConsolidationParams incompressible(double M, double beta, double lambda_beta);

/// beta = 0 incompressible record with M = H_A and lambda_beta = k_over_mu.
ConsolidationParams biphasic_equivalence(const BiphasicParams& bi);

/// Inverse of biphasic_equivalence for beta = 0 records.
BiphasicParams to_biphasic(const ConsolidationParams& params, double gamma_ratio);

/// Axial permeability from the drag coefficient: k = 1/((1+gamma_ratio)^2 kappa).
double permeability_from_drag(double kappa, double gamma_ratio);

/// Aggregate modulus of an isotropic skeleton.
double aggregate_modulus(double K, double G);

/// K and G that reproduce aggregate modulus M at Poisson ratio nu.
MaterialParams elastic_from_aggregate(double M, double nu);

} // namespace fracporo

#include "fracporo/material.hpp"

#include <cmath>
#include <stdexcept>

namespace fracporo {

void validate(const MaterialParams& p)
{
    if (!(p.K > 0.0)) throw std::invalid_argument("material: K must be positive");
    if (!(p.G > 0.0)) throw std::invalid_argument("material: G must be positive");
    if (!(p.alpha > 0.0 && p.alpha <= 1.0)) throw std::invalid_argument("material: alpha must be in (0, 1]");
    if (!(p.B > 0.0 && p.B <= 1.0)) throw std::invalid_argument("material: B must be in (0, 1]");
    if (!(p.lambda_beta > 0.0)) throw std::invalid_argument("material: lambda_beta must be positive");
    if (!(p.beta >= 0.0 && p.beta < 1.0)) throw std::invalid_argument("material: beta must be in [0, 1)");
}

void validate(const BiphasicParams& bi)
{
    if (!(bi.H_A > 0.0)) throw std::invalid_argument("biphasic: H_A must be positive");
    if (!(bi.k_over_mu > 0.0)) throw std::invalid_argument("biphasic: k_over_mu must be positive");
    if (!(bi.gamma_ratio > 0.0)) throw std::invalid_argument("biphasic: gamma_ratio must be positive");
}

double aggregate_modulus(double K, double G) { return (3.0 * K + 4.0 * G) / 3.0; }

DerivedParams derive(const MaterialParams& p)
{
    validate(p);
    const double ab = p.alpha * p.B;
    if (ab >= 1.0) {
        throw std::domain_error("derive: alpha*B = 1 is the incompressible limit; use incompressible()");
    }
    DerivedParams d;
    d.K_u = p.K / (1.0 - ab);
    d.gamma = 3.0 * (d.K_u - p.K) / (p.alpha * (4.0 * p.G + 3.0 * d.K_u));
    d.lambda_bar = p.lambda_beta * (4.0 * p.G + 3.0 * p.K) * (d.K_u - p.K) /
                   (p.alpha * p.alpha * (4.0 * p.G + 3.0 * d.K_u));
    d.M = aggregate_modulus(p.K, p.G);
    d.nu_u = (3.0 * d.K_u - 2.0 * p.G) / (2.0 * (3.0 * d.K_u + p.G));
    return d;
}

double undrained_pressure_ratio(double B, double nu_u)
{
    return B * (1.0 + nu_u) / (3.0 * (1.0 - nu_u));
}

ConsolidationParams consolidation_params(const MaterialParams& p)
{
    if (p.alpha * p.B >= 1.0) {
        validate(p);
        return incompressible(aggregate_modulus(p.K, p.G), p.beta, p.lambda_beta);
    }
    const DerivedParams d = derive(p);
    ConsolidationParams c;
    c.M = d.M;
    c.alpha = p.alpha;
    c.gamma = d.gamma;
    c.lambda_beta = p.lambda_beta;
    c.lambda_bar = d.lambda_bar;
    c.beta = p.beta;
    c.incompressible = false;
    return c;
}

ConsolidationParams incompressible(double M, double beta, double lambda_beta)
{
    if (!(M > 0.0)) throw std::invalid_argument("incompressible: M must be positive");
    if (!(beta >= 0.0 && beta < 1.0)) throw std::invalid_argument("incompressible: beta must be in [0, 1)");
    if (!(lambda_beta > 0.0)) throw std::invalid_argument("incompressible: lambda_beta must be positive");
    ConsolidationParams c;
    c.M = M;
    c.alpha = 1.0;
    c.gamma = 1.0;
    c.lambda_beta = lambda_beta;
    c.lambda_bar = lambda_beta * M;
    c.beta = beta;
    c.incompressible = true;
    return c;
}

ConsolidationParams biphasic_equivalence(const BiphasicParams& bi)
{
    validate(bi);
    return incompressible(bi.H_A, 0.0, bi.k_over_mu);
}

BiphasicParams to_biphasic(const ConsolidationParams& params, double gamma_ratio)
{
    if (params.beta != 0.0) throw std::invalid_argument("to_biphasic: only defined for beta = 0");
    BiphasicParams bi{params.M, params.lambda_beta, gamma_ratio};
    validate(bi);
    return bi;
}

double permeability_from_drag(double kappa, double gamma_ratio)
{
    if (!(kappa > 0.0)) throw std::invalid_argument("permeability_from_drag: kappa must be positive");
    const double s = 1.0 + gamma_ratio;
    return 1.0 / (s * s * kappa);
}

MaterialParams elastic_from_aggregate(double M, double nu)
{
    if (!(M > 0.0) || !(nu > -1.0 && nu < 0.5)) throw std::invalid_argument("elastic_from_aggregate");
    // M = K + 4G/3 with K/G = 2(1+nu)/(3(1-2nu))
    const double k_over_g = 2.0 * (1.0 + nu) / (3.0 * (1.0 - 2.0 * nu));
    MaterialParams p;
    p.G = M / (k_over_g + 4.0 / 3.0);
    p.K = k_over_g * p.G;
    p.poisson = nu;
    return p;
}

} // namespace fracporo

#pragma once

#include <cstddef>
#include <vector>

namespace fracporo {

/// Uniformly sampled signal v[k] = f(t0 + k dt).
struct SampledSignal {
    double dt = 0.0;
    std::vector<double> values;
    double t0 = 0.0;

    std::size_t size() const { return values.size(); }
    double time(std::size_t k) const { return t0 + dt * static_cast<double>(k); }
};

/**
 * @brief Grunwald-Letnikov weights c_1..c_k, returned 0-based (c[0] = c_1 = 1).
 *
 * c_{j+1} = ((j - 1 - beta)/j) c_j.
 */
std::vector<double> gl_coefficients(double beta, std::size_t k);

struct GlOptions {
    /// Short-memory window in samples (0 keeps the full history).
    std::size_t window = 0;
};

/**
 * @brief GL fractional derivative, out[k] = dt^{-beta} sum_{j=1}^{k+1} c_j v[k-j+1].
 *
 * This approximates the Riemann-Liouville derivative; it agrees with the
 * Caputo derivative only when v[0] = 0.
 */
SampledSignal gl_derivative(const SampledSignal& signal, double beta, GlOptions options = {});

/// Exact Caputo derivative of t^p: Gamma(p+1)/Gamma(p+1-beta) t^{p-beta}.
double caputo_oracle_power(double beta, double p, double t);

/// t^{b-1-alpha} E_{mu,b-alpha}(lam t^mu), the closed form of D^alpha [t^{b-1} E_{mu,b}(lam t^mu)].
double ml_fractional_derivative_identity(double alpha, double mu, double b, double lam, double t,
                                         double tol = 1e-12);

} // namespace fracporo

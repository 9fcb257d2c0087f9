#include "fracporo/fracops.hpp"

#include "fracporo/mutation.hpp"
#include "fracporo/specialfn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fracporo {

std::vector<double> gl_coefficients(double beta, std::size_t k)
{
    if (k < 1) throw std::invalid_argument("gl_coefficients: k must be >= 1");
    std::vector<double> c(k);
    c[0] = 1.0;
    for (std::size_t j = 1; j < k; ++j) {
        c[j] = (static_cast<double>(j) - 1.0 - beta) / static_cast<double>(j) * c[j - 1];
    }
    if (k >= 2 && mutation::is_active(mutation::Site::gl_coefficient)) c[1] += 1e-3;
    return c;
}

SampledSignal gl_derivative(const SampledSignal& signal, double beta, GlOptions options)
{
    if (signal.values.empty()) throw std::invalid_argument("gl_derivative: empty signal");
    if (!(signal.dt > 0.0)) throw std::invalid_argument("gl_derivative: dt must be positive");
    const std::size_t n = signal.size();
    const std::size_t span = options.window == 0 ? n : std::min(n, options.window);
    const std::vector<double> c = gl_coefficients(beta, span);
    const double scale = std::pow(signal.dt, -beta);

    SampledSignal out{signal.dt, std::vector<double>(n), signal.t0};
    const auto& v = signal.values;
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t terms = std::min(k + 1, span);
        double acc = 0.0;
        for (std::size_t j = 0; j < terms; ++j) acc += c[j] * v[k - j];
        out.values[k] = scale * acc;
    }
    return out;
}

double caputo_oracle_power(double beta, double p, double t)
{
    if (!(beta > 0.0 && beta < 1.0) || !(p > 0.0) || !(t > 0.0)) {
        throw std::domain_error("caputo_oracle_power: need 0 < beta < 1, p > 0, t > 0");
    }
    return gamma(p + 1.0) * reciprocal_gamma(p + 1.0 - beta) * std::pow(t, p - beta);
}

double ml_fractional_derivative_identity(double alpha, double mu, double b, double lam, double t,
                                         double tol)
{
    if (!(t > 0.0)) throw std::domain_error("ml_fractional_derivative_identity: need t > 0");
    return std::pow(t, b - 1.0 - alpha) * mittag_leffler(mu, b - alpha, lam * std::pow(t, mu), tol);
}

} // namespace fracporo

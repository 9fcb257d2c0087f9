#include "fracporo/analytic.hpp"

#include "fracporo/mutation.hpp"
#include "fracporo/specialfn.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fracporo {

namespace {

constexpr double kPi = std::numbers::pi;

double ml_tolerance(double series_tol) { return std::clamp(0.01 * series_tol, 1e-14, 1e-6); }

// Upper bound of E_{a,1}(-x) on the negative axis, 0 < a <= 1.
double ml_bound(double a, double x) { return 1.0 / (1.0 + x * reciprocal_gamma(1.0 + a)); }

double odd_sign(int n) { return ((n - 1) / 2) % 2 == 0 ? 1.0 : -1.0; }

double fourier_c(int n)
{
    double c = 4.0 / (n * kPi) * odd_sign(n);
    if (n == 1 && mutation::is_active(mutation::Site::fourier_coefficient)) c *= 1.0 + 1e-6;
    return c;
}

// kappa such that the n-th mode argument is -kappa n^2.
double mode_rate(const ConsolidationProblem& prob, double t)
{
    const double a = 1.0 - prob.params.beta;
    return kPi * kPi * prob.params.lambda_bar * std::pow(t, a) / (4.0 * prob.h * prob.h);
}

struct ModeSum {
    double value = 0.0;
    SeriesStats stats;
};

// sum over odd n of n^{-s} E(-kappa n^2); once the asymptotic expansion of E is
// accurate, the remaining tail is summed in closed form with Hurwitz zeta values.
ModeSum odd_mode_sum(const MittagLeffler& E, double kappa, double s, double rel_tol, int n_max, bool single)
{
    ModeSum out;
    double abs_tol = 0.0;
    for (int n = 1; n <= n_max; n += 2) {
        const double x = kappa * n * n;
        if (n > 1 && !single) {
            const double local_tol = abs_tol * std::pow(static_cast<double>(n), s - 1.0);
            const int K = E.asymptotic_order(x, local_tol);
            if (K > 0) {
                double tail = 0.0;
                for (int k = 1; k <= K; ++k) {
                    const double d = E.asymptotic_coefficient(k);
                    if (d == 0.0) continue;
                    const double q = s + 2.0 * k;
                    tail += d * std::pow(kappa, -k) * std::pow(2.0, -q) * hurwitz_zeta(q, 0.5 * n);
                }
                out.value += tail;
                out.stats.tail_used = true;
                out.stats.converged = true;
                return out;
            }
        }
        const double term = std::pow(static_cast<double>(n), -s) * E(-x);
        out.value += term;
        ++out.stats.terms;
        if (n == 1) abs_tol = std::max(rel_tol * std::abs(term), 1e-300);
        if (single) {
            out.stats.converged = true;
            return out;
        }
    }
    return out;
}

void check_depth(const ConsolidationProblem& prob, double z)
{
    if (!(z >= 0.0 && z <= prob.h)) throw std::domain_error("analytic: z must lie in [0, h]");
}

void check_time(double t)
{
    if (!(t >= 0.0)) throw std::domain_error("analytic: series diverges for t < 0");
}

} // namespace

void ConsolidationProblem::validate() const
{
    if (!(h > 0.0)) throw std::invalid_argument("problem: h must be positive");
    if (!(P_A > 0.0)) throw std::invalid_argument("problem: P_A must be positive");
    if (!(series_tol > 0.0)) throw std::invalid_argument("problem: series_tol must be positive");
    if (n_max < 1 || n_max % 2 == 0) throw std::invalid_argument("problem: n_max must be odd and >= 1");
    if (!(params.M > 0.0) || !(params.lambda_bar > 0.0) || !(params.lambda_beta > 0.0)) {
        throw std::invalid_argument("problem: invalid consolidation parameters");
    }
    if (!(params.beta >= 0.0 && params.beta < 1.0)) throw std::invalid_argument("problem: beta must be in [0, 1)");
}

std::vector<double> pore_pressure_profile(const ConsolidationProblem& prob, const std::vector<double>& z,
                                          double t, SeriesStats* stats)
{
    prob.validate();
    check_time(t);
    for (double zi : z) check_depth(prob, zi);

    const double a = 1.0 - prob.params.beta;
    const double kappa = mode_rate(prob, t);
    const MittagLeffler E(a, 1.0, ml_tolerance(prob.series_tol));
    std::vector<double> out(z.size(), 0.0);
    SeriesStats st;
    const int n_last = prob.single_term ? 1 : prob.n_max;
    for (int n = 1; n <= n_last; n += 2) {
        const double x = kappa * n * n;
        const double bound = std::abs(fourier_c(n)) * (t == 0.0 ? 1.0 : ml_bound(a, x));
        if (bound < prob.series_tol) {
            st.converged = true;
            break;
        }
        const double En = t == 0.0 ? 1.0 : E(-x);
        const double cn = fourier_c(n);
        const double k = n * kPi / (2.0 * prob.h);
        for (std::size_t i = 0; i < z.size(); ++i) out[i] += cn * En * std::cos(k * z[i]);
        ++st.terms;
    }
    if (prob.single_term) st.converged = true;
    const double scale = prob.P_A * prob.params.gamma;
    for (std::size_t i = 0; i < z.size(); ++i) out[i] = z[i] == prob.h ? 0.0 : scale * out[i];
    if (stats) *stats = st;
    return out;
}

double pore_pressure(const ConsolidationProblem& prob, double z, double t, SeriesStats* stats)
{
    return pore_pressure_profile(prob, {z}, t, stats)[0];
}

std::vector<double> displacement_profile(const ConsolidationProblem& prob, const std::vector<double>& z,
                                         double t, SeriesStats* stats)
{
    prob.validate();
    check_time(t);
    for (double zi : z) check_depth(prob, zi);

    const auto& pr = prob.params;
    const double scale = prob.P_A / pr.M;
    const double coupling = pr.gamma * pr.alpha;
    std::vector<double> out(z.size(), 0.0);
    SeriesStats st;

    if (t == 0.0) {
        // sum_n (8h/(n pi)^2)(1 - (-1)^{(n-1)/2} sin(n pi z / 2h)) = h - z exactly.
        for (std::size_t i = 0; i < z.size(); ++i) out[i] = scale * (prob.h - z[i]) * (1.0 - coupling);
        st.converged = true;
        if (stats) *stats = st;
        return out;
    }

    const double a = 1.0 - pr.beta;
    const double kappa = mode_rate(prob, t);
    const MittagLeffler E(a, 1.0, ml_tolerance(prob.series_tol));

    const bool any_interior = std::any_of(z.begin(), z.end(), [&](double v) { return v > 0.0 && v < prob.h; });
    if (any_interior) {
        std::vector<double> sums(z.size(), 0.0);
        const int n_last = prob.single_term ? 1 : prob.n_max;
        for (int n = 1; n <= n_last; n += 2) {
            const double x = kappa * n * n;
            const double w = 8.0 / (n * kPi * n * kPi); // relative to h
            const double bound = coupling * 2.0 * w * ml_bound(a, x);
            if (bound < prob.series_tol) {
                st.converged = true;
                break;
            }
            const double En = E(-x);
            const double sgn = odd_sign(n);
            const double k = n * kPi / (2.0 * prob.h);
            for (std::size_t i = 0; i < z.size(); ++i) {
                sums[i] += En * w * prob.h * (sgn * std::sin(k * z[i]) - 1.0);
            }
            ++st.terms;
        }
        if (prob.single_term) st.converged = true;
        for (std::size_t i = 0; i < z.size(); ++i) out[i] = scale * ((prob.h - z[i]) + coupling * sums[i]);
    }

    // Top surface: accelerated sum of 8h/(n pi)^2 E_n.
    bool top_done = false;
    double top = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (z[i] == 0.0) {
            if (!top_done) {
                const int n_last = prob.single_term ? 1 : prob.n_max;
                const ModeSum ms = odd_mode_sum(E, kappa, 2.0, prob.series_tol, n_last, prob.single_term);
                const double series = 8.0 * prob.h / (kPi * kPi) * ms.value;
                top = scale * (prob.h - coupling * series);
                if (!any_interior) st = ms.stats;
                top_done = true;
            }
            out[i] = top;
        } else if (z[i] == prob.h) {
            out[i] = 0.0;
        }
    }
    if (stats) *stats = st;
    return out;
}

double displacement(const ConsolidationProblem& prob, double z, double t, SeriesStats* stats)
{
    return displacement_profile(prob, {z}, t, stats)[0];
}

double displacement_incompressible(double M, double beta, double lambda_beta, double h, double P_A, double t,
                                   double series_tol, int n_max)
{
    ConsolidationProblem prob;
    prob.h = h;
    prob.P_A = P_A;
    prob.params = incompressible(M, beta, lambda_beta);
    prob.series_tol = series_tol;
    prob.n_max = n_max;
    return displacement(prob, 0.0, t);
}

std::vector<double> creep_curve_incompressible(double M, double beta, double lambda_beta, double h, double P_A,
                                               const std::vector<double>& t, double series_tol, int n_max)
{
    ConsolidationProblem prob;
    prob.h = h;
    prob.P_A = P_A;
    prob.params = incompressible(M, beta, lambda_beta);
    prob.series_tol = series_tol;
    prob.n_max = n_max;
    prob.validate();
    MittagLeffler E(1.0 - beta, 1.0, ml_tolerance(series_tol));
    if (t.size() > 16) E.build_interpolant();
    std::vector<double> out(t.size());
    for (std::size_t k = 0; k < t.size(); ++k) {
        check_time(t[k]);
        if (t[k] == 0.0) {
            out[k] = 0.0;
            continue;
        }
        const ModeSum ms = odd_mode_sum(E, mode_rate(prob, t[k]), 2.0, series_tol, n_max, false);
        out[k] = P_A / M * (h - 8.0 * h / (kPi * kPi) * ms.value);
    }
    return out;
}

double flux_at_base(const ConsolidationProblem& prob, double t, SeriesStats* stats)
{
    prob.validate();
    if (!(t > 0.0)) throw std::domain_error("flux_at_base: the flux is singular at t = 0");
    const auto& pr = prob.params;
    const double a = 1.0 - pr.beta;
    const MittagLeffler E(a, a, ml_tolerance(prob.series_tol));
    const int n_last = prob.single_term ? 1 : prob.n_max;
    const ModeSum ms = odd_mode_sum(E, mode_rate(prob, t), 0.0, prob.series_tol, n_last, prob.single_term);
    if (stats) *stats = ms.stats;
    return pr.lambda_beta * prob.P_A * pr.gamma * std::pow(t, -pr.beta) * (2.0 / prob.h) * ms.value;
}

double discharged_volume_quadrature(const ConsolidationProblem& prob, double T, double tol)
{
    prob.validate();
    if (!(T > 0.0)) throw std::domain_error("discharged_volume_quadrature: need T > 0");
    const double beta = prob.params.beta;
    // front depth sqrt(lambda_bar t^{1-beta}) at h / sqrt(200)
    const double t_front = std::pow(prob.h * prob.h / (200.0 * prob.params.lambda_bar), 1.0 / (1.0 - beta));
    const double t_min = std::min(t_front, T);
    const double early = 2.0 * flux_at_base(prob, t_min) * t_min / (1.0 - beta);
    if (t_min == T) return early;
    thread_local boost::math::quadrature::tanh_sinh<double> quad;
    auto f = [&](double s) {
        const double t = std::exp(s);
        return flux_at_base(prob, t) * t;
    };
    return early + quad.integrate(f, std::log(t_min), std::log(T), tol);
}

double normalized_flux_constant_gradient(double lambda_beta, double beta, double grad_p, double t, double t_ref)
{
    if (!(lambda_beta > 0.0) || !(beta >= 0.0 && beta < 1.0) || !std::isfinite(grad_p)) {
        throw std::invalid_argument("normalized_flux_constant_gradient: invalid parameters");
    }
    if (!(t > 0.0) || !(t_ref > 0.0)) throw std::domain_error("normalized_flux_constant_gradient: need t > 0");
    if (beta == 0.0) return 1.0;
    // lambda_beta grad_p t^{-beta}/Gamma(1-beta), divided by its value at t_ref.
    return std::pow(t / t_ref, -beta);
}

double weight_loss(const ConsolidationProblem& prob, double W0, double w_s, double area, double t,
                   SeriesStats* stats)
{
    prob.validate();
    check_time(t);
    if (t == 0.0) {
        if (stats) *stats = SeriesStats{0, true, false};
        return W0;
    }
    const auto& pr = prob.params;
    const double a = 1.0 - pr.beta;
    const MittagLeffler E(a, 1.0 + a, ml_tolerance(prob.series_tol));
    const int n_last = prob.single_term ? 1 : prob.n_max;
    const ModeSum ms = odd_mode_sum(E, mode_rate(prob, t), 0.0, prob.series_tol, n_last, prob.single_term);
    if (stats) *stats = ms.stats;
    return W0 - prob.P_A * area * w_s * pr.gamma * (2.0 / prob.h) * pr.lambda_beta * std::pow(t, a) * ms.value;
}

// ---------------------------------------------------------------------------
// Classical exponential series, written against the distance from the drained
// base y = h - z with eigenvalues m_k = (2k+1) pi / 2.

namespace {

void require_classical(const ConsolidationProblem& prob)
{
    if (prob.params.beta != 0.0) throw std::invalid_argument("terzaghi: requires beta = 0");
}

constexpr int kClassicalMaxTerms = 200000;

} // namespace

double terzaghi_classical(const ConsolidationProblem& prob, double z, double t)
{
    prob.validate();
    require_classical(prob);
    check_depth(prob, z);
    check_time(t);
    const double p0 = prob.params.gamma * prob.P_A;
    const double y = (prob.h - z) / prob.h;
    if (y == 0.0) return 0.0;
    if (t == 0.0) return p0;
    const double tv = prob.params.lambda_bar * t / (prob.h * prob.h);
    double sum = 0.0;
    for (int k = 0; k < kClassicalMaxTerms; ++k) {
        const double m = (2 * k + 1) * kPi / 2.0;
        const double decay = std::exp(-m * m * tv);
        sum += 2.0 / m * std::sin(m * y) * decay;
        if (2.0 / m * decay < 1e-18) break;
    }
    return p0 * sum;
}

double terzaghi_displacement(const ConsolidationProblem& prob, double z, double t)
{
    prob.validate();
    require_classical(prob);
    check_depth(prob, z);
    check_time(t);
    const auto& pr = prob.params;
    const double p0 = pr.gamma * prob.P_A;
    const double y = (prob.h - z) / prob.h;
    // integral of p over [z, h]
    double pressure_area;
    if (t == 0.0) {
        pressure_area = p0 * (prob.h - z);
    } else {
        const double tv = pr.lambda_bar * t / (prob.h * prob.h);
        double sum = 0.0;
        for (int k = 0; k < kClassicalMaxTerms; ++k) {
            const double m = (2 * k + 1) * kPi / 2.0;
            const double decay = std::exp(-m * m * tv);
            sum += 2.0 / (m * m) * (1.0 - std::cos(m * y)) * decay;
            if (4.0 / (m * m) * decay < 1e-18) break;
        }
        pressure_area = p0 * prob.h * sum;
    }
    return (prob.P_A * (prob.h - z) - pr.alpha * pressure_area) / pr.M;
}

double biphasic_displacement(const BiphasicParams& bi, double h, double P_A, double z, double t)
{
    validate(bi);
    if (!(h > 0.0) || !(z >= 0.0 && z <= h)) throw std::domain_error("biphasic_displacement: bad geometry");
    check_time(t);
    const double y = h - z;
    if (t == 0.0 || y == 0.0) return 0.0;
    const double tv = bi.H_A * bi.k_over_mu * t / (h * h);
    double sum = 0.0;
    for (int k = 0; k < kClassicalMaxTerms; ++k) {
        const double m = (2 * k + 1) * kPi / 2.0;
        const double decay = std::exp(-m * m * tv);
        sum += 2.0 * h / (m * m) * (1.0 - std::cos(m * y / h)) * decay;
        if (4.0 / (m * m) * decay < 1e-18) break;
    }
    return P_A / bi.H_A * (y - sum);
}

double undrained_pressure(const ConsolidationProblem& prob, double z)
{
    check_depth(prob, z);
    return z == prob.h ? 0.0 : prob.params.gamma * prob.P_A;
}

double undrained_displacement(const ConsolidationProblem& prob, double z)
{
    check_depth(prob, z);
    const auto& pr = prob.params;
    return prob.P_A / pr.M * (prob.h - z) * (1.0 - pr.gamma * pr.alpha);
}

double drained_settlement(const ConsolidationProblem& prob)
{
    return prob.P_A * prob.h / prob.params.M;
}

} // namespace fracporo

#pragma once

#include <stdexcept>
#include <vector>

namespace fracporo {

/// Raised when Gamma is evaluated at 0, -1, -2, ...
class PoleError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Raised when no Mittag-Leffler evaluation regime reaches the requested tolerance.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/** @brief Euler Gamma function (Lanczos, g=7, n=9) with reflection for x < 0.5. */
double gamma(double x);

/** @brief log|Gamma(x)|. */
double log_gamma(double x);

/** @brief 1/Gamma(x); returns exactly 0 at the poles. */
double reciprocal_gamma(double x);

/// sin(pi*x) with exact zeros at integers.
double sin_pi(double x);

/**
 * @brief Two-parameter Mittag-Leffler function E_{a,b}(z) for real z.
 *
 * Construction caches the series and asymptotic coefficients for one (a, b)
 * pair so repeated evaluation along a mode sum stays cheap.
 *
 * Regimes:
 *  - Taylor series, accepted when the cancellation estimate is below tol;
 *  - large-|z| asymptotic expansion (plus the exponential pole terms when a > 1);
 *  - for z < 0: an integral representation on the collapsed Hankel contour
 *    (0 < a < 2, a != 1), or a Kummer-transformed positive series when a == 1.
 */
class MittagLeffler {
public:
    static constexpr int kMaxTerms = 10000;

    MittagLeffler(double a, double b, double tol = 1e-12);

    double operator()(double z) const;

    double a() const { return a_; }
    double b() const { return b_; }
    double tol() const { return tol_; }

    /// Coefficient d_k in E_{a,b}(-x) ~ sum_k d_k x^{-k}: d_k = (-1)^{k+1}/Gamma(b - a k).
    double asymptotic_coefficient(int k) const;

    /**
     * @brief Number of asymptotic terms giving absolute error below
     *        `abs_tol` at E(-x), or 0 if the expansion is not that accurate.
     *
     * The error estimate includes the exponentially small remainder, so for
     * a = 1 the expansion (which is identically zero) is accepted only once
     * exp(-x) itself is negligible.
     */
    int asymptotic_order(double x, double abs_tol) const;

    /// Crossover used before attempting the asymptotic expansion.
    double z_switch() const { return z_switch_; }

    /**
     * @brief Tabulate the integral regime on the negative axis as piecewise
     *        Chebyshev interpolants (0 < a < 1 only).
     *
     * Worth it when one evaluator serves many calls; pieces are refined until
     * the trailing coefficients fall below tol.
     */
    void build_interpolant();
    bool has_interpolant() const { return !pieces_.empty(); }

    // Individual regimes, exposed for continuity tests; they do not fall back.
    bool try_series(double z, double& value) const;
    bool try_asymptotic(double z, double& value) const;
    double integral_representation(double z) const;

private:
    double series_coefficient(int k) const;
    double kummer_negative(double x) const;
    double interpolate(double x) const;

    struct Piece {
        double lo, hi;
        std::vector<double> coef;
    };

    double a_;
    double b_;
    double tol_;
    double z_switch_;
    std::vector<double> series_rg_;   // 1/Gamma(a k + b)
    std::vector<double> asym_coef_;   // (-1)^{k+1}/Gamma(b - a k), index k-1
    std::vector<Piece> pieces_;
};

/** @brief E_{a,b}(z) to relative error tol. */
double mittag_leffler(double a, double b, double z, double tol = 1e-12);

/** @brief Hurwitz zeta sum_{j>=0} (j+q)^{-s} for s > 1, q > 0. */
double hurwitz_zeta(double s, double q);

} // namespace fracporo

#include "fracporo/specialfn.hpp"

#include "fracporo/mutation.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>

namespace fracporo {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

constexpr double kLanczosG = 7.0;
constexpr double kLanczos[9] = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7,
};

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

// Lanczos sum A_g(x) for the shifted argument x (= original x - 1).
double lanczos_sum(double x)
{
    double c1 = kLanczos[1];
    if (mutation::is_active(mutation::Site::lanczos_coefficient)) c1 *= 1.0 + 1e-6;
    double sum = kLanczos[0] + c1 / (x + 1.0);
    for (int i = 2; i < 9; ++i) sum += kLanczos[i] / (x + i);
    return sum;
}

// Gamma for x >= 0.5.
double gamma_lanczos(double x)
{
    x -= 1.0;
    const double t = x + kLanczosG + 0.5;
    const double s = lanczos_sum(x);
    // t^(x+0.5) split in two halves to delay overflow.
    const double half = std::pow(t, 0.5 * (x + 0.5));
    return std::sqrt(2.0 * kPi) * half * (half * std::exp(-t)) * s;
}

double log_gamma_lanczos(double x)
{
    x -= 1.0;
    const double t = x + kLanczosG + 0.5;
    return 0.5 * std::log(2.0 * kPi) + (x + 0.5) * std::log(t) - t + std::log(lanczos_sum(x));
}

} // namespace

double sin_pi(double x)
{
    double r = std::fmod(x, 2.0); // (-2, 2)
    if (r > 1.0) r -= 2.0;
    if (r < -1.0) r += 2.0;
    if (r == 0.0 || r == 1.0 || r == -1.0) return 0.0;
    if (r > 0.5) r = 1.0 - r;
    if (r < -0.5) r = -1.0 - r;
    return std::sin(kPi * r);
}

double gamma(double x)
{
    if (std::isnan(x)) return x;
    if (is_nonpositive_integer(x)) {
        std::ostringstream os;
        os << "gamma: pole at x = " << x;
        throw PoleError(os.str());
    }
    if (x < 0.5) return kPi / (sin_pi(x) * gamma(1.0 - x));
    if (x > 171.7) return std::numeric_limits<double>::infinity();
    return gamma_lanczos(x);
}

double log_gamma(double x)
{
    if (is_nonpositive_integer(x)) throw PoleError("log_gamma: pole");
    if (x < 0.5) return std::log(kPi / std::abs(sin_pi(x))) - log_gamma(1.0 - x);
    return log_gamma_lanczos(x);
}

double reciprocal_gamma(double x)
{
    if (is_nonpositive_integer(x)) return 0.0;
    if (x >= 0.5) {
        if (x > 170.0) return std::exp(-log_gamma_lanczos(x));
        return 1.0 / gamma_lanczos(x);
    }
    // 1/Gamma(x) = sin(pi x) Gamma(1-x) / pi
    const double s = sin_pi(x);
    if (1.0 - x > 170.0) {
        const double mag = std::exp(std::log(std::abs(s) / kPi) + log_gamma_lanczos(1.0 - x));
        return s < 0 ? -mag : mag;
    }
    return s * gamma_lanczos(1.0 - x) / kPi;
}

double hurwitz_zeta(double s, double q)
{
    if (!(s > 1.0) || !(q > 0.0)) throw std::domain_error("hurwitz_zeta: need s > 1, q > 0");
    // Direct summation up to a shift, then Euler-Maclaurin.
    const double shift = std::max(16.0, s);
    double sum = 0.0;
    double Q = q;
    while (Q < shift) {
        sum += std::pow(Q, -s);
        Q += 1.0;
    }
    // B_{2m}/(2m)!
    static constexpr double kB[] = {
        1.0 / 12.0,          -1.0 / 720.0,           1.0 / 30240.0,
        -1.0 / 1209600.0,    1.0 / 47900160.0,       -691.0 / 1307674368000.0,
        1.0 / 74724249600.0, -3617.0 / 10670622842880000.0,
    };
    double tail = std::pow(Q, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(Q, -s);
    double rising = s;             // s (s+1) ... (s+2m-2)
    double qpow = std::pow(Q, -s - 1.0);
    for (int m = 1; m <= 8; ++m) {
        tail += kB[m - 1] * rising * qpow;
        rising *= (s + 2 * m - 1) * (s + 2 * m);
        qpow /= Q * Q;
    }
    return sum + tail;
}

// ---------------------------------------------------------------------------

namespace {

// (-1)^{k+1} / Gamma(b - a k)
double signed_reciprocal_gamma(double a, double b, int k)
{
    const double arg = b - a * k;
    // b - a k rounded off a pole of Gamma leaves a ~1e-16 residue instead of an exact zero,
    // which would fool the optimal-truncation test
    if (arg <= 0.0 && std::abs(arg - std::nearbyint(arg)) <= 8.0 * kEps * a * k) return 0.0;
    const double sign = (k % 2 == 1) ? 1.0 : -1.0;
    return sign * reciprocal_gamma(arg);
}

} // namespace

MittagLeffler::MittagLeffler(double a, double b, double tol) : a_(a), b_(b), tol_(tol)
{
    if (!(a > 0.0) || a > 2.0) throw std::invalid_argument("mittag_leffler: need 0 < a <= 2");
    if (!(b > 0.0)) throw std::invalid_argument("mittag_leffler: need b > 0");
    if (!(tol > 0.0)) throw std::invalid_argument("mittag_leffler: need tol > 0");
    z_switch_ = std::max(10.0, (2.0 - b) / a);

    constexpr int kCached = 400;
    series_rg_.resize(kCached);
    for (int k = 0; k < kCached; ++k) series_rg_[k] = reciprocal_gamma(a * k + b);
    if (mutation::is_active(mutation::Site::ml_series)) {
        for (int k = 1; k < kCached; ++k) series_rg_[k] *= 1.0 + 1e-6;
    }
    constexpr int kAsym = 80;
    asym_coef_.resize(kAsym);
    for (int k = 1; k <= kAsym; ++k) asym_coef_[k - 1] = signed_reciprocal_gamma(a, b, k);
}

double MittagLeffler::series_coefficient(int k) const
{
    if (k < static_cast<int>(series_rg_.size())) return series_rg_[k];
    return reciprocal_gamma(a_ * k + b_);
}

double MittagLeffler::asymptotic_coefficient(int k) const
{
    if (k >= 1 && k <= static_cast<int>(asym_coef_.size())) return asym_coef_[k - 1];
    return signed_reciprocal_gamma(a_, b_, k);
}

bool MittagLeffler::try_series(double z, double& value) const
{
    const double az = std::abs(z);
    const double logz = std::log(az);
    double sum = 0.0;
    double maxabs = 0.0;
    double zk = 1.0;
    bool log_path = false;
    int small_run = 0;
    // |E_{a,b}(-x)| <= 1/Gamma(b) when 0 < a <= 1 <= b (complete monotonicity),
    // so cancellation beyond that bound is a certain failure.
    const double bound = (z < 0.0 && a_ <= 1.0 && b_ >= a_ && b_ >= 1.0) ? reciprocal_gamma(b_)
                                                                            : std::numeric_limits<double>::infinity();
    for (int k = 0; k < kMaxTerms; ++k) {
        double term;
        if (!log_path) {
            const double c = series_coefficient(k);
            term = c * zk;
            if (std::abs(zk) > 1e280 || (c != 0.0 && std::abs(c) < 1e-280)) log_path = true;
            zk *= z;
        } else {
            const double mag = std::exp(k * logz - log_gamma(a_ * k + b_));
            term = (z < 0 && (k % 2 == 1)) ? -mag : mag;
        }
        sum += term;
        maxabs = std::max(maxabs, std::abs(term));
        if (4.0 * kEps * maxabs > tol_ * bound) return false;
        // Term-ratio test: past the peak, stop once two consecutive terms are negligible.
        const bool past_peak = az < std::pow(a_ * k + b_ + 1.0, a_);
        if (past_peak && std::abs(term) <= 0.25 * kEps * std::abs(sum)) {
            if (++small_run >= 2) {
                const double cancellation = 4.0 * kEps * maxabs * std::sqrt(static_cast<double>(k + 1));
                if (z < 0.0 && cancellation > tol_ * std::abs(sum)) return false;
                value = sum;
                return true;
            }
        } else {
            small_run = 0;
        }
    }
    return false;
}

bool MittagLeffler::try_asymptotic(double z, double& value) const
{
    if (z == 0.0) return false;
    const double x = std::abs(z);
    double sum = 0.0;
    double remainder = 0.0;

    if (z < 0.0) {
        // Exponentially small contribution from the singularities at
        // s = x^{1/a} e^{+-i pi/a}; on the principal sheet when a > 1.
        const double r = std::pow(x, 1.0 / a_);
        const double c = std::cos(kPi / a_);
        if (a_ > 1.0) {
            const std::complex<double> s = std::polar(r, kPi / a_);
            const std::complex<double> res = std::pow(s, 1.0 - b_) * std::exp(s);
            sum += 2.0 / a_ * res.real();
        } else if (c < 0.0) {
            remainder = std::pow(x, (1.0 - b_) / a_) / a_ * std::exp(r * c);
        }
        double prev = std::numeric_limits<double>::infinity();
        double xk = 1.0;
        int small_run = 0;
        for (int k = 1; k < 400; ++k) {
            xk /= x;
            const double term = asymptotic_coefficient(k) * xk;
            const double mag = std::abs(term);
            if (mag != 0.0 && mag > prev && k > 2) {
                // Terms started to grow: optimal truncation reached.
                remainder += prev;
                break;
            }
            sum += term;
            if (mag != 0.0) prev = mag;
            if (mag <= 0.1 * tol_ * std::abs(sum)) {
                if (++small_run >= 2) break;
            } else {
                small_run = 0;
            }
        }
    } else {
        // z > 0: dominant exponential plus algebraic correction.
        const double r = std::pow(x, 1.0 / a_);
        if (r > 700.0) return false;
        sum = std::pow(x, (1.0 - b_) / a_) * std::exp(r) / a_;
        double xk = 1.0;
        double prev = std::numeric_limits<double>::infinity();
        for (int k = 1; k < 200; ++k) {
            xk /= x;
            const double c = asymptotic_coefficient(k);
            const double term = ((k % 2 == 1) ? -c : c) * xk;
            const double mag = std::abs(term);
            if (mag != 0.0 && mag > prev && k > 2) {
                remainder += prev;
                break;
            }
            sum += term;
            if (mag != 0.0) prev = mag;
            if (mag < kEps * std::abs(sum)) break;
        }
    }
    if (!(remainder <= tol_ * std::abs(sum)) || sum == 0.0) return false;
    value = sum;
    return true;
}

int MittagLeffler::asymptotic_order(double x, double abs_tol) const
{
    if (!(x > 0.0)) return 0;
    const double r = std::pow(x, 1.0 / a_);
    const double c = std::cos(kPi / a_);
    if (a_ > 1.0) return 0; // oscillatory pole terms; no algebraic tail
    if (c < 0.0) {
        const double rem = std::pow(x, (1.0 - b_) / a_) / a_ * std::exp(r * c);
        if (rem > 0.5 * abs_tol) return 0;
    }
    double xk = 1.0;
    double prev = std::numeric_limits<double>::infinity();
    int small_run = 0;
    for (int k = 1; k < 60; ++k) {
        xk /= x;
        const double mag = std::abs(asymptotic_coefficient(k) * xk);
        if (mag != 0.0 && mag > prev && k > 2) return 0;
        if (mag != 0.0) prev = mag;
        if (mag <= 0.25 * abs_tol) {
            if (++small_run >= 2) return k;
        } else {
            small_run = 0;
        }
    }
    return 0;
}

double MittagLeffler::kummer_negative(double x) const
{
    // E_{1,b}(-x) = (1/Gamma(b)) [e^{-x} + (b-1) sum_{k>=1} P_k/(k+b-1)],
    // with P_k = e^{-x} x^k/k! the Poisson weights.
    double pk = std::exp(-x);
    double s = 0.0;
    for (int k = 1; k < kMaxTerms; ++k) {
        pk *= x / k;
        const double term = pk / (k + b_ - 1.0);
        s += term;
        if (k > x && term < 0.25 * kEps * std::abs(s)) {
            return reciprocal_gamma(b_) * (std::exp(-x) + (b_ - 1.0) * s);
        }
    }
    throw ConvergenceError("mittag_leffler: Kummer series did not converge");
}

double MittagLeffler::integral_representation(double z) const
{
    if (!(z < 0.0)) throw std::domain_error("integral representation needs z < 0");
    if (a_ == 1.0) return kummer_negative(-z);
    if (b_ >= 1.0 + a_) {
        // E_{a,b}(z) = (E_{a,b-a}(z) - 1/Gamma(b-a)) / z
        const MittagLeffler lower(a_, b_ - a_, tol_);
        return (lower(z) - reciprocal_gamma(b_ - a_)) / z;
    }
    const double x = -z;
    const double sb = sin_pi(b_);
    const double sab = sin_pi(a_ - b_);
    const double ca = std::cos(kPi * a_);
    const double expo = (1.0 - b_) / a_;
    const double inv_a = 1.0 / a_;
    auto f = [&](double rho) {
        if (rho <= 0.0) return 0.0;
        const double den = rho * rho + 2.0 * x * rho * ca + x * x;
        return std::exp(-std::pow(rho, inv_a)) * std::pow(rho, expo) * (rho * sb - x * sab) / den;
    };
    // e^{-rho^{1/a}} < e^{-60} beyond rho_c; the tail is dropped.
    const double rho_c = std::pow(60.0, a_);
    thread_local boost::math::quadrature::tanh_sinh<double> finite;
    const double qtol = std::min(1e-13, 0.01 * tol_);
    const double split = std::min(x, rho_c);
    const double i1 = finite.integrate(f, 0.0, split, qtol);
    // shifted so both pieces start at 0, which keeps tanh_sinh abscissae off the endpoint
    auto g = [&](double s) { return f(split + s); };
    const double i2 = rho_c > split ? finite.integrate(g, 0.0, rho_c - split, qtol) : 0.0;
    double value = (i1 + i2) / (kPi * a_);
    if (a_ > 1.0) {
        const std::complex<double> s = std::polar(std::pow(x, inv_a), kPi / a_);
        value += 2.0 / a_ * (std::pow(s, 1.0 - b_) * std::exp(s)).real();
    }
    return value;
}

double MittagLeffler::operator()(double z) const
{
    if (!std::isfinite(z)) throw std::invalid_argument("mittag_leffler: z must be finite");
    if (z == 0.0) return series_coefficient(0);
    if (a_ == 1.0 && b_ == 1.0) return std::exp(z);

    double value = 0.0;
    if (z > 0.0) {
        if (try_series(z, value)) return value;
        if (try_asymptotic(z, value)) return value;
        throw ConvergenceError("mittag_leffler: no regime converged for z > 0");
    }
    const double x = -z;
    if (!pieces_.empty() && x >= pieces_.front().lo && x <= pieces_.back().hi) return interpolate(x);
    if (x < z_switch_) {
        if (try_series(z, value)) return value;
        if (try_asymptotic(z, value)) return value;
    } else {
        if (try_asymptotic(z, value)) return value;
    }
    return integral_representation(z);
}

double MittagLeffler::interpolate(double x) const
{
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), x, [](double v, const Piece& p) { return v < p.hi; });
    if (it == pieces_.end()) --it;
    // Clenshaw recurrence on [lo, hi]
    const double s = (2.0 * x - it->lo - it->hi) / (it->hi - it->lo);
    double b1 = 0.0, b2 = 0.0;
    for (std::size_t k = it->coef.size(); k-- > 1;) {
        const double b0 = 2.0 * s * b1 - b2 + it->coef[k];
        b2 = b1;
        b1 = b0;
    }
    return s * b1 - b2 + it->coef[0];
}

void MittagLeffler::build_interpolant()
{
    pieces_.clear();
    if (!(a_ < 1.0) || !(b_ >= a_)) return;

    // Gap between the accurate series (small x) and the accurate expansion (large x).
    double v = 0.0;
    auto series_ok = [&](double x) { return try_series(-x, v); };
    auto asym_ok = [&](double x) { return try_asymptotic(-x, v); };
    double lo = 1e-3;
    if (!series_ok(lo)) return;
    double hi = lo;
    while (hi < z_switch_ && series_ok(hi)) hi *= 2.0;
    if (series_ok(hi)) hi = z_switch_;
    for (int it = 0; it < 40; ++it) {
        const double mid = 0.5 * (lo + hi);
        (series_ok(mid) ? lo : hi) = mid;
    }
    const double gap_lo = lo;
    double top = std::max(gap_lo, 1.0);
    while (!asym_ok(top)) {
        top *= 1.5;
        if (top > 1e8) return;
    }
    double bot = std::max(gap_lo, top / 1.5);
    for (int it = 0; it < 40; ++it) {
        const double mid = 0.5 * (bot + top);
        (asym_ok(mid) ? top : bot) = mid;
    }
    const double gap_hi = top;
    if (!(gap_hi > gap_lo)) return;

    constexpr int n = 24;
    std::vector<std::pair<double, double>> todo{{gap_lo, gap_hi}};
    std::vector<Piece> done;
    while (!todo.empty()) {
        const auto [pl, ph] = todo.back();
        todo.pop_back();
        std::vector<double> fx(n);
        double fmin = std::numeric_limits<double>::infinity();
        for (int j = 0; j < n; ++j) {
            const double node = std::cos(kPi * (j + 0.5) / n);
            fx[j] = integral_representation(-(0.5 * (pl + ph) + 0.5 * (ph - pl) * node));
            fmin = std::min(fmin, std::abs(fx[j]));
        }
        Piece piece{pl, ph, std::vector<double>(n)};
        for (int k = 0; k < n; ++k) {
            double acc = 0.0;
            for (int j = 0; j < n; ++j) acc += fx[j] * std::cos(kPi * k * (j + 0.5) / n);
            piece.coef[k] = (k == 0 ? 1.0 : 2.0) * acc / n;
        }
        const double trailing = std::abs(piece.coef[n - 1]) + std::abs(piece.coef[n - 2]) + std::abs(piece.coef[n - 3]);
        if (trailing <= 0.1 * tol_ * fmin) {
            done.push_back(std::move(piece));
        } else {
            if (ph - pl < 1e-4 * ph || done.size() + todo.size() > 256) return; // keep the integral regime
            const double mid = 0.5 * (pl + ph);
            todo.emplace_back(pl, mid);
            todo.emplace_back(mid, ph);
        }
    }
    std::sort(done.begin(), done.end(), [](const Piece& l, const Piece& r) { return l.lo < r.lo; });
    pieces_ = std::move(done);
}

double mittag_leffler(double a, double b, double z, double tol)
{
    return MittagLeffler(a, b, tol)(z);
}

} // namespace fracporo

#include "fracporo/fitting.hpp"

#include "fracporo/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace fracporo {

void CreepDataset::validate() const
{
    if (!(h > 0.0)) throw std::invalid_argument("dataset: h must be positive");
    if (!(P_A > 0.0)) throw std::invalid_argument("dataset: P_A must be positive");
    if (t.size() != u.size()) throw std::invalid_argument("dataset: t and u differ in length");
    if (t.size() < 2) throw std::invalid_argument("dataset: need at least two samples");
    if (!(t[0] >= 0.0)) throw std::invalid_argument("dataset: t[0] must be >= 0");
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!std::isfinite(t[i]) || !std::isfinite(u[i])) throw std::invalid_argument("dataset: non-finite sample");
        if (i > 0 && !(t[i] > t[i - 1])) throw std::invalid_argument("dataset: t must be strictly increasing");
    }
}

double rms_objective(const CreepDataset& data, double M, double beta, double lambda_beta, double series_tol)
{
    const std::vector<double> model = creep_curve_incompressible(M, beta, lambda_beta, data.h, data.P_A, data.t,
                                                                 series_tol);
    double acc = 0.0;
    for (std::size_t i = 0; i < model.size(); ++i) {
        const double d = model[i] - data.u[i];
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(model.size()));
}

NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0, const NelderMeadOptions& opt)
{
    const std::size_t n = x0.size();
    if (n == 0) throw std::invalid_argument("nelder_mead: empty start point");
    for (double v : x0) {
        if (!std::isfinite(v)) throw std::invalid_argument("nelder_mead: non-finite start point");
    }

    NelderMeadResult res;
    auto eval = [&](const std::vector<double>& x) {
        ++res.evaluations;
        const double v = f(x);
        return std::isnan(v) ? INFINITY : v;
    };

    std::vector<std::vector<double>> simplex(n + 1, x0);
    std::vector<double> fv(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        double& xi = simplex[i + 1][i];
        xi = xi != 0.0 ? xi * (1.0 + opt.initial_step) : opt.initial_step_zero;
    }
    for (std::size_t i = 0; i <= n; ++i) fv[i] = eval(simplex[i]);

    std::vector<std::size_t> order(n + 1);
    auto sort_simplex = [&] {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        std::vector<std::vector<double>> s2(n + 1);
        std::vector<double> f2(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            s2[i] = simplex[order[i]];
            f2[i] = fv[order[i]];
        }
        simplex.swap(s2);
        fv.swap(f2);
    };
    auto converged = [&] {
        double size = 0.0, spread = 0.0;
        for (std::size_t i = 1; i <= n; ++i) {
            spread = std::max(spread, std::abs(fv[i] - fv[0]));
            for (std::size_t j = 0; j < n; ++j) size = std::max(size, std::abs(simplex[i][j] - simplex[0][j]));
        }
        return size <= opt.x_tol && spread <= std::max(opt.f_tol * std::abs(fv[0]), opt.f_abs_tol);
    };
    auto combine = [&](const std::vector<double>& c, const std::vector<double>& x, double coef) {
        std::vector<double> out(n);
        for (std::size_t j = 0; j < n; ++j) out[j] = c[j] + coef * (x[j] - c[j]);
        return out;
    };

    sort_simplex();
    while (!converged()) {
        if (res.iterations >= opt.max_iterations) break;
        ++res.iterations;

        std::vector<double> c(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) c[j] += simplex[i][j] / static_cast<double>(n);
        }
        const std::vector<double> xr = combine(c, simplex[n], -opt.reflection);
        const double fr = eval(xr);

        bool do_shrink = false;
        if (fr < fv[0]) {
            const std::vector<double> xe = combine(c, xr, opt.expansion);
            const double fe = eval(xe);
            if (fe < fr) {
                simplex[n] = xe;
                fv[n] = fe;
            } else {
                simplex[n] = xr;
                fv[n] = fr;
            }
        } else if (fr < fv[n - 1]) {
            simplex[n] = xr;
            fv[n] = fr;
        } else if (fr < fv[n]) {
            const std::vector<double> xc = combine(c, xr, opt.contraction);
            const double fc = eval(xc);
            if (fc <= fr) {
                simplex[n] = xc;
                fv[n] = fc;
            } else {
                do_shrink = true;
            }
        } else {
            const std::vector<double> xcc = combine(c, simplex[n], opt.contraction);
            const double fcc = eval(xcc);
            if (fcc < fv[n]) {
                simplex[n] = xcc;
                fv[n] = fcc;
            } else {
                do_shrink = true;
            }
        }
        if (do_shrink) {
            for (std::size_t i = 1; i <= n; ++i) {
                simplex[i] = combine(simplex[0], simplex[i], opt.shrink);
                fv[i] = eval(simplex[i]);
            }
        }
        sort_simplex();
    }
    res.converged = converged();
    res.x = simplex[0];
    res.f = fv[0];
    return res;
}

namespace {

double logistic(double v)
{
    v = std::clamp(v, -30.0, 30.0);
    return 1.0 / (1.0 + std::exp(-v));
}

double safe_exp(double v) { return std::exp(std::clamp(v, -700.0, 700.0)); }

std::array<double, 3> decode(const std::vector<double>& th, CreepModel model)
{
    if (model == CreepModel::classical) return {safe_exp(th[0]), 0.0, safe_exp(th[1])};
    return {safe_exp(th[0]), logistic(th[1]), safe_exp(th[2])};
}

std::vector<double> encode(const std::array<double, 3>& p, CreepModel model)
{
    if (!(p[0] > 0.0) || !(p[2] > 0.0)) throw std::invalid_argument("fit: start point needs M, lambda_beta > 0");
    if (model == CreepModel::classical) return {std::log(p[0]), std::log(p[2])};
    if (!(p[1] > 0.0 && p[1] < 1.0)) throw std::invalid_argument("fit: start beta must be in (0, 1)");
    return {std::log(p[0]), std::log(p[1] / (1.0 - p[1])), std::log(p[2])};
}

} // namespace

std::array<double, 3> initial_guess(const CreepDataset& data)
{
    data.validate();
    const double u_end = data.u.back();
    if (!(u_end > 0.0)) throw std::invalid_argument("initial_guess: final displacement must be positive");
    const double M0 = data.P_A * data.h / u_end;

    // first crossing of half the final settlement
    double t_half = data.t.back();
    for (std::size_t i = 0; i < data.t.size(); ++i) {
        if (data.u[i] >= 0.5 * u_end) {
            if (i == 0 || data.t[i - 1] <= 0.0) {
                t_half = data.t[i] > 0.0 ? data.t[i] : data.t[std::min<std::size_t>(1, data.t.size() - 1)];
            } else {
                const double w = (0.5 * u_end - data.u[i - 1]) / (data.u[i] - data.u[i - 1]);
                t_half = data.t[i - 1] + w * (data.t[i] - data.t[i - 1]);
            }
            break;
        }
    }

    // dimensionless time where the beta = 0.5 creep curve reaches one half
    constexpr double beta0 = 0.5;
    auto half = [&](double lam) {
        return creep_curve_incompressible(1.0, beta0, lam, 1.0, 1.0, {1.0}, 1e-8)[0] - 0.5;
    };
    double lo = std::log(1e-10), hi = std::log(1e3);
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        (half(std::exp(mid)) > 0.0 ? hi : lo) = mid;
    }
    const double lam_star = std::exp(0.5 * (lo + hi));
    const double lambda_bar = lam_star * data.h * data.h / std::pow(t_half, 1.0 - beta0);
    return {M0, beta0, lambda_bar / M0};
}

FitResult fit_creep(const CreepDataset& data, CreepModel model, std::optional<std::array<double, 3>> x0,
                    const FitOptions& options)
{
    data.validate();
    const auto [umin, umax] = std::minmax_element(data.u.begin(), data.u.end());
    if (*umin == *umax) throw std::invalid_argument("fit_creep: displacement is constant");

    std::array<double, 3> start = x0 ? *x0 : initial_guess(data);
    if (model == CreepModel::classical) start[1] = 0.0;

    auto objective = [&](const std::vector<double>& th) {
        const auto p = decode(th, model);
        if (options.observer) options.observer(p[0], p[1], p[2]);
        return rms_objective(data, p[0], p[1], p[2], options.series_tol);
    };
    NelderMeadOptions nm_opt = options.nm;
    const double u_scale = std::max(std::abs(*umin), std::abs(*umax));
    nm_opt.f_abs_tol = std::max(nm_opt.f_abs_tol, options.f_abs_tol_data * u_scale);
    const NelderMeadResult nm = nelder_mead(objective, encode(start, model), nm_opt);
    const auto p = decode(nm.x, model);

    FitResult r;
    r.M = p[0];
    r.beta = p[1];
    r.lambda_beta = p[2];
    r.rms = rms_objective(data, r.M, r.beta, r.lambda_beta, options.final_series_tol);
    r.iterations = nm.iterations;
    r.evaluations = nm.evaluations;
    r.converged = nm.converged;
    return r;
}

FitResult multistart_fit(const CreepDataset& data, CreepModel model, int n_starts, std::uint64_t seed,
                         std::optional<std::array<double, 3>> x0, const FitOptions& options)
{
    if (n_starts < 1) throw std::invalid_argument("multistart_fit: n_starts must be >= 1");
    const std::array<double, 3> guess = initial_guess(data);
    std::vector<std::array<double, 3>> starts;
    starts.push_back(x0 ? *x0 : guess);
    if (x0 && n_starts > 1) starts.push_back(guess);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> beta_dist(0.05, 0.95);
    while (static_cast<int>(starts.size()) < n_starts) {
        const double M = guess[0] * std::exp(unit(rng));
        const double beta = beta_dist(rng);
        const double lam = guess[2] * std::exp(3.0 * unit(rng));
        starts.push_back({M, beta, lam});
    }

    FitResult best;
    bool have = false;
    for (const auto& s : starts) {
        const FitResult r = fit_creep(data, model, s, options);
        if (!have || r.rms < best.rms) {
            best = r;
            have = true;
        }
    }
    return best;
}

CreepDataset synthesize_creep(const std::string& sample_id, double M, double beta, double lambda_beta, double h,
                              double P_A, const std::vector<double>& t, double noise, std::uint64_t seed)
{
    CreepDataset d;
    d.sample_id = sample_id;
    d.h = h;
    d.P_A = P_A;
    d.t = t;
    d.u = creep_curve_incompressible(M, beta, lambda_beta, h, P_A, t, 1e-12);
    if (noise > 0.0) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (double& v : d.u) v *= 1.0 + noise * gauss(rng);
    }
    return d;
}

std::vector<double> uniform_times(double dt, double t_end)
{
    if (!(dt > 0.0) || !(t_end >= 0.0)) throw std::invalid_argument("uniform_times: need dt > 0, t_end >= 0");
    const auto n = static_cast<std::size_t>(std::llround(t_end / dt));
    std::vector<double> t(n + 1);
    for (std::size_t i = 0; i <= n; ++i) t[i] = dt * static_cast<double>(i);
    return t;
}

} // namespace fracporo

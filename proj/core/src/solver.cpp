#include "fracporo/solver.hpp"

#include "fracporo/fracops.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fracporo {

void Grid1D::validate() const
{
    if (!(h > 0.0)) throw std::invalid_argument("grid: h must be positive");
    if (nz < 3) throw std::invalid_argument("grid: nz must be >= 3");
    if (!(dt > 0.0)) throw std::invalid_argument("grid: dt must be positive");
    if (nt < 1) throw std::invalid_argument("grid: nt must be >= 1");
}

double LoadProgram::value(double t) const
{
    if (knots.empty()) return 0.0;
    if (t <= knots.front().first) return knots.front().second;
    if (t >= knots.back().first) return knots.back().second;
    auto hi = std::upper_bound(knots.begin(), knots.end(), t,
                               [](double v, const std::pair<double, double>& k) { return v < k.first; });
    auto lo = hi - 1;
    const double w = (t - lo->first) / (hi->first - lo->first);
    return lo->second + w * (hi->second - lo->second);
}

LoadProgram LoadProgram::stress_step(double P_A)
{
    return {LoadMode::stress_step, {{0.0, P_A}}};
}

LoadProgram LoadProgram::stress_ramp_hold(double P_A, double ramp_time)
{
    if (!(ramp_time > 0.0)) throw std::invalid_argument("stress_ramp_hold: ramp_time must be positive");
    return {LoadMode::stress_ramp_hold, {{0.0, 0.0}, {ramp_time, P_A}}};
}

LoadProgram LoadProgram::relaxation(double h, double precondition, int steps, double step, double rate, double hold,
                                    double precondition_hold)
{
    if (!(h > 0.0) || !(rate > 0.0) || steps < 0 || !(step >= 0.0) || !(precondition >= 0.0) ||
        !(hold >= 0.0) || !(precondition_hold >= 0.0)) {
        throw std::invalid_argument("relaxation: invalid program");
    }
    LoadProgram prog{LoadMode::displacement_ramp_steps, {{0.0, 0.0}}};
    double t = 0.0;
    double strain = 0.0;
    auto ramp = [&](double increment, double hold_time) {
        if (increment <= 0.0) return;
        t += increment / rate;
        strain += increment;
        prog.knots.emplace_back(t, strain * h);
        if (hold_time > 0.0) {
            t += hold_time;
            prog.knots.emplace_back(t, strain * h);
        }
    };
    ramp(precondition, precondition_hold);
    for (int s = 0; s < steps; ++s) ramp(step, hold);
    return prog;
}

namespace {

void validate_program(const LoadProgram& load)
{
    if (load.knots.empty()) throw std::invalid_argument("load program: no knots");
    for (std::size_t i = 0; i < load.knots.size(); ++i) {
        if (!std::isfinite(load.knots[i].first) || !std::isfinite(load.knots[i].second)) {
            throw std::invalid_argument("load program: non-finite knot");
        }
        if (i > 0 && !(load.knots[i].first > load.knots[i - 1].first)) {
            throw std::invalid_argument("load program: knot times must increase");
        }
    }
    if (load.mode == LoadMode::displacement_ramp_steps) {
        for (std::size_t i = 1; i < load.knots.size(); ++i) {
            if (load.knots[i].second < load.knots[i - 1].second) {
                throw std::invalid_argument("load program: displacement ramps must be monotone");
            }
        }
    }
}

// Lumped nodal weights of the linear elements.
std::vector<double> lumped_mass(int nz, double dz)
{
    std::vector<double> m(nz, dz);
    m.front() = 0.5 * dz;
    m.back() = 0.5 * dz;
    return m;
}

// Factored symmetric tridiagonal matrix (Thomas algorithm).
class Tridiagonal {
public:
    Tridiagonal(std::vector<double> diag, std::vector<double> off) : d_(std::move(diag)), e_(std::move(off))
    {
        const std::size_t n = d_.size();
        w_.assign(n, 0.0);
        piv_.assign(n, 0.0);
        piv_[0] = d_[0];
        for (std::size_t i = 1; i < n; ++i) {
            w_[i] = e_[i - 1] / piv_[i - 1];
            piv_[i] = d_[i] - w_[i] * e_[i - 1];
            if (!(std::abs(piv_[i]) > 0.0)) throw std::runtime_error("solver: singular system matrix");
        }
    }

    void solve(std::vector<double>& x) const
    {
        const std::size_t n = d_.size();
        for (std::size_t i = 1; i < n; ++i) x[i] -= w_[i] * x[i - 1];
        x[n - 1] /= piv_[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) x[i] = (x[i] - e_[i] * x[i + 1]) / piv_[i];
    }

private:
    std::vector<double> d_, e_, w_, piv_;
};

} // namespace

SolveResult solve(const Grid1D& grid, const LoadProgram& load, const ConsolidationParams& params,
                  SolverOptions options)
{
    grid.validate();
    validate_program(load);
    if (!(params.M > 0.0) || !(params.lambda_beta > 0.0) || !(params.lambda_bar > 0.0) ||
        !(params.beta >= 0.0 && params.beta < 1.0)) {
        throw std::invalid_argument("solver: invalid consolidation parameters");
    }
    if (options.output_every < 1) throw std::invalid_argument("solver: output_every must be >= 1");

    const int N = grid.nz;
    const int n = N - 1; // unknown pressures p_0..p_{N-2}
    const double dz = grid.dz();
    const double dt = grid.dt;
    const double S = params.storage();
    const double a_over_M = params.alpha / params.M;
    const std::vector<double> m = lumped_mass(N, dz);

    const std::size_t span = options.memory_window == 0 ? static_cast<std::size_t>(grid.nt) + 1
                                                        : options.memory_window;
    const std::vector<double> c = gl_coefficients(params.beta, std::min<std::size_t>(span, grid.nt + 1));
    const double kflux = params.lambda_beta * std::pow(dt, -params.beta);

    // A = diag(m S / dt) - kflux * c_1 * L on the free nodes.
    std::vector<double> diag(n), off(n - 1);
    for (int i = 0; i < n; ++i) {
        const double stiff = (i == 0 ? 1.0 : 2.0) / dz;
        diag[i] = m[i] * S / dt + kflux * c[0] * stiff;
        if (i + 1 < n) off[i] = -kflux * c[0] / dz;
    }
    const Tridiagonal A(diag, off);

    std::vector<double> bvec(n), y(n);
    for (int i = 0; i < n; ++i) bvec[i] = m[i] * a_over_M / dt;
    y = bvec;
    A.solve(y);
    double wy = 0.0;
    for (int i = 0; i < n; ++i) wy += params.alpha * m[i] * y[i];

    auto apply_L = [&](const std::vector<double>& p, double* q) {
        q[0] = (p[1] - p[0]) / dz;
        for (int i = 1; i < N - 1; ++i) q[i] = (p[i - 1] - 2.0 * p[i] + p[i + 1]) / dz;
        q[N - 1] = (p[N - 2] - p[N - 1]) / dz;
    };

    auto displacement_field = [&](const std::vector<double>& p, double sigma, std::vector<double>& u) {
        u.assign(N, 0.0);
        double acc = 0.0;
        for (int i = N - 2; i >= 0; --i) {
            acc += dz * (sigma + params.alpha * 0.5 * (p[i] + p[i + 1]));
            u[i] = -acc / params.M;
        }
    };

    SolveResult res;
    res.z.resize(N);
    for (int i = 0; i < N; ++i) res.z[i] = i == N - 1 ? grid.h : i * dz;

    // Pre-load state: zero pressure, zero stress, zero fluid content.
    std::vector<double> p(N, 0.0), zeta(N, 0.0), u;
    double sigma = 0.0;

    {
        // t = 0 output row
        std::vector<double> p0(N, 0.0), u0(N, 0.0);
        double reaction0 = 0.0;
        if (load.mode == LoadMode::stress_step) {
            const double P = load.value(0.0);
            const double pu = params.gamma * P;
            for (int i = 0; i < N - 1; ++i) p0[i] = pu;
            for (int i = 0; i < N; ++i) u0[i] = P / params.M * (grid.h - res.z[i]) * (1.0 - params.gamma * params.alpha);
            reaction0 = P;
        } else if (load.stress_controlled()) {
            reaction0 = load.value(0.0);
        } else {
            const double U = load.value(0.0);
            for (int i = 0; i < N; ++i) u0[i] = U * (grid.h - res.z[i]) / grid.h;
            reaction0 = params.M * U / grid.h;
        }
        res.t.push_back(0.0);
        res.p.push_back(std::move(p0));
        res.u.push_back(std::move(u0));
        // the flux is singular at the instant of a step load; reported as 0
        res.flux_base.push_back(0.0);
        res.reaction_stress_top.push_back(reaction0);
    }

    std::vector<double> q(static_cast<std::size_t>(grid.nt) * N, 0.0); // q^k = L p^k, rows k = 1..nt
    std::vector<double> hist(N), r(n), x(n);

    for (int k = 1; k <= grid.nt; ++k) {
        const double tk = k * dt;

        // history part of the GL sum: sum_{j>=2} c_j q^{k-j+1}
        std::fill(hist.begin(), hist.end(), 0.0);
        const int jmax = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(k), c.size()));
        for (int j = 2; j <= jmax; ++j) {
            const double cj = c[j - 1];
            if (cj == 0.0) continue;
            const double* qk = &q[static_cast<std::size_t>(k - j) * N]; // q^{k-j+1}
            for (int i = 0; i < N; ++i) hist[i] += cj * qk[i];
        }

        for (int i = 0; i < n; ++i) r[i] = m[i] * zeta[i] / dt + kflux * hist[i];
        x = r;
        A.solve(x);

        if (load.stress_controlled()) {
            sigma = -load.value(tk);
        } else {
            double wx = 0.0;
            for (int i = 0; i < n; ++i) wx += params.alpha * m[i] * x[i];
            const double U = load.value(tk);
            sigma = (-params.M * U - wx) / (grid.h - wy);
        }
        for (int i = 0; i < n; ++i) p[i] = x[i] - y[i] * sigma;
        p[N - 1] = 0.0;
        for (double v : p) {
            if (!std::isfinite(v)) throw std::runtime_error("solver: non-finite pressure at step " + std::to_string(k));
        }

        double* qk = &q[static_cast<std::size_t>(k - 1) * N];
        apply_L(p, qk);

        const double zeta_base_old = zeta[N - 1];
        for (int i = 0; i < N; ++i) zeta[i] = S * p[i] + a_over_M * sigma;
        const double flux =
            -(m[N - 1] * (zeta[N - 1] - zeta_base_old) / dt - kflux * (c[0] * qk[N - 1] + hist[N - 1]));

        if (k % options.output_every == 0) {
            displacement_field(p, sigma, u);
            res.t.push_back(tk);
            res.p.push_back(p);
            res.u.push_back(u);
            res.flux_base.push_back(flux);
            res.reaction_stress_top.push_back(-sigma);
        }
    }
    return res;
}

SolveResult solve(const Grid1D& grid, const LoadProgram& load, const MaterialParams& params, SolverOptions options)
{
    return solve(grid, load, consolidation_params(params), options);
}

SolveResult simulate_relaxation(const Grid1D& grid, const LoadProgram& program, const ConsolidationParams& params,
                                SolverOptions options)
{
    if (program.mode != LoadMode::displacement_ramp_steps) {
        throw std::invalid_argument("simulate_relaxation: needs a displacement program");
    }
    return solve(grid, program, params, options);
}

SolveResult simulate_creep_with_ramp(const Grid1D& grid, double P_A, double ramp_time,
                                     const ConsolidationParams& params, SolverOptions options)
{
    return solve(grid, LoadProgram::stress_ramp_hold(P_A, ramp_time), params, options);
}

double fluid_content(const SolveResult& result, const ConsolidationParams& params, std::size_t k)
{
    if (k >= result.t.size()) throw std::out_of_range("fluid_content: row out of range");
    const std::size_t N = result.z.size();
    const double sigma = -result.reaction_stress_top[k];
    const double S = params.storage();
    double total = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        const double left = i > 0 ? result.z[i] - result.z[i - 1] : 0.0;
        const double right = i + 1 < N ? result.z[i + 1] - result.z[i] : 0.0;
        total += 0.5 * (left + right) * (S * result.p[k][i] + params.alpha / params.M * sigma);
    }
    return total;
}

double relative_l2(const std::vector<std::vector<double>>& a, const std::vector<std::vector<double>>& b,
                   std::size_t first_row)
{
    if (a.size() != b.size()) throw std::invalid_argument("relative_l2: row count mismatch");
    double num = 0.0, den = 0.0;
    for (std::size_t k = first_row; k < a.size(); ++k) {
        if (a[k].size() != b[k].size()) throw std::invalid_argument("relative_l2: column count mismatch");
        for (std::size_t i = 0; i < a[k].size(); ++i) {
            const double d = a[k][i] - b[k][i];
            num += d * d;
            den += b[k][i] * b[k][i];
        }
    }
    if (den == 0.0) return num == 0.0 ? 0.0 : INFINITY;
    return std::sqrt(num / den);
}

} // namespace fracporo

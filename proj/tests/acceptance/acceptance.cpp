// Acceptance suite: one PASS/FAIL line per criterion, indented detail lines below it.
// Exit status is the number of failed criteria.

#include "fracporo/analytic.hpp"
#include "fracporo/fitting.hpp"
#include "fracporo/fracops.hpp"
#include "fracporo/io.hpp"
#include "fracporo/mutation.hpp"
#include "fracporo/solver.hpp"
#include "fracporo/specialfn.hpp"
#include "fracporo/stats.hpp"
#include "fracporo/validate.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

using namespace fracporo;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// detail lines of the criterion being run, printed under its verdict
std::vector<std::string> g_details;

void detail(const char* fmt, ...)
{
    char buf[512];
    std::va_list ap;
    va_start(ap, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, ap);
    va_end(ap);
    g_details.emplace_back(buf);
}

struct Criterion {
    int id;
    const char* title;
    std::function<bool()> run;
};

MaterialParams table_one(double beta)
{
    MaterialParams m;
    m.K = 1.67e5;
    m.G = 7.69e4;
    m.alpha = 0.65;
    m.B = 0.88;
    m.lambda_beta = 8.33e-8;
    m.beta = beta;
    return m;
}

ConsolidationProblem table_one_problem(double beta)
{
    ConsolidationProblem pr;
    pr.h = 3e-3;
    pr.P_A = 0.07e6;
    pr.params = consolidation_params(table_one(beta));
    return pr;
}

std::vector<double> nodes(double h, int n)
{
    std::vector<double> z(n);
    for (int i = 0; i < n; ++i) z[i] = h * i / (n - 1);
    return z;
}

// 1. E_{1,1}(z) = e^z on [-50, 5] to 1e-10 relative; E_{1/2,1}(-1) = 0.4275836 +- 1e-6.
bool special_functions()
{
    double worst = 0.0, z_worst = 0.0;
    for (int i = 0; i <= 5500; ++i) {
        const double z = -50.0 + 0.01 * i;
        const double e = rel(mittag_leffler(1.0, 1.0, z), std::exp(z));
        if (e > worst) {
            worst = e;
            z_worst = z;
        }
    }
    const double half = mittag_leffler(0.5, 1.0, -1.0);
    const double erfc_oracle = std::exp(1.0) * std::erfc(1.0);
    detail("E_{1,1} vs exp on 5501 points: max rel %.3e at z = %.2f (limit 1e-10)", worst, z_worst);
    detail("E_{1/2,1}(-1) = %.12f, target 0.4275836, |diff| %.3e (limit 1e-6); e*erfc(1) = %.12f", half,
           std::abs(half - 0.4275836), erfc_oracle);
    return worst <= 1e-10 && std::abs(half - 0.4275836) <= 1e-6;
}

// 2. GL on f(t) = t, beta = 0.5, error ratio >= 1.8 per halving at t = 1.
bool gl_convergence()
{
    const double exact = 2.0 * std::sqrt(1.0 / std::numbers::pi);
    std::vector<double> err;
    for (double dt : {1e-2, 5e-3, 2.5e-3}) {
        SampledSignal s;
        s.dt = dt;
        const auto n = static_cast<std::size_t>(std::llround(1.0 / dt));
        for (std::size_t k = 0; k <= n; ++k) s.values.push_back(dt * static_cast<double>(k));
        err.push_back(std::abs(gl_derivative(s, 0.5).values.back() - exact));
    }
    const double r1 = err[0] / err[1], r2 = err[1] / err[2];
    detail("errors %.4e %.4e %.4e; ratios %.4f %.4f (limit 1.8)", err[0], err[1], err[2], r1, r2);
    return r1 >= 1.8 && r2 >= 1.8;
}

// 3. beta = 0 closed forms vs the independently coded Terzaghi series on 61 x 100.
bool classical_limit()
{
    const ConsolidationProblem pr = table_one_problem(0.0);
    const auto z = nodes(pr.h, 61);
    const double T = 2.0 * pr.h * pr.h / pr.params.lambda_bar;
    const double p_scale = pr.params.gamma * pr.P_A;
    const double u_scale = drained_settlement(pr);
    double ep = 0.0, eu = 0.0;
    for (int j = 1; j <= 100; ++j) {
        const double t = T * j / 100.0;
        const auto p = pore_pressure_profile(pr, z, t);
        const auto u = displacement_profile(pr, z, t);
        for (int i = 0; i < 61; ++i) {
            ep = std::max(ep, std::abs(p[i] - terzaghi_classical(pr, z[i], t)) / p_scale);
            eu = std::max(eu, std::abs(u[i] - terzaghi_displacement(pr, z[i], t)) / u_scale);
        }
    }
    detail("t in (0, %.3e] s; max |dp| / (gamma P_A) = %.3e, max |du| / drained settlement = %.3e (limit 1e-10)", T,
           ep, eu);
    return ep <= 1e-10 && eu <= 1e-10;
}

// 4. Solver vs closed forms, Table 1 material, dt = 0.1 s to 400 s, relative L2 <= 1%.
bool solver_vs_analytic()
{
    bool ok = true;
    for (double beta : {0.0, 0.1, 0.2, 0.4}) {
        const auto t0 = Clock::now();
        const ConsolidationProblem pr = table_one_problem(beta);
        const SolveResult r = solve(Grid1D{pr.h, 61, 0.1, 4000}, LoadProgram::stress_step(pr.P_A), pr.params);
        const double solve_s = seconds_since(t0);
        std::vector<std::vector<double>> pa, ua;
        for (double t : r.t) {
            pa.push_back(pore_pressure_profile(pr, r.z, t));
            ua.push_back(displacement_profile(pr, r.z, t));
        }
        const double ep = relative_l2(r.p, pa), eu = relative_l2(r.u, ua);
        const double secs = seconds_since(t0);
        const bool pass = ep <= 1e-2 && eu <= 1e-2 && secs < 60.0;
        ok = ok && pass;
        detail("beta %.1f: L2(p) %.3e, L2(u) %.3e (limit 1e-2); excluding t = 0: %.3e / %.3e; solve %.1f s, total %.1f s",
               beta, ep, eu, relative_l2(r.p, pa, 1), relative_l2(r.u, ua, 1), solve_s, secs);
    }
    return ok;
}

// 5. At the dimensionless time of t = 15 s, profiles for beta = 0, 0.1, 0.5 strictly ordered, higher beta lower.
bool beta_monotonicity()
{
    // 15 s expressed as Lambda = lambda_bar t^{1-beta} / h^2 for the TK11BC preset
    const io::Preset tk = io::load_preset("tk11bc");
    const double Lambda = tk.params.lambda_bar * std::pow(15.0, 1.0 - tk.params.beta) / (tk.h * tk.h);
    const int n = 61;
    std::vector<std::vector<double>> prof;
    for (double beta : {0.0, 0.1, 0.5}) {
        ConsolidationProblem pr = table_one_problem(beta);
        pr.series_tol = 1e-13;
        const double t = std::pow(Lambda * pr.h * pr.h / pr.params.lambda_bar, 1.0 / (1.0 - beta));
        auto p = pore_pressure_profile(pr, nodes(pr.h, n), t);
        for (double& v : p) v /= pr.params.gamma * pr.P_A;
        prof.push_back(std::move(p));
    }
    int ordered = 0, reversed = 0;
    int first_bad = -1;
    for (int i = 1; i < n - 1; ++i) {
        const bool lower = prof[1][i] < prof[0][i] && prof[2][i] < prof[1][i];
        const bool higher = prof[1][i] > prof[0][i] && prof[2][i] > prof[1][i];
        ordered += lower;
        reversed += higher;
        if (!lower && first_bad < 0) first_bad = i;
    }
    detail("Lambda = %.4f (TK11BC at 15 s); %d of %d interior nodes ordered higher-beta-lower, %d reversed", Lambda,
           ordered, n - 2, reversed);
    if (first_bad >= 0) {
        detail("first violation at z/h = %.3f: p/p0 = %.5f (beta 0), %.5f (0.1), %.5f (0.5)", first_bad / (n - 1.0),
               prof[0][first_bad], prof[1][first_bad], prof[2][first_bad]);
    }
    for (int i : {6, 30, 54}) {
        detail("z/h = %.1f: %.5f %.5f %.5f", i / (n - 1.0), prof[0][i], prof[1][i], prof[2][i]);
    }
    return ordered == n - 2;
}

// 6. w_s A int_0^T flux dt equals the weight-loss bracket to 1e-6 for three presets, T = 10, 100, 400 s.
bool flux_weight_identity()
{
    bool ok = true;
    for (const char* name : {"final-table-1", "draft-table-1", "tk11bc"}) {
        const io::Preset p = io::load_preset(name);
        ConsolidationProblem pr;
        pr.h = p.h;
        pr.P_A = p.P_A;
        pr.params = p.params;
        pr.series_tol = 1e-12;
        std::string line;
        for (double T : {10.0, 100.0, 400.0}) {
            const double quad = p.w_s * p.area() * discharged_volume_quadrature(pr, T);
            const double bracket = p.W0 - weight_loss(pr, p.W0, p.w_s, p.area(), T);
            const double e = rel(bracket, quad);
            ok = ok && e <= 1e-6;
            char buf[64];
            std::snprintf(buf, sizeof buf, " T=%g: %.2e", T, e);
            line += buf;
        }
        detail("%s (beta %.4g):%s (limit 1e-6)", name, p.params.beta, line.c_str());
    }
    return ok;
}

// Relative standard deviations from the Fisher information of 0.5% multiplicative noise at the true point.
std::array<double, 3> cramer_rao(const CreepDataset& clean, double M, double beta, double lam)
{
    const std::array<double, 3> x = {M, beta, lam};
    std::vector<std::array<double, 3>> J(clean.t.size());
    for (int j = 0; j < 3; ++j) {
        auto up = x, dn = x;
        const double h = 1e-5 * x[j];
        up[j] += h;
        dn[j] -= h;
        const auto fu = creep_curve_incompressible(up[0], up[1], up[2], clean.h, clean.P_A, clean.t, 1e-12);
        const auto fd = creep_curve_incompressible(dn[0], dn[1], dn[2], clean.h, clean.P_A, clean.t, 1e-12);
        for (std::size_t k = 0; k < clean.t.size(); ++k) J[k][j] = (fu[k] - fd[k]) / (2.0 * h) * x[j];
    }
    double F[3][3] = {};
    for (std::size_t k = 0; k < clean.t.size(); ++k) {
        const double s = 0.005 * clean.u[k];
        if (!(s > 0.0)) continue;
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) F[a][b] += J[k][a] * J[k][b] / (s * s);
    }
    // 3 x 3 inverse by cofactors
    const double det = F[0][0] * (F[1][1] * F[2][2] - F[1][2] * F[2][1]) -
                       F[0][1] * (F[1][0] * F[2][2] - F[1][2] * F[2][0]) +
                       F[0][2] * (F[1][0] * F[2][1] - F[1][1] * F[2][0]);
    const double c00 = (F[1][1] * F[2][2] - F[1][2] * F[2][1]) / det;
    const double c11 = (F[0][0] * F[2][2] - F[0][2] * F[2][0]) / det;
    const double c22 = (F[0][0] * F[1][1] - F[0][1] * F[1][0]) / det;
    return {std::sqrt(c00), std::sqrt(c11), std::sqrt(c22)};
}

// 7. Noisy round trip on five published rows, each parameter within 5%, classical rms strictly higher.
bool fitting_round_trip()
{
    const auto rows = io::read_parameter_table(io::preset_directory() + "/fitted_parameters.csv");
    const char* picks[] = {"TK11BC", "TK11BR", "TK16AV", "TK17BR", "TK37BV"};
    const auto t0 = Clock::now();
    double fit_seconds = 0.0; // the Cramer-Rao diagnostic is not part of the timed work
    bool ok = true;
    for (const char* id : picks) {
        const auto it = std::find_if(rows.begin(), rows.end(), [&](const auto& r) { return r.sample_id == id; });
        if (it == rows.end()) {
            detail("%s: missing from the parameter table", id);
            ok = false;
            continue;
        }
        const auto& r = *it;
        const auto times = uniform_times(1.0, 400.0);
        const CreepDataset data = synthesize_creep(id, r.M, r.beta, r.lambda_beta, r.h, 7e4, times, 0.005, 1);
        const auto t_fit = Clock::now();
        const FitResult fr = multistart_fit(data, CreepModel::fractional, 2, 1);
        const FitResult cl = fit_creep(data, CreepModel::classical);
        fit_seconds += seconds_since(t_fit);
        const double eM = (fr.M - r.M) / r.M, eb = (fr.beta - r.beta) / r.beta,
                     el = (fr.lambda_beta - r.lambda_beta) / r.lambda_beta;
        const bool recovered = std::abs(eM) <= 0.05 && std::abs(eb) <= 0.05 && std::abs(el) <= 0.05;
        const bool ordered = cl.rms > fr.rms;
        ok = ok && recovered && ordered;
        const CreepDataset clean = synthesize_creep(id, r.M, r.beta, r.lambda_beta, r.h, 7e4, times, 0.0, 1);
        const auto crlb = cramer_rao(clean, r.M, r.beta, r.lambda_beta);
        detail("%s: dM %+.1f%% dbeta %+.2f%% dlambda %+.1f%% (limit 5%%); rms fractional %.3e classical %.3e %s", id,
               100 * eM, 100 * eb, 100 * el, fr.rms, cl.rms, ordered ? "(classical higher)" : "(ORDER VIOLATED)");
        detail("%s: Cramer-Rao relative SD M %.1f%% beta %.2f%% lambda %.1f%%", id, 100 * crlb[0], 100 * crlb[1],
               100 * crlb[2]);
    }
    detail("fitting runtime %.1f s (limit 60 s); with diagnostics %.1f s", fit_seconds, seconds_since(t0));
    return ok && fit_seconds < 60.0;
}

// 8. ANOVA fixture, affine invariance, F = t^2; published-table p-values reported only.
bool anova_engine()
{
    const std::vector<std::vector<double>> fx = {{6, 8, 4, 5, 3, 4}, {8, 12, 9, 11, 6, 8}, {13, 9, 11, 8, 7, 12}};
    const auto r = stats::anova_one_way(fx);
    const bool fixture = std::abs(r.F - 9.264) <= 1e-3 && std::abs(r.p - 0.0024) <= 1e-3;
    detail("fixture F = %.6f (target 9.264), p = %.6f (target 0.0024 +- 1e-3)", r.F, r.p);

    auto moved = fx;
    for (auto& g : moved) {
        for (double& x : g) x = 0.001 * x - 250.0;
    }
    const double affine = rel(stats::anova_one_way(moved).F, r.F);
    detail("affine x -> 0.001 x - 250: rel change in F %.3e (limit 1e-9)", affine);

    const double t = stats::pooled_t_statistic(fx[1], fx[2]);
    const double t2 = rel(stats::anova_one_way({fx[1], fx[2]}).F, t * t);
    detail("two groups: F vs t^2 rel %.3e (limit 1e-12)", t2);

    const auto rows = io::read_parameter_table(io::preset_directory() + "/fitted_parameters.csv");
    const struct {
        stats::Field f;
        double published;
    } fields[] = {{stats::Field::M, 0.329}, {stats::Field::beta, 0.001}, {stats::Field::lambda_beta, 0.0038}};
    for (const auto& f : fields) {
        const auto ta = stats::anova_by_direction(rows, f.f, stats::Region::body, true);
        std::string excl;
        for (const auto& s : ta.excluded_samples) excl += (excl.empty() ? "" : " ") + s;
        detail("published table, body, 1.5 IQR: %s p = %.4g (published %.4g), excluded: %s [reported, not gated]",
               stats::to_string(f.f).c_str(), ta.result.p, f.published, excl.empty() ? "none" : excl.c_str());
    }
    return fixture && affine <= 1e-9 && t2 <= 1e-12;
}

// 9. validate is green on a clean build; each single mutation flips at least one named check.
bool end_to_end_validate()
{
    mutation::reset();
    const ValidateReport clean = run_validate();
    std::size_t failed = 0;
    for (const auto& c : clean.checks) failed += !c.pass;
    detail("clean: %zu checks, %zu failed, %.1f s", clean.checks.size(), failed, clean.seconds);
    bool ok = clean.all_pass();
    for (auto site : mutation::all_sites()) {
        const mutation::Scoped guard(site);
        const ValidateReport r = run_validate();
        std::string red;
        for (const auto& c : r.checks) {
            if (!c.pass) red += (red.empty() ? "" : ", ") + c.name;
        }
        detail("--mutate %s: %s", mutation::name(site).c_str(), red.empty() ? "NO CHECK FLIPPED" : red.c_str());
        ok = ok && !red.empty();
    }
    return ok;
}

} // namespace

int main()
{
    const Criterion criteria[] = {
        {1, "special-function fidelity", special_functions},
        {2, "GL operator convergence", gl_convergence},
        {3, "classical limit", classical_limit},
        {4, "solver vs analytic", solver_vs_analytic},
        {5, "beta monotonicity", beta_monotonicity},
        {6, "flux/weight-loss identity", flux_weight_identity},
        {7, "fitting round trip", fitting_round_trip},
        {8, "ANOVA engine", anova_engine},
        {9, "end-to-end validate", end_to_end_validate},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto t0 = Clock::now();
        bool pass = false;
        std::string error;
        g_details.clear();
        try {
            pass = c.run();
        } catch (const std::exception& e) {
            error = e.what();
        }
        std::printf("%s %d %s (%.1f s)%s%s\n", pass ? "PASS" : "FAIL", c.id, c.title, seconds_since(t0),
                    error.empty() ? "" : " exception: ", error.c_str());
        for (const auto& d : g_details) std::printf("    %s\n", d.c_str());
        std::fflush(stdout);
        failures += !pass;
    }
    std::printf("%d of 9 criteria passed\n", 9 - failures);
    return failures;
}

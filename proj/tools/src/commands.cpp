#include "commands.hpp"

#include "fracporo/analytic.hpp"
#include "fracporo/fitting.hpp"
#include "fracporo/io.hpp"
#include "fracporo/mutation.hpp"
#include "fracporo/solver.hpp"
#include "fracporo/specialfn.hpp"
#include "fracporo/stats.hpp"
#include "fracporo/validate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

namespace fracporo::cli {

namespace fs = std::filesystem;
using io::InputError;
using io::format_double;

namespace {

io::Preset load(const PresetArgs& a)
{
    io::Preset p = io::load_preset(a.preset);
    if (a.beta) {
        if (p.material) {
            p.material->beta = *a.beta;
            p.params = consolidation_params(*p.material);
        } else {
            p.params = incompressible(p.params.M, *a.beta, p.params.lambda_beta);
        }
    }
    if (a.h_mm) p.h = 1e-3 * *a.h_mm;
    if (a.pa) p.P_A = *a.pa;
    if (!(p.h > 0.0) || !(p.P_A > 0.0)) throw InputError("h and P_A must be positive");
    return p;
}

void describe(std::ostream& os, const io::Preset& p)
{
    os << "# preset = " << p.name << '\n'
       << "# M_pa = " << format_double(p.params.M) << '\n'
       << "# beta = " << format_double(p.params.beta) << '\n'
       << "# lambda_beta = " << format_double(p.params.lambda_beta) << '\n'
       << "# gamma = " << format_double(p.params.gamma) << '\n'
       << "# h_m = " << format_double(p.h) << '\n'
       << "# P_A_pa = " << format_double(p.P_A) << '\n';
}

std::pair<int, int> parse_grid(const std::string& s)
{
    const auto x = s.find('x');
    if (x == std::string::npos) throw InputError("--grid must look like NZxNT, got '" + s + "'");
    int nz = 0, nt = 0;
    try {
        nz = std::stoi(s.substr(0, x));
        nt = std::stoi(s.substr(x + 1));
    } catch (const std::exception&) {
        throw InputError("--grid must look like NZxNT, got '" + s + "'");
    }
    if (nz < 2 || nt < 2) throw InputError("--grid needs at least 2 points in z and in t");
    return {nz, nt};
}

std::string stem(const std::string& path) { return fs::path(path).stem().string(); }

double meta_number(const io::TimeSeries& ts, const std::string& key, const std::string& source)
{
    return io::parse_double(ts.meta.at(key), source + " [" + key + "]");
}

struct FitJob {
    std::string path;
    stats::ParameterRow row;
    FitResult result;
    std::string error;
};

FitJob fit_file(const std::string& path, const FitArgs& a, const Globals& g)
{
    FitJob job;
    job.path = path;
    try {
        const io::TimeSeries ts = io::read_timeseries_csv(path, io::Unit::m);
        CreepDataset d;
        d.sample_id = ts.meta.count("sample") ? ts.meta.at("sample") : stem(path);
        if (a.h_mm) {
            d.h = 1e-3 * *a.h_mm;
        } else if (ts.meta.count("h_mm")) {
            d.h = 1e-3 * meta_number(ts, "h_mm", path);
        } else {
            throw InputError(path + ": sample height unknown (pass --h or add '# h_mm = ...')");
        }
        d.P_A = ts.meta.count("P_A_pa") ? meta_number(ts, "P_A_pa", path) : a.pa;
        d.t = ts.t;
        d.u = ts.v;
        d.validate();

        const CreepModel model = a.model == "classical" ? CreepModel::classical : CreepModel::fractional;
        FitOptions opt;
        if (g.tol) opt.final_series_tol = *g.tol;
        job.result = multistart_fit(d, model, a.starts, g.seed, std::nullopt, opt);
        job.row.sample_id = d.sample_id;
        job.row.h = d.h;
        job.row.M = job.result.M;
        job.row.beta = job.result.beta;
        job.row.lambda_beta = job.result.lambda_beta;
        job.row.rms = job.result.rms;
    } catch (const std::invalid_argument& e) {
        job.error = path + ": " + e.what();
    } catch (const std::exception& e) {
        job.error = e.what();
    }
    return job;
}

void write_fit(std::ostream& os, const FitJob& job, const std::string& model)
{
    os << "# model = " << model << '\n'
       << "# iterations = " << job.result.iterations << '\n'
       << "# evaluations = " << job.result.evaluations << '\n'
       << "# converged = " << (job.result.converged ? "true" : "false") << '\n';
    io::write_parameter_table(os, {job.row});
}

std::vector<stats::ParameterRow> read_rows(const std::string& path)
{
    return io::read_parameter_table(path);
}

} // namespace

int run_ml(const Globals& g, const MlArgs& a)
{
    const double tol = g.tol.value_or(1e-12);
    const double v = mittag_leffler(a.a, a.b, a.z, tol);
    io::OutputFile out(g.out);
    out.stream() << format_double(v) << '\n';
    return ok;
}

int run_analytic(const Globals& g, const AnalyticArgs& a)
{
    static const char* fields[] = {"pressure", "displacement", "flux", "weight"};
    if (std::find(std::begin(fields), std::end(fields), a.field) == std::end(fields)) {
        throw InputError("--field must be pressure, displacement, flux or weight");
    }
    if (!(a.t_max > 0.0)) throw InputError("--t-max must be positive");
    const io::Preset p = load(a.preset);
    const auto [nz, nt] = parse_grid(a.grid);

    ConsolidationProblem prob;
    prob.h = p.h;
    prob.P_A = p.P_A;
    prob.params = p.params;
    prob.series_tol = g.tol.value_or(1e-10);
    prob.single_term = a.single_term;

    std::vector<double> z(nz);
    for (int i = 0; i < nz; ++i) z[i] = i == nz - 1 ? p.h : p.h * i / (nz - 1);

    io::OutputFile out(g.out);
    std::ostream& os = out.stream();
    describe(os, p);
    os << "# field = " << a.field << '\n';
    os << "z_m,t_s,value\n";
    for (int j = 0; j < nt; ++j) {
        const double t = a.t_max * j / (nt - 1);
        if (a.field == "pressure" || a.field == "displacement") {
            const auto v = a.field == "pressure" ? pore_pressure_profile(prob, z, t) : displacement_profile(prob, z, t);
            for (int i = 0; i < nz; ++i) os << format_double(z[i]) << ',' << format_double(t) << ',' << format_double(v[i]) << '\n';
        } else if (a.field == "flux") {
            if (t == 0.0) continue; // singular at t = 0
            os << format_double(p.h) << ',' << format_double(t) << ',' << format_double(flux_at_base(prob, t)) << '\n';
        } else {
            os << format_double(p.h) << ',' << format_double(t) << ','
               << format_double(weight_loss(prob, p.W0, p.w_s, p.area(), t)) << '\n';
        }
    }
    return ok;
}

int run_solve(const Globals& g, const SolveArgs& a)
{
    const io::Preset p = load(a.preset);
    if (!(a.dt > 0.0)) throw InputError("--dt must be positive");
    if (a.output_every < 1) throw InputError("--output-every must be >= 1");

    LoadProgram program;
    double t_end = a.t_max.value_or(400.0);
    if (a.mode == "relax") {
        program = LoadProgram::relaxation(p.h);
        if (!a.t_max) t_end = program.knots.back().first;
    } else if (a.mode != "creep" && a.mode != "creep-ramp") {
        throw InputError("--mode must be creep, creep-ramp or relax");
    }
    if (!(t_end > 0.0)) throw InputError("--t-max must be positive");

    Grid1D grid;
    grid.h = p.h;
    grid.nz = a.nz;
    grid.dt = a.dt;
    grid.nt = static_cast<int>(std::llround(t_end / a.dt));
    SolverOptions opt;
    opt.memory_window = a.memory_window;
    opt.output_every = a.output_every;
    try {
        grid.validate();
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }

    SolveResult r;
    if (a.mode == "creep") {
        r = solve(grid, LoadProgram::stress_step(p.P_A), p.params, opt);
    } else if (a.mode == "creep-ramp") {
        r = simulate_creep_with_ramp(grid, p.P_A, a.ramp_time, p.params, opt);
    } else {
        r = simulate_relaxation(grid, program, p.params, opt);
    }
    io::OutputFile out(g.out);
    describe(out.stream(), p);
    out.stream() << "# mode = " << a.mode << '\n';
    io::write_solve_result(out.stream(), r);
    return ok;
}

int run_fit(const Globals& g, const FitArgs& a)
{
    if (a.model != "fractional" && a.model != "classical") throw InputError("--model must be fractional or classical");
    if (a.starts < 1) throw InputError("--starts must be >= 1");
    if (a.input.empty() == a.batch.empty()) throw InputError("give exactly one of --input or --batch");

    if (!a.input.empty()) {
        const FitJob job = fit_file(a.input, a, g);
        if (!job.error.empty()) throw InputError(job.error);
        io::OutputFile out(g.out);
        write_fit(out.stream(), job, a.model);
        return ok;
    }

    if (!fs::is_directory(a.batch)) throw InputError("--batch: '" + a.batch + "' is not a directory");
    std::vector<std::string> files;
    for (const auto& e : fs::directory_iterator(a.batch)) {
        if (e.is_regular_file() && e.path().extension() == ".csv") files.push_back(e.path().string());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw InputError("--batch: no .csv files in '" + a.batch + "'");

    const fs::path out_dir = g.out == "-" ? fs::path(a.batch) / "fits" : fs::path(g.out);
    fs::create_directories(out_dir);

    // each worker owns its output file; only the job index is shared
    std::vector<FitJob> jobs(files.size());
    std::atomic<std::size_t> next{0};
    const unsigned n_threads = std::max(1u, std::min<unsigned>(a.jobs ? a.jobs : std::thread::hardware_concurrency(),
                                                               static_cast<unsigned>(files.size())));
    auto worker = [&] {
        for (std::size_t i = next++; i < files.size(); i = next++) {
            jobs[i] = fit_file(files[i], a, g);
            if (jobs[i].error.empty()) {
                std::ofstream f(out_dir / (stem(files[i]) + ".fit.csv"));
                write_fit(f, jobs[i], a.model);
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    std::vector<stats::ParameterRow> rows;
    int status = ok;
    for (const auto& j : jobs) {
        if (j.error.empty()) {
            rows.push_back(j.row);
        } else {
            std::cerr << "error: " << j.error << '\n';
            status = input_error;
        }
    }
    std::ofstream table(out_dir / "fitted_parameters.csv");
    io::write_parameter_table(table, rows);
    io::write_parameter_table(std::cout, rows);
    return status;
}

int run_anova(const Globals& g, const AnovaArgs& a)
{
    const auto rows = read_rows(a.input);
    const stats::Field field = stats::parse_field(a.field);
    std::optional<stats::Region> region;
    if (!a.region.empty()) region = stats::parse_region(a.region);
    const stats::TableAnova t = stats::anova_by_direction(rows, field, region, !a.keep_outliers);

    io::OutputFile out(g.out);
    std::ostream& os = out.stream();
    os << "field " << a.field << ", region " << (region ? stats::to_string(*region) : "all") << ", outliers "
       << (a.keep_outliers ? "kept" : "excluded (1.5 IQR)") << '\n';
    for (std::size_t i = 0; i < t.groups.size(); ++i) {
        const stats::Moments m = stats::moments(t.values[i]);
        char buf[160];
        std::snprintf(buf, sizeof buf, "  %-16s n=%zu  mean=%.6g  sd=%.6g\n", t.groups[i].c_str(), m.n, m.mean, m.sd);
        os << buf;
    }
    os << "excluded:";
    if (t.excluded_samples.empty()) os << " none";
    for (const auto& s : t.excluded_samples) os << ' ' << s;
    os << '\n';
    char buf[160];
    std::snprintf(buf, sizeof buf, "F(%d, %d) = %.6g  p = %.6g\n", t.result.df_between, t.result.df_within, t.result.F,
                  t.result.p);
    os << buf;
    return ok;
}

int run_summary(const Globals& g, const SummaryArgs& a)
{
    const auto rows = read_rows(a.input);
    stats::GroupBy by;
    if (a.by == "region") {
        by = stats::GroupBy::region;
    } else if (a.by == "direction") {
        by = stats::GroupBy::direction;
    } else if (a.by == "region-direction") {
        by = stats::GroupBy::region_direction;
    } else {
        throw InputError("--by must be region, direction or region-direction");
    }

    const auto m = stats::group_summary(rows, stats::Field::M, by, !a.keep_outliers);
    const auto b = stats::group_summary(rows, stats::Field::beta, by, !a.keep_outliers);
    const auto l = stats::group_summary(rows, stats::Field::lambda_beta, by, !a.keep_outliers);

    io::OutputFile out(g.out);
    std::ostream& os = out.stream();
    char buf[200];
    std::snprintf(buf, sizeof buf, "%-28s %4s %9s %9s %9s %9s %9s %9s\n", "group", "n", "M_mean", "M_sd", "beta_mean",
                  "beta_sd", "lam_mean", "lam_sd");
    os << buf;
    std::snprintf(buf, sizeof buf, "%-28s %4s %19s %19s %19s\n", "", "", "(x1e5 Pa)", "", "(x1e-12 SI)");
    os << buf;
    for (std::size_t i = 0; i < m.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%-28s %4zu %9.2f %9.2f %9.2f %9.2f %9.2f %9.2f\n", m[i].group.c_str(),
                      m[i].m.n, m[i].m.mean / 1e5, m[i].m.sd / 1e5, b[i].m.mean, b[i].m.sd, l[i].m.mean / 1e-12,
                      l[i].m.sd / 1e-12);
        os << buf;
    }
    return ok;
}

int run_weight_loss(const Globals& g, const WeightArgs& a)
{
    const io::Preset p = load(a.preset);
    if (!(a.t_max > 0.0) || !(a.dt > 0.0)) throw InputError("--t-max and --dt must be positive");
    ConsolidationProblem prob;
    prob.h = p.h;
    prob.P_A = p.P_A;
    prob.params = p.params;
    prob.series_tol = g.tol.value_or(1e-10);

    io::TimeSeries ts;
    ts.name = "weight";
    ts.unit = io::Unit::kg;
    const auto n = static_cast<std::size_t>(std::floor(a.t_max / a.dt + 1e-9));
    for (std::size_t k = 0; k <= n; ++k) {
        const double t = a.dt * static_cast<double>(k);
        ts.t.push_back(t);
        ts.v.push_back(weight_loss(prob, p.W0, p.w_s, p.area(), t));
    }
    ts.meta["preset"] = p.name;
    ts.meta["W0_kg"] = format_double(p.W0);
    ts.meta["beta"] = format_double(p.params.beta);
    io::write_timeseries_csv(g.out, ts);
    return ok;
}

int run_validate(const Globals& g, const ValidateArgs& a)
{
    if (!a.mutate.empty()) mutation::activate(mutation::parse(a.mutate));
    ValidateOptions opt;
    opt.seed = g.seed;
    opt.groups = a.groups;
    const ValidateReport r = fracporo::run_validate(opt);
    io::OutputFile out(g.out);
    if (a.json) {
        out.stream() << to_json(r) << '\n';
    } else {
        out.stream() << to_text(r);
        char buf[120];
        std::snprintf(buf, sizeof buf, "%s: %zu checks, mutation %s, %.1f s\n", r.all_pass() ? "PASSED" : "FAILED",
                      r.checks.size(), mutation::name(r.mutation).c_str(), r.seconds);
        out.stream() << buf;
    }
    return r.all_pass() ? ok : validation_failure;
}

} // namespace fracporo::cli

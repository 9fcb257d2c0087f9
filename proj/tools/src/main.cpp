#include "commands.hpp"

#include "fracporo/io.hpp"

#include <CLI11.hpp>

#include <exception>
#include <iostream>

using namespace fracporo::cli;

namespace {

void add_preset_options(CLI::App* sub, PresetArgs& p)
{
    sub->add_option("--preset", p.preset, "Preset name or path to a .params file")->required();
    sub->add_option("--beta", p.beta, "Override the fractional order");
    sub->add_option("--h", p.h_mm, "Override the sample height (mm)");
    sub->add_option("--pa", p.pa, "Override the applied stress (Pa)");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Fractional poroelastic consolidation: closed forms, solver, fitting and statistics"};
    // --h is the sample height, so help is long-form only
    app.set_help_flag("--help", "Print this help message and exit");
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--tol", g.tol, "Series / Mittag-Leffler tolerance");
    app.add_option("--seed", g.seed, "Seed for every randomized harness")->capture_default_str();
    app.add_option("--out", g.out, "Output file or directory ('-' = stdout)")->capture_default_str();

    MlArgs ml;
    auto* c_ml = app.add_subcommand("ml", "Evaluate E_{a,b}(z)");
    c_ml->add_option("--a", ml.a)->required();
    c_ml->add_option("--b", ml.b)->required();
    c_ml->add_option("--z", ml.z)->required();

    AnalyticArgs an;
    auto* c_an = app.add_subcommand("analytic", "Closed-form fields on a (z, t) grid as CSV z_m,t_s,value");
    add_preset_options(c_an, an.preset);
    c_an->add_option("--field", an.field, "pressure | displacement | flux | weight")->capture_default_str();
    c_an->add_option("--grid", an.grid, "NZxNT")->capture_default_str();
    c_an->add_option("--t-max", an.t_max, "Final time (s)")->capture_default_str();
    c_an->add_flag("--single-term", an.single_term, "Keep only the first harmonic");

    SolveArgs so;
    auto* c_so = app.add_subcommand("solve", "Numerical solve, CSV blocks field,z_m,t_s,value");
    add_preset_options(c_so, so.preset);
    c_so->add_option("--mode", so.mode, "creep | creep-ramp | relax")->capture_default_str();
    c_so->add_option("--grid", so.nz, "Number of nodes in z")->capture_default_str();
    c_so->add_option("--dt", so.dt, "Time step (s)")->capture_default_str();
    c_so->add_option("--t-max", so.t_max, "Final time (s); relax defaults to the end of the program");
    c_so->add_option("--ramp-time", so.ramp_time, "Load ramp duration for creep-ramp (s)")->capture_default_str();
    c_so->add_option("--memory-window", so.memory_window, "GL short-memory window in steps (0 = full)");
    c_so->add_option("--output-every", so.output_every, "Keep every n-th step")->capture_default_str();

    FitArgs fi;
    auto* c_fi = app.add_subcommand("fit", "Fit a creep curve (time_s,displacement_m)");
    c_fi->add_option("--input", fi.input, "Creep CSV");
    c_fi->add_option("--batch", fi.batch, "Directory of creep CSVs, fitted concurrently");
    c_fi->add_option("--h", fi.h_mm, "Sample height (mm); else read from '# h_mm = ...'");
    c_fi->add_option("--pa", fi.pa, "Applied stress (Pa); a '# P_A_pa = ...' line takes precedence")
        ->capture_default_str();
    c_fi->add_option("--model", fi.model, "fractional | classical")->capture_default_str();
    c_fi->add_option("--starts", fi.starts, "Multistart count")->capture_default_str();
    c_fi->add_option("--jobs", fi.jobs, "Worker threads for --batch (0 = all cores)");

    AnovaArgs ao;
    auto* c_ao = app.add_subcommand("anova", "One-way ANOVA across directions");
    c_ao->add_option("--input", ao.input, "Parameter table CSV")->required();
    c_ao->add_option("--field", ao.field, "M | beta | lambda_beta | rms")->capture_default_str();
    c_ao->add_option("--region", ao.region, "body | anterior | posterior (default: all)");
    c_ao->add_flag("--keep-outliers", ao.keep_outliers, "Skip the 1.5 IQR exclusion");

    SummaryArgs su;
    auto* c_su = app.add_subcommand("summary", "Mean and SD of M, beta, lambda_beta per group");
    c_su->add_option("--input", su.input, "Parameter table CSV")->required();
    c_su->add_option("--by", su.by, "region | direction | region-direction")->capture_default_str();
    c_su->add_flag("--keep-outliers", su.keep_outliers, "Skip the 1.5 IQR exclusion per group and field");

    WeightArgs we;
    auto* c_we = app.add_subcommand("weight-loss", "Sample weight history as CSV time_s,weight_kg");
    add_preset_options(c_we, we.preset);
    c_we->add_option("--t-max", we.t_max, "Final time (s)")->capture_default_str();
    c_we->add_option("--dt", we.dt, "Sampling interval (s)")->capture_default_str();

    ValidateArgs va;
    auto* c_va = app.add_subcommand("validate", "Run every oracle check; exit 1 on any failure");
    c_va->add_flag("--json", va.json, "Machine-readable report");
    c_va->add_option("--mutate", va.mutate, "Inject a fault: gl-coefficient, lanczos-coefficient, ml-series, "
                                            "fourier-coefficient, anova-dof");
    c_va->add_option("--group", va.groups, "Restrict to check groups (repeatable)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : input_error;
    }

    try {
        if (*c_ml) return run_ml(g, ml);
        if (*c_an) return run_analytic(g, an);
        if (*c_so) return run_solve(g, so);
        if (*c_fi) return run_fit(g, fi);
        if (*c_ao) return run_anova(g, ao);
        if (*c_su) return run_summary(g, su);
        if (*c_we) return run_weight_loss(g, we);
        if (*c_va) return run_validate(g, va);
    } catch (const fracporo::io::InputError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return input_error;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return input_error;
    } catch (const std::domain_error& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return input_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return validation_failure;
    }
    return input_error;
}

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fracporo::cli {

enum ExitCode { ok = 0, validation_failure = 1, input_error = 2 };

struct Globals {
    std::optional<double> tol;
    std::uint64_t seed = 1;
    std::string out = "-";
};

struct MlArgs {
    double a = 1.0;
    double b = 1.0;
    double z = 0.0;
};

struct PresetArgs {
    std::string preset;
    std::optional<double> beta; ///< override the preset's fractional order
    std::optional<double> h_mm;
    std::optional<double> pa;
};

struct AnalyticArgs {
    PresetArgs preset;
    std::string field = "pressure";
    std::string grid = "61x100";
    double t_max = 400.0;
    bool single_term = false;
};

struct SolveArgs {
    PresetArgs preset;
    std::string mode = "creep";
    int nz = 61;
    double dt = 0.1;
    std::optional<double> t_max;
    double ramp_time = 1.0;
    std::size_t memory_window = 0;
    int output_every = 1;
};

struct FitArgs {
    std::string input;
    std::string batch;
    std::optional<double> h_mm;
    double pa = 7e4;
    std::string model = "fractional";
    int starts = 1;
    unsigned jobs = 0;
};

struct AnovaArgs {
    std::string input;
    std::string field = "beta";
    std::string region;
    bool keep_outliers = false;
};

struct SummaryArgs {
    std::string input;
    std::string by = "region-direction";
    bool keep_outliers = false;
};

struct WeightArgs {
    PresetArgs preset;
    double t_max = 400.0;
    double dt = 75.0;
};

struct ValidateArgs {
    bool json = false;
    std::string mutate;
    std::vector<std::string> groups;
};

int run_ml(const Globals& g, const MlArgs& a);
int run_analytic(const Globals& g, const AnalyticArgs& a);
int run_solve(const Globals& g, const SolveArgs& a);
int run_fit(const Globals& g, const FitArgs& a);
int run_anova(const Globals& g, const AnovaArgs& a);
int run_summary(const Globals& g, const SummaryArgs& a);
int run_weight_loss(const Globals& g, const WeightArgs& a);
int run_validate(const Globals& g, const ValidateArgs& a);

} // namespace fracporo::cli

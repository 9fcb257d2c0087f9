#include "fracporo/analytic.hpp"
#include "fracporo/fitting.hpp"
#include "fracporo/solver.hpp"
#include "fracporo/specialfn.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace fracporo;

namespace {

ConsolidationProblem tk11bc()
{
    ConsolidationProblem pr;
    pr.h = 3.7e-3;
    pr.P_A = 7e4;
    pr.params = incompressible(1.27e5, 0.73, 2.95e-12);
    return pr;
}

} // namespace

// one evaluation per regime: series, interpolant range, asymptotic
static void BM_MittagLeffler(benchmark::State& state)
{
    const MittagLeffler e(0.73, 1.0);
    const double z = -static_cast<double>(state.range(0)) / 10.0;
    for (auto _ : state) benchmark::DoNotOptimize(e(z));
}
BENCHMARK(BM_MittagLeffler)->Arg(5)->Arg(50)->Arg(500)->Arg(5000);

static void BM_MittagLefflerSetup(benchmark::State& state)
{
    for (auto _ : state) {
        MittagLeffler e(0.73, 1.0);
        benchmark::DoNotOptimize(e);
    }
}
BENCHMARK(BM_MittagLefflerSetup);

static void BM_PressureProfile(benchmark::State& state)
{
    const ConsolidationProblem pr = tk11bc();
    std::vector<double> z(61);
    for (int i = 0; i < 61; ++i) z[i] = pr.h * i / 60.0;
    const double t = static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(pore_pressure_profile(pr, z, t));
}
BENCHMARK(BM_PressureProfile)->Arg(1)->Arg(15)->Arg(400)->Unit(benchmark::kMicrosecond);

static void BM_CreepCurve(benchmark::State& state)
{
    const auto t = uniform_times(1.0, 400.0);
    for (auto _ : state) benchmark::DoNotOptimize(creep_curve_incompressible(1.27e5, 0.73, 2.95e-12, 3.7e-3, 7e4, t));
}
BENCHMARK(BM_CreepCurve)->Unit(benchmark::kMillisecond);

// cost grows with nt^2 under full GL memory
static void BM_Solver(benchmark::State& state)
{
    Grid1D g;
    g.h = 3e-3;
    g.nz = 61;
    g.dt = 0.1;
    g.nt = static_cast<int>(state.range(0));
    const ConsolidationParams c = incompressible(1.27e5, 0.5, 2.95e-12);
    SolverOptions opt;
    opt.memory_window = static_cast<std::size_t>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(solve(g, LoadProgram::stress_step(7e4), c, opt));
}
BENCHMARK(BM_Solver)->Args({500, 0})->Args({1000, 0})->Args({2000, 0})->Args({2000, 200})
    ->Unit(benchmark::kMillisecond);

static void BM_FitObjective(benchmark::State& state)
{
    const CreepDataset d = synthesize_creep("TK11BC", 1.27e5, 0.73, 2.95e-12, 3.7e-3, 7e4, uniform_times(1.0, 400.0));
    // search tolerance vs the tolerance of the reported rms
    const double tol = std::pow(10.0, -static_cast<double>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(rms_objective(d, 1.2e5, 0.7, 3e-12, tol));
}
BENCHMARK(BM_FitObjective)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

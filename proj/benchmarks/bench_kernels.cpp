#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "fkpp/fkpp.hpp"

using namespace fkpp;

namespace {

SteadyProblem problem(double a, double D, int n) {
    return SteadyProblem::make(Params{a, D, Bc::dirichlet}, n);
}

Profile wavy(const Grid& g) {
    Profile u(g.size());
    for (int i = 0; i <= g.n; ++i) u[i] = 1.0 + 0.5 * std::sin(5.0 * g.x[i]);
    u[0] = u[g.n] = 0.0;
    return u;
}

void bm_convolution_prefix(benchmark::State& state) {
    SteadyProblem sp = problem(10.0, 2e-3, static_cast<int>(state.range(0)));
    Profile u = wavy(sp.grid);
    for (auto _ : state) benchmark::DoNotOptimize(sp.conv.apply(u));
}
BENCHMARK(bm_convolution_prefix)->Arg(1000)->Arg(4000);

void bm_convolution_weights(benchmark::State& state) {
    SteadyProblem sp = problem(10.0, 2e-3, static_cast<int>(state.range(0)));
    Profile u = wavy(sp.grid);
    for (auto _ : state) benchmark::DoNotOptimize(sp.conv.apply_weights(u));
}
BENCHMARK(bm_convolution_weights)->Arg(1000)->Arg(4000);

void bm_rhs(benchmark::State& state) {
    SteadyProblem sp = problem(10.0, 2e-3, 1000);
    Profile u = wavy(sp.grid);
    for (auto _ : state) benchmark::DoNotOptimize(rhs(sp, u));
}
BENCHMARK(bm_rhs);

void bm_midpoint_step(benchmark::State& state) {
    SteadyProblem sp = problem(10.0, 2e-3, 1000);
    EvolutionState s{0.0, wavy(sp.grid), 1e-5};
    for (auto _ : state) benchmark::DoNotOptimize(step_midpoint(s, sp));
}
BENCHMARK(bm_midpoint_step);

void bm_jacobian_factor_solve(benchmark::State& state) {
    SteadyProblem sp = problem(10.0, 2e-3, static_cast<int>(state.range(0)));
    Profile u = wavy(sp.grid);
    std::vector<double> b(sp.grid.size(), 1.0);
    for (auto _ : state) {
        LinearFactor lu(jacobian(sp, u));
        benchmark::DoNotOptimize(lu.solve(b));
    }
}
BENCHMARK(bm_jacobian_factor_solve)->Arg(500)->Arg(1000);

void bm_newton_solve(benchmark::State& state) {
    Params p{2.6, 1e-5, Bc::dirichlet};
    SteadyProblem sp = SteadyProblem::make(p, 500);
    Profile seed = small_d_profile(sp.grid, p.a, p.D, 5, p.bc);
    for (auto _ : state) benchmark::DoNotOptimize(newton_solve(sp, seed));
}
BENCHMARK(bm_newton_solve);

void bm_stability_dense(benchmark::State& state) {
    Params p{2.6, 1e-5, Bc::dirichlet};
    SteadyProblem sp = SteadyProblem::make(p, static_cast<int>(state.range(0)));
    Profile u = newton_solve(sp, small_d_profile(sp.grid, p.a, p.D, 5, p.bc));
    for (auto _ : state) benchmark::DoNotOptimize(solve_stability(sp, u, EigMode::dense, 6));
}
BENCHMARK(bm_stability_dense)->Arg(400)->Arg(800);

void bm_stability_iterative_warm(benchmark::State& state) {
    Params p{2.6, 1e-5, Bc::dirichlet};
    SteadyProblem sp = SteadyProblem::make(p, static_cast<int>(state.range(0)));
    Profile u = newton_solve(sp, small_d_profile(sp.grid, p.a, p.D, 5, p.bc));
    const double hint = solve_stability(sp, u, EigMode::dense, 1).sigma_max - 0.02;
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_stability(sp, u, EigMode::iterative, 1, hint));
}
BENCHMARK(bm_stability_iterative_warm)->Arg(400)->Arg(800);

} // namespace

BENCHMARK_MAIN();

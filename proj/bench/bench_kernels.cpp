// Serial reference vs OpenMP kernel for each parallel hot loop.
#include <benchmark/benchmark.h>

#include "lipext/generators.hpp"
#include "lipext/hilbert_extension.hpp"
#include "lipext/metric_core.hpp"
#include "lipext/mmatrix.hpp"
#include "lipext/transforms.hpp"

using namespace lipext;

namespace {

Execution mode(const benchmark::State& state) { return state.range(0) ? Execution::parallel : Execution::serial; }

void label(benchmark::State& state) { state.SetLabel(state.range(0) ? "parallel" : "serial"); }

void BM_LipschitzConstant(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(1));
    Rng rng(1);
    std::vector<Point> pts(n, Point(8)), imgs(n, Point(8));
    for (auto& p : pts)
        for (double& x : p) x = rng.uniform(-1, 1);
    for (auto& p : imgs)
        for (double& x : p) x = rng.uniform(-1, 1);
    const auto space = make_quasi_metric(distance_matrix(EuclideanPointSet(pts), Norm::euclidean()));
    std::vector<std::size_t> dom(n);
    for (std::size_t i = 0; i < n; ++i) dom[i] = i;
    const PointMap f(dom, imgs);
    for (auto _ : state) benchmark::DoNotOptimize(lipschitz_constant(f, space, Norm::lp(1.5), mode(state)));
    label(state);
}
BENCHMARK(BM_LipschitzConstant)->ArgsProduct({{0, 1}, {200, 800}})->Unit(benchmark::kMillisecond);

void BM_IsGeneric(benchmark::State& state) {
    Rng rng(2);
    const Matrix a = random_generic_nonnegative(rng, static_cast<std::size_t>(state.range(1)));
    for (auto _ : state) benchmark::DoNotOptimize(is_generic(a, 1e-10, mode(state)).generic);
    label(state);
}
BENCHMARK(BM_IsGeneric)->ArgsProduct({{0, 1}, {6, 8}})->Unit(benchmark::kMillisecond);

void BM_DilationModulus(benchmark::State& state) {
    const auto f = TransformFunction::table({0, 1, 10, 1e12}, {0, 1, 4, 1e9}, {true, true, true});
    SampleGrid grid;
    grid.samples = static_cast<std::size_t>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(dilation_modulus(f, 1e3, grid, mode(state)));
    label(state);
}
BENCHMARK(BM_DilationModulus)->ArgsProduct({{0, 1}, {4096, 65536}})->Unit(benchmark::kMicrosecond);

void BM_SolverRestarts(benchmark::State& state) {
    const ExtensionProblem pb = walsh_problem(static_cast<std::size_t>(state.range(1)), Norm::euclidean());
    SolverConfig cfg;
    cfg.exec = mode(state);
    for (auto _ : state) benchmark::DoNotOptimize(solve_min_lipschitz_extension(pb, cfg).optimal_lip);
    label(state);
}
BENCHMARK(BM_SolverRestarts)->ArgsProduct({{0, 1}, {3}})->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();

#include "contraflow/contraction.hpp"
#include "contraflow/integrators.hpp"

#include <benchmark/benchmark.h>

using namespace contraflow;

namespace {

ObjectiveSpec bench_objective(Index n) {
    Vector eigs = Vector::LinSpaced(n, 1.0, 100.0);
    return make_quadratic_diag(eigs, Vector::Zero(n));
}

void BM_FieldEval(benchmark::State& state) {
    auto obj = bench_objective(state.range(0));
    auto field = acconest_field(obj);
    Vector z = Vector::Ones(2 * obj.dim);
    for (auto _ : state) {
        benchmark::DoNotOptimize(field.eval_stacked(z, 0.0));
    }
}
BENCHMARK(BM_FieldEval)->Arg(16)->Arg(256);

void BM_ExplicitStep(benchmark::State& state) {
    auto obj = bench_objective(state.range(0));
    auto field = acconest_field(obj);
    Vector z = Vector::Ones(2 * obj.dim);
    for (auto _ : state) {
        z = explicit_euler_step(field, z, 0.0, 1e-3);
        benchmark::DoNotOptimize(z.data());
    }
}
BENCHMARK(BM_ExplicitStep)->Arg(16)->Arg(256);

void BM_ImplicitStep(benchmark::State& state) {
    auto obj = bench_objective(state.range(0));
    auto field = acconest_field(obj);
    StepConfig cfg;
    cfg.h = 0.5;
    Vector z = Vector::Ones(2 * obj.dim);
    for (auto _ : state) {
        benchmark::DoNotOptimize(implicit_euler_step(field, z, 0.5, cfg));
    }
}
BENCHMARK(BM_ImplicitStep)->Arg(16)->Arg(64);

void BM_MatrixMeasureModes(benchmark::State& state) {
    auto obj = bench_objective(state.range(0));
    auto field = acconest_field(obj);
    auto metric = Metric::from_condition(obj.kappa(), 1.0 + 0.5 / obj.kappa(), obj.dim);
    for (auto _ : state) {
        benchmark::DoNotOptimize(matrix_measure_modes(metric, field.mode_jacobians(0.0)));
    }
}
BENCHMARK(BM_MatrixMeasureModes)->Arg(16)->Arg(256);

void BM_OneSidedLipschitzEstimate(benchmark::State& state) {
    auto obj = bench_objective(16);
    auto field = acconest_field(obj);
    auto metric = Metric::from_condition(obj.kappa(), 1.0 + 0.5 / obj.kappa(), obj.dim);
    for (auto _ : state) {
        PairSampler sampler{.seed = 1};
        benchmark::DoNotOptimize(one_sided_lipschitz_estimate(
            field, metric, sampler, static_cast<int>(state.range(0)), std::array{0.0}));
    }
}
BENCHMARK(BM_OneSidedLipschitzEstimate)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include "lr/harness.hpp"

using namespace lr;

namespace {

GeneratedInstance make_instance(int n, int d) { return generate_instance(12345, n, d); }

void BM_BellmanApply(benchmark::State& state) {
    const auto inst = make_instance(static_cast<int>(state.range(0)), 4);
    const Vector v = Vector::Ones(inst.mrp.state_count());
    for (auto _ : state) {
        benchmark::DoNotOptimize(bellman_apply(inst.mrp, v));
    }
}
BENCHMARK(BM_BellmanApply)->Arg(10)->Arg(100)->Arg(500);

void BM_ExactValue(benchmark::State& state) {
    const auto inst = make_instance(static_cast<int>(state.range(0)), 4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(exact_value(inst.mrp));
    }
}
BENCHMARK(BM_ExactValue)->Arg(10)->Arg(100)->Arg(500);

void BM_StationaryDistribution(benchmark::State& state) {
    const auto inst = make_instance(static_cast<int>(state.range(0)), 4);
    const Matrix P = inst.mrp.transition();
    for (auto _ : state) {
        benchmark::DoNotOptimize(stationary_distribution(P));
    }
}
BENCHMARK(BM_StationaryDistribution)->Arg(10)->Arg(100);

void BM_GradHw(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const int d = static_cast<int>(state.range(1));
    const auto inst = make_instance(n, d);
    const LossContext ctx = inst.make_context();
    Rng rng(5);
    Vector theta(d), w(d);
    for (int i = 0; i < d; ++i) {
        theta(i) = rng.normal();
        w(i) = rng.normal();
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(grad_h_w(ctx, theta, w));
    }
}
BENCHMARK(BM_GradHw)->Args({10, 4})->Args({100, 16})->Args({500, 32});

void BM_Lookahead(benchmark::State& state) {
    const auto inst = make_instance(50, 8);
    const LossContext ctx = inst.make_context();
    const double alpha = resolve_alpha(ctx, Alpha::one_over_l());
    Rng rng(6);
    Vector theta(8), w(8);
    for (int i = 0; i < 8; ++i) {
        theta(i) = rng.normal();
        w(i) = rng.normal();
    }
    const int steps = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(lookahead(ctx, theta, w, alpha, steps));
    }
}
BENCHMARK(BM_Lookahead)->Arg(10)->Arg(100)->Arg(1000);

void BM_RunToyExperiment(benchmark::State& state) {
    const ExperimentConfig cfg = parse_config(bundled_config("b1"), "b1");
    const LossContext ctx = cfg.make_context();
    const ParamPair init{cfg.init_theta, cfg.init_w};
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_lr(ctx, init, cfg.hyperparams));
    }
}
BENCHMARK(BM_RunToyExperiment)->Unit(benchmark::kMillisecond);

void BM_SolveFValue(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto inst = make_instance(n, n / 2);
    const LossContext ctx = inst.make_context();
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_f_value(ctx));
    }
}
BENCHMARK(BM_SolveFValue)->Arg(10)->Arg(50)->Arg(200)->Unit(benchmark::kMicrosecond);

void BM_SampledGradient(benchmark::State& state) {
    const auto inst = make_instance(100, 16);
    const LossContext ctx = inst.make_context();
    Rng rng(7);
    Vector theta(16), w(16);
    for (int i = 0; i < 16; ++i) {
        theta(i) = rng.normal();
        w(i) = rng.normal();
    }
    const int batch = static_cast<int>(state.range(0));
    Rng stream(99);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sampled_grad_h_w(ctx, theta, w, stream, batch));
    }
}
BENCHMARK(BM_SampledGradient)->Arg(1)->Arg(64)->Arg(1024);

} // namespace

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include "nestspec/coxph.hpp"
#include "nestspec/glm.hpp"
#include "nestspec/harness.hpp"
#include "nestspec/linear_model.hpp"
#include "nestspec/timeseries.hpp"

using namespace nestspec;

static void BM_FitOls(benchmark::State& state) {
    GeneratorSpec spec;
    spec.family = DataFamily::linear;
    spec.n = static_cast<std::size_t>(state.range(0));
    spec.true_parameters = {1.0, -0.5, 0.25, 0.1, 0.05, -0.2, 0.3, 0.15, -0.1, 0.4};
    spec.noise = 1.0;
    spec.seed = 1;
    const Dataset data = generate(spec);
    for (auto _ : state) {
        auto fit = fit_ols(data.regression().x, data.regression().y);
        benchmark::DoNotOptimize(fit);
    }
}
BENCHMARK(BM_FitOls)->Arg(50)->Arg(200)->Arg(1000);

static void BM_FitGlmPoisson(benchmark::State& state) {
    GeneratorSpec spec;
    spec.family = DataFamily::poisson;
    spec.n = static_cast<std::size_t>(state.range(0));
    spec.true_parameters = {0.4, -0.3, 0.2, 0.1, -0.1};
    spec.seed = 2;
    const Dataset data = generate(spec);
    for (auto _ : state) {
        auto fit = fit_glm(data.regression().x, data.regression().y, GlmFamily::poisson);
        benchmark::DoNotOptimize(fit);
    }
}
BENCHMARK(BM_FitGlmPoisson)->Arg(100)->Arg(500)->Arg(2000);

static void BM_FitCox(benchmark::State& state) {
    GeneratorSpec spec;
    spec.family = DataFamily::survival;
    spec.n = static_cast<std::size_t>(state.range(0));
    spec.true_parameters = {0.5, -0.5, 0.25};
    spec.noise = 0.3;
    spec.seed = 3;
    const Dataset data = generate(spec);
    for (auto _ : state) {
        auto fit = fit_cox(data.survival().records);
        benchmark::DoNotOptimize(fit);
    }
}
BENCHMARK(BM_FitCox)->Arg(100)->Arg(500)->Arg(2000);

static void BM_AutocovarianceAndYuleWalker(benchmark::State& state) {
    const TimeSeriesSample x = simulate_ar({0.5, -0.3, 0.1}, 1.0,
                                           static_cast<std::size_t>(state.range(0)), 4);
    for (auto _ : state) {
        const AutocovarianceEstimate gamma = autocovariance(x, 20);
        auto sol = solve_yule_walker(gamma, 20);
        benchmark::DoNotOptimize(sol);
    }
}
BENCHMARK(BM_AutocovarianceAndYuleWalker)->Arg(10000)->Arg(100000);

static void BM_TradeoffSweep(benchmark::State& state) {
    const GeneratorSpec gen = noisy_cubic_spec(60, 5);
    const SplitSpec split_spec{0.5, 6};
    const int replicates = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto curve =
            sweep_complexity(gen, Ladder{default_degree_ladder()}, split_spec, replicates);
        benchmark::DoNotOptimize(curve);
    }
}
BENCHMARK(BM_TradeoffSweep)->Arg(10)->Arg(100);

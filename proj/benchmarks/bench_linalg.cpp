#include <benchmark/benchmark.h>

#include "nestspec/linalg.hpp"
#include "nestspec/random.hpp"

using namespace nestspec;

namespace {

SymmetricMatrix random_spd(std::size_t dim, std::uint64_t seed) {
    Rng rng(seed);
    Matrix b(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) b(i, j) = rng.normal();
    SymmetricMatrix a = gram(b);
    for (std::size_t i = 0; i < dim; ++i) a.set(i, i, a(i, i) + 0.05 * dim);
    return a;
}

}  // namespace

static void BM_JacobiEigen(benchmark::State& state) {
    const auto a = random_spd(static_cast<std::size_t>(state.range(0)), 42);
    for (auto _ : state) {
        auto spectrum = eigenvalues_symmetric(a);
        benchmark::DoNotOptimize(spectrum);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_JacobiEigen)->RangeMultiplier(2)->Range(4, 128)->Complexity();

static void BM_InvertSpd(benchmark::State& state) {
    const auto a = random_spd(static_cast<std::size_t>(state.range(0)), 43);
    for (auto _ : state) {
        auto inv = invert_spd(a);
        benchmark::DoNotOptimize(inv);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_InvertSpd)->RangeMultiplier(2)->Range(4, 128)->Complexity();

static void BM_CholeskySolve(benchmark::State& state) {
    const std::size_t dim = static_cast<std::size_t>(state.range(0));
    const auto a = random_spd(dim, 44);
    Rng rng(45);
    std::vector<double> rhs(dim);
    for (auto& v : rhs) v = rng.normal();
    for (auto _ : state) {
        auto x = CholeskyFactor(a).solve(rhs);
        benchmark::DoNotOptimize(x);
    }
}
BENCHMARK(BM_CholeskySolve)->Arg(8)->Arg(32)->Arg(128);

static void BM_PrincipalSubmatrixInterlacing(benchmark::State& state) {
    const std::size_t dim = static_cast<std::size_t>(state.range(0));
    const auto a = random_spd(dim, 46);
    const auto keep = ColumnSubset::leading(dim / 2, dim);
    for (auto _ : state) {
        const auto full = eigenvalues_symmetric(a);
        const auto sub = eigenvalues_symmetric(principal_submatrix(a, keep));
        auto report = check_interlacing(full, sub, 1e-9 * full.spectral_radius);
        benchmark::DoNotOptimize(report);
    }
}
BENCHMARK(BM_PrincipalSubmatrixInterlacing)->Arg(8)->Arg(20)->Arg(64);

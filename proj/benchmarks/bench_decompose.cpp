#include "vcz/cz_decomposition.hpp"
#include "vcz/experiments.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

vcz::StepFunction random_function(int dimension, std::int64_t cells)
{
    std::mt19937_64 engine(42);
    std::normal_distribution<double> normal;
    Eigen::MatrixXd v(dimension, cells);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        v.data()[i] = normal(engine) * std::exp(2.0 * normal(engine));
    }
    return {vcz::TimeGrid(-10, cells), vcz::SpatialSpace(dimension, 2.0), v};
}

void BM_Decompose(benchmark::State& state)
{
    const auto f = random_function(4, state.range(0));
    const double alpha = vcz::stress_alpha(f, 0.2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(vcz::decompose(f, alpha));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Decompose)->RangeMultiplier(4)->Range(256, 16384)->Complexity();

void BM_DecomposeAndVerify(benchmark::State& state)
{
    const auto f = random_function(4, state.range(0));
    const double alpha = vcz::stress_alpha(f, 0.2);
    for (auto _ : state) {
        const auto d = vcz::decompose(f, alpha);
        benchmark::DoNotOptimize(vcz::verify(d, f, alpha, 2.0));
    }
}
BENCHMARK(BM_DecomposeAndVerify)->Arg(1024)->Arg(4096);

} // namespace

#include "vcz/experiments.hpp"
#include "vcz/volterra_operator.hpp"

#include <benchmark/benchmark.h>

namespace {

void BM_ApplyModel(benchmark::State& state)
{
    const auto k = vcz::model_scalar_kernel();
    Eigen::MatrixXd v = Eigen::MatrixXd::Ones(1, state.range(0));
    const vcz::StepFunction f(vcz::TimeGrid(-4, state.range(0)), vcz::SpatialSpace(1, 2.0), v);
    const double t = f.grid().horizon() + 1.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(vcz::apply_off_support(k, f, t));
    }
}
BENCHMARK(BM_ApplyModel)->Arg(16)->Arg(256);

void BM_ApplyGreen(benchmark::State& state)
{
    const int m = static_cast<int>(state.range(0));
    const auto k = vcz::greens_kernel_from_generator(
        vcz::GeneratorSpec::random_diffusion(m, vcz::BoundaryCondition::dirichlet, 10.0, 2));
    Eigen::MatrixXd v = Eigen::MatrixXd::Ones(m, 32);
    const vcz::StepFunction f(vcz::TimeGrid(-5, 32), vcz::SpatialSpace(m, 2.0), v);
    for (auto _ : state) {
        benchmark::DoNotOptimize(vcz::apply_off_support(k, f, 1.5));
    }
}
BENCHMARK(BM_ApplyGreen)->Arg(8)->Arg(32);

void BM_AdjointPair(benchmark::State& state)
{
    const auto k = vcz::model_scalar_kernel();
    const auto [g, f] = vcz::random_separated_pair(1, 3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(vcz::adjoint_check(k, g, f));
    }
}
BENCHMARK(BM_AdjointPair);

} // namespace

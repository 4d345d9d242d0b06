#include "vcz/experiments.hpp"
#include "vcz/volterra_operator.hpp"

#include <benchmark/benchmark.h>

namespace {

void BM_SolveParabolic(benchmark::State& state)
{
    const int m = static_cast<int>(state.range(0));
    const auto spec = vcz::GeneratorSpec::random_diffusion(m, vcz::BoundaryCondition::dirichlet, 10.0, 1);
    const vcz::Semigroup semigroup(vcz::assemble_generator(spec));
    const auto f = vcz::TrialFamily::parse("oscillatory").generate(0, vcz::TimeGrid::unit_horizon(256), m, 2.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(vcz::solve_parabolic(semigroup, f));
    }
}
BENCHMARK(BM_SolveParabolic)->Arg(8)->Arg(32)->Arg(128);

void BM_SemigroupSetup(benchmark::State& state)
{
    const int m = static_cast<int>(state.range(0));
    const auto a = vcz::assemble_generator(vcz::GeneratorSpec::constant(m, vcz::BoundaryCondition::periodic));
    for (auto _ : state) {
        benchmark::DoNotOptimize(vcz::Semigroup(a));
    }
}
BENCHMARK(BM_SemigroupSetup)->Arg(16)->Arg(64)->Arg(256);

} // namespace

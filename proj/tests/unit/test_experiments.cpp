#include "generators.hpp"
#include "oracles.hpp"

#include "vcz/experiments.hpp"
#include "vcz/parallel.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <numeric>

using namespace vcz;
using namespace vcz::testing;

TEST(TrialFamily, ParseRoundTripAndValidation)
{
    const auto family = TrialFamily::parse("spikes:count=7,seed=3,mass=2.5,width=0.125");
    EXPECT_EQ(family.kind, TrialKind::spikes);
    EXPECT_EQ(family.count, 7);
    EXPECT_EQ(family.seed, 3u);
    EXPECT_EQ(family.mass, 2.5);
    EXPECT_EQ(family.width, 0.125);
    const auto again = TrialFamily::parse(family.to_string());
    EXPECT_EQ(again.to_string(), family.to_string());
    EXPECT_EQ(TrialFamily::parse("oscillatory").kind, TrialKind::oscillatory);
    EXPECT_EQ(TrialFamily::parse("cz-adversarial").kind, TrialKind::cz_adversarial);
    EXPECT_THROW(TrialFamily::parse("sawtooth"), std::invalid_argument);
    EXPECT_THROW(TrialFamily::parse("spikes:colour=red"), std::invalid_argument);
    EXPECT_THROW(TrialFamily::parse("spikes:count=0").validate(), std::invalid_argument);
    EXPECT_THROW(TrialFamily::parse("random-steps:amplitude=-1").validate(), std::invalid_argument);
}

TEST(TrialFamily, GenerationIsDeterministicPerIndex)
{
    for (const char* text : {"random-steps", "spikes:width=0.0625", "oscillatory", "cz-adversarial"}) {
        const auto family = TrialFamily::parse(text);
        const auto grid = TimeGrid::unit_horizon(64);
        const auto a = family.generate(3, grid, 4, 2.0);
        const auto b = family.generate(3, grid, 4, 2.0);
        EXPECT_EQ(a.samples(), b.samples()) << text;
        EXPECT_NE(a.samples(), family.generate(4, grid, 4, 2.0).samples()) << text;
        EXPECT_FALSE(a.is_zero()) << text;
    }
}

TEST(TrialFamily, SpikesCarryTheirMass)
{
    auto family = TrialFamily::parse("spikes:mass=3,width=0.0625");
    for (double r : {1.5, 2.0, 4.0}) {
        for (int i = 0; i < 10; ++i) {
            const auto f = family.generate(i, TimeGrid::unit_horizon(256), 3, r);
            EXPECT_NEAR(bochner_norm(f.with_space(SpatialSpace(3, r)), 1.0), 3.0, 1e-12);
            const auto support = f.support_cells();
            ASSERT_TRUE(support.has_value());
            EXPECT_LT(f.grid().left(support->first), 0.5);
        }
    }
}

TEST(TrialFamily, OscillatoryShapeSurvivesRefinement)
{
    const auto family = TrialFamily::parse("oscillatory:modes=2");
    const auto coarse = family.generate(0, TimeGrid::unit_horizon(256), 2, 2.0);
    const auto fine = family.generate(0, TimeGrid::unit_horizon(512), 2, 2.0);
    EXPECT_NEAR(bochner_norm(coarse, 2.0), bochner_norm(fine, 2.0), 1e-2 * bochner_norm(fine, 2.0));
}

TEST(Estimates, StrongConstantAndAuBound)
{
    const auto trials = TrialFamily::parse("oscillatory:count=20");
    for (const double lambda : {1.0, 10.0}) {
        const auto spec = GeneratorSpec::random_diffusion(8, BoundaryCondition::dirichlet, lambda, 5);
        const auto grid = TimeGrid::unit_horizon(64);
        for (int i = 0; i < trials.count; ++i) {
            const auto f = trials.generate(i, grid, 8, 2.0);
            const auto ratios = trial_ratios(f, solve_parabolic(spec, f), 2.0, 2.0);
            EXPECT_LE(ratios.au, 1.0 + 1e-9);
            EXPECT_LE(ratios.total, 2.0 + 1e-9);
            EXPECT_GE(ratios.total, ratios.au);
        }
        const double c = estimate_strong_constant(spec, 2.0, 2.0, trials, 64, 1);
        EXPECT_GT(c, 0.0);
        EXPECT_LE(c, 2.0 + 1e-9);
    }
}

TEST(Estimates, MonotoneInTheFamily)
{
    const auto spec = GeneratorSpec::random_diffusion(6, BoundaryCondition::periodic, 4.0, 2);
    auto small = TrialFamily::parse("random-steps:count=5");
    auto large = small;
    large.count = 15;
    EXPECT_LE(estimate_strong_constant(spec, 3.0, 1.5, small, 64, 1),
              estimate_strong_constant(spec, 3.0, 1.5, large, 64, 1));
    auto spikes = TrialFamily::parse("spikes:count=5,width=0.03125");
    auto more = spikes;
    more.count = 12;
    EXPECT_LE(estimate_weak_constant(spec, spikes, 256, 2.0, 1), estimate_weak_constant(spec, more, 256, 2.0, 1));
}

TEST(Estimates, ScalarSpikeResponseClosedForm)
{
    const double a = 10.0;
    const Semigroup s(Eigen::MatrixXd::Constant(1, 1, a));
    const int cells = 1024;
    const double h = 1.0 / cells;
    std::vector<double> v(cells, 0.0);
    const int j = 200;
    const double height = 5.0;
    v[j] = height;
    const auto solution = solve_parabolic(s, scalar_function(-10, v));
    const double t1 = (j + 1) * h;
    for (int node = j + 1; node <= cells; node += 37) {
        const double t = node * h;
        const double expected = height / a * (1.0 - std::exp(-a * h)) * std::exp(-a * (t - t1));
        EXPECT_NEAR(solution.nodes(0, node), expected, 1e-13);
    }
    for (int node = 0; node <= j; ++node) {
        EXPECT_EQ(solution.nodes(0, node), 0.0);
    }
}

TEST(Estimates, ScalarSpikeWeakLimit)
{
    const double a = 50.0;
    const Semigroup s(Eigen::MatrixXd::Constant(1, 1, a));
    const int cells = 1 << 14;
    std::vector<double> v(cells, 0.0);
    for (int i = 4096; i < 4100; ++i) {
        v[i] = 1.0 / (4.0 / cells);
    }
    const auto f = scalar_function(-14, v);
    const auto solution = solve_parabolic(s, f);
    const double ratio = weak_l1_norm(solution.transformed()) / bochner_norm(f, 1.0);
    EXPECT_NEAR(ratio, spike_weak_limit(), 0.05 * frozen::inv_e);
    EXPECT_NEAR(spike_weak_limit(), frozen::inv_e, 1e-8);
}

TEST(Stress, FunctionsAreDeterministic)
{
    EXPECT_TRUE(stress_function(0).is_zero());
    EXPECT_TRUE(stress_function(300).is_zero());
    EXPECT_FALSE(stress_function(7).is_zero());
    EXPECT_EQ(stress_function(7).samples(), stress_function(7).samples());
    const auto f = stress_function(7);
    EXPECT_NEAR(stress_alpha(f, 2.0), 2.0 * bochner_norm(f, kInfinity), 1e-15);
    EXPECT_EQ(stress_alpha(stress_function(0), 0.5), 0.5);
}

TEST(Stress, CleanRunPassesAndMutationsAreCaught)
{
    const std::vector<double> scales{0.1, 1.0, 10.0};
    const auto clean = czd_stress(0, 24, scales, false, 1);
    EXPECT_TRUE(clean.ok()) << clean.summary();
    EXPECT_EQ(clean.total(), 75);
    EXPECT_EQ(clean.summary(), "25x3 pass");
    const auto mutated = czd_stress(0, 24, scales, true, 1);
    EXPECT_TRUE(mutated.ok()) << mutated.summary();
    EXPECT_EQ(mutated.summary(), "75/75 mutations detected");
    ASSERT_TRUE(mutated.first_failure.has_value());
}

TEST(Stress, MutationBreaksVerification)
{
    for (std::uint64_t seed = 1; seed < 20; ++seed) {
        const auto f = stress_function(seed);
        const double alpha = stress_alpha(f, 1.0);
        const auto d = decompose(f, alpha);
        EXPECT_TRUE(verify(d, f, alpha, 2.0).passed());
        EXPECT_FALSE(verify(mutate_decomposition(d), f, alpha, 2.0).passed());
    }
}

TEST(Sweep, SingleEntryAndJobIndependence)
{
    const auto spec = GeneratorSpec::random_diffusion(6, BoundaryCondition::dirichlet, 10.0, 4);
    const auto trials = TrialFamily::parse("oscillatory:count=6");
    SweepOptions one;
    one.jobs = 1;
    SweepOptions four = one;
    four.jobs = 4;
    const auto a = maxreg_sweep(spec, {2.0}, {2.0}, trials, {64}, one);
    ASSERT_EQ(a.entries.size(), 1u);
    const auto& e = a.entries.front();
    EXPECT_EQ(e.cells, 64);
    EXPECT_TRUE(std::isfinite(e.constant));
    EXPECT_LE(e.au_constant, 1.0 + 1e-9);
    EXPECT_NEAR(e.base_b, e.au_constant, 1e-15);
    EXPECT_NEAR(e.ratio, e.constant / (e.m0 + e.constant), 1e-12);
    ASSERT_TRUE(e.doubled_horizon.has_value());
    EXPECT_EQ(a.variation(2.0, 2.0), 0.0);
    EXPECT_EQ(a.find(2.0, 2.0, 64), &a.entries.front());
    EXPECT_EQ(a.find(3.0, 2.0, 64), nullptr);

    const auto b = maxreg_sweep(spec, {2.0}, {2.0}, trials, {64}, four);
    EXPECT_EQ(b.entries.front().constant, e.constant);
    EXPECT_EQ(b.entries.front().weak_constant, e.weak_constant);
    EXPECT_EQ(b.entries.front().m0, e.m0);
}

TEST(Sweep, EntriesOrderedByRefinement)
{
    const auto spec = GeneratorSpec::constant(4, BoundaryCondition::periodic);
    SweepOptions options;
    options.horizon_doubling = false;
    options.holder_constants = false;
    options.jobs = 1;
    const auto report = maxreg_sweep(spec, {1.5, 3.0}, {2.0}, TrialFamily::parse("random-steps:count=3"), {32, 64},
                                     options);
    ASSERT_EQ(report.entries.size(), 4u);
    EXPECT_EQ(report.entries[0].cells, 32);
    EXPECT_EQ(report.entries[3].cells, 64);
    EXPECT_FALSE(report.entries[0].doubled_horizon.has_value());
    EXPECT_THROW(maxreg_sweep(spec, {0.5}, {2.0}, TrialFamily{}, {32}, options), std::invalid_argument);
}

TEST(Scaling, PeriodicLaplacianSlopes)
{
    const Semigroup s(assemble_generator(GeneratorSpec::constant(64, BoundaryCondition::periodic)));
    const auto fit = kernel_scaling(s);
    EXPECT_NEAR(fit.kernel_slope, -1.0, 0.05);
    EXPECT_NEAR(fit.derivative_slope, -2.0, 0.05);
    EXPECT_LT(fit.tau_min, fit.tau_max);
    EXPECT_FALSE(fit.kernel_samples.empty());
}

TEST(Parallel, ResultsAndErrorsAreIndexed)
{
    for (int jobs : {1, 3}) {
        std::vector<std::int64_t> slots(100, 0);
        parallel_for(100, jobs, [&](std::int64_t i) { slots[static_cast<std::size_t>(i)] = i * i; });
        EXPECT_EQ(std::accumulate(slots.begin(), slots.end(), std::int64_t{0}), 328350);
        std::atomic<int> calls{0};
        EXPECT_THROW(parallel_for(50, jobs,
                                  [&](std::int64_t i) {
                                      ++calls;
                                      if (i == 7) {
                                          throw std::runtime_error("seven");
                                      }
                                  }),
                     std::runtime_error);
        EXPECT_LE(calls.load(), 50);
    }
    EXPECT_EQ(resolve_jobs(5), 5);
}

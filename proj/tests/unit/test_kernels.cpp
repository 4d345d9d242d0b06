#include "generators.hpp"
#include "oracles.hpp"

#include "vcz/experiments.hpp"
#include "vcz/generator.hpp"
#include "vcz/kernel_validators.hpp"
#include "vcz/kernels.hpp"
#include "vcz/semigroup.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <numbers>

using namespace vcz;
using namespace vcz::testing;

namespace {

std::shared_ptr<const Semigroup> scalar_semigroup(double a)
{
    return std::make_shared<const Semigroup>(Eigen::MatrixXd::Constant(1, 1, a));
}

VolterraKernel constant_in_s_kernel()
{
    VolterraKernel::Info info;
    info.name = "constant-in-s";
    const SpatialSpace x(1, 2.0);
    return VolterraKernel(info, x, x, [](double t, double) { return Eigen::MatrixXd::Constant(1, 1, 1.0 / t); });
}

std::vector<VolterraKernel> builtin_kernels()
{
    return {model_scalar_kernel(), heat_volterra_kernel(HeatLattice{1, 8, 0.125}),
            heat_volterra_kernel(HeatLattice{2, 3, 0.5, HeatNormalization::standard}),
            greens_kernel_from_generator(GeneratorSpec::random_diffusion(6, BoundaryCondition::dirichlet, 5.0, 2)),
            greens_kernel_from_generator([] {
                auto s = GeneratorSpec::constant(5, BoundaryCondition::periodic);
                s.coefficient_b.assign(5, 0.7);
                s.coefficient_c.assign(5, 0.2);
                return s;
            }())};
}

/// Standard heat kernel G(t, x) = e^{-x²/(4t)} / sqrt(4πt) in one dimension.
double heat_g(double t, double x)
{
    return std::exp(-x * x / (4.0 * t)) / std::sqrt(4.0 * std::numbers::pi * t);
}

} // namespace

TEST(ModelKernel, EvaluationAndCausality)
{
    const auto k = model_scalar_kernel();
    EXPECT_EQ(k(3.0, 1.0)(0, 0), 0.5);
    EXPECT_EQ(k(2.0, 1.5)(0, 0), 2.0);
    EXPECT_TRUE(k.info().off_support_only);
    EXPECT_EQ(k.info().holder_exponent, 1.0);
}

TEST(Kernels, AllBuiltinsRejectNonCausalArguments)
{
    for (const auto& k : builtin_kernels()) {
        EXPECT_THROW(k(1.0, 1.0), CausalityError) << k.info().name;
        EXPECT_THROW(k(1.0, 2.0), CausalityError) << k.info().name;
        EXPECT_THROW(k(1.0, 0.0), CausalityError) << k.info().name;
    }
}

TEST(Kernels, ConvolutionStructure)
{
    Gen gen(21);
    for (const auto& k : builtin_kernels()) {
        for (int trial = 0; trial < 20; ++trial) {
            const double s = gen.uniform(0.01, 3.0);
            const double t = s + std::exp(gen.uniform(-4.0, 2.0));
            const double c = gen.uniform(0.0, 5.0);
            const Eigen::MatrixXd a = k(t, s);
            const Eigen::MatrixXd b = k(t + c, s + c);
            EXPECT_LE((a - b).cwiseAbs().maxCoeff(), 1e-10 * (1.0 + a.cwiseAbs().maxCoeff())) << k.info().name;
        }
    }
}

TEST(HeatKernel, PointwiseValues)
{
    const double zero[] = {0.0};
    const double one[] = {1.0};
    EXPECT_NEAR(heat_kernel_pointwise(1.0, zero), frozen::heat_at_origin, 1e-16);
    EXPECT_NEAR(heat_kernel_pointwise(1.0, one), frozen::heat_at_one, 1e-16);
    EXPECT_THROW(heat_kernel_pointwise(0.0, zero), std::invalid_argument);
}

TEST(HeatKernel, IntegratesToZeroBySimpson)
{
    const double integral = simpson(
        [](double x) {
            const double p[] = {x};
            return heat_kernel_pointwise(1.0, p);
        },
        -30.0, 30.0, 60000);
    EXPECT_NEAR(integral, 0.0, 1e-8);
}

TEST(HeatKernel, StandardNormalizationIsTimeDerivativeOfGaussian)
{
    for (double t : {0.1, 1.0, 3.0}) {
        for (double x : {0.0, 0.3, 1.7}) {
            const double p[] = {x};
            const double h = 1e-4 * t;
            const double fd = (heat_g(t + h, x) - heat_g(t - h, x)) / (2.0 * h);
            EXPECT_NEAR(heat_kernel_pointwise(t, p, HeatNormalization::standard), fd, 1e-7 * (1.0 + std::abs(fd)));
        }
    }
}

TEST(HeatKernel, LiteralFormScalesWithDegreeMinusThree)
{
    Gen gen(22);
    for (int trial = 0; trial < 100; ++trial) {
        const double t = std::exp(gen.uniform(-3.0, 3.0));
        const double x = gen.normal();
        const double lambda = std::exp(gen.uniform(-2.0, 2.0));
        const double p[] = {x};
        const double q[] = {lambda * x};
        const double base = heat_kernel_pointwise(t, p);
        EXPECT_NEAR(heat_kernel_pointwise(lambda * lambda * t, q), base / (lambda * lambda * lambda),
                    1e-12 * std::abs(base) / (lambda * lambda * lambda) + 1e-300);
    }
}

TEST(HeatKernel, DerivativesSatisfyTheHeatEquation)
{
    // With the standard normalization k = ∂_t G = ∂_x² G, so ∂_t k = ∂_x² k.
    const int none[] = {0};
    const int two[] = {2};
    for (double t : {0.2, 1.0, 4.0}) {
        for (double x : {0.0, 0.5, 2.0}) {
            const double p[] = {x};
            const double dt = heat_kernel_derivative(t, p, 1, none, HeatNormalization::standard);
            const double dxx = heat_kernel_derivative(t, p, 0, two, HeatNormalization::standard);
            EXPECT_NEAR(dt, dxx, 1e-5 * (std::abs(dt) + 1e-3)) << "t=" << t << " x=" << x;
        }
    }
}

TEST(GreensKernel, ScalarGeneratorAndZero)
{
    EXPECT_NEAR(greens_kernel(scalar_semigroup(1.0))(2.0, 1.0)(0, 0), -frozen::inv_e, 1e-15);
    EXPECT_TRUE(greens_kernel(scalar_semigroup(0.0))(2.0, 1.0).isZero(0.0));
}

TEST(GeneratorSpec, SymmetricPositiveSemidefinite)
{
    for (auto bc : {BoundaryCondition::periodic, BoundaryCondition::dirichlet}) {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const auto a = assemble_generator(GeneratorSpec::random_diffusion(12, bc, 10.0, seed));
            EXPECT_LE((a - a.transpose()).cwiseAbs().maxCoeff(), 0.0);
            const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
            EXPECT_GE(es.eigenvalues().minCoeff(), -1e-10 * es.eigenvalues().maxCoeff());
        }
    }
}

TEST(GeneratorSpec, EllipticityAndSizes)
{
    auto spec = GeneratorSpec::random_diffusion(8, BoundaryCondition::dirichlet, 3.0, 1);
    for (double a : spec.diffusion) {
        EXPECT_GE(a, 1.0 / 3.0);
        EXPECT_LE(a, 3.0);
    }
    EXPECT_EQ(spec.diffusion.size(), 9u);
    spec.diffusion[0] = 10.0;
    EXPECT_THROW(spec.validate(), std::invalid_argument);
    EXPECT_EQ(GeneratorSpec::constant(8, BoundaryCondition::periodic).diffusion.size(), 8u);
}

TEST(Semigroup, IdentityHoldsForSymmetricAndDriftGenerators)
{
    auto drift = GeneratorSpec::random_diffusion(10, BoundaryCondition::dirichlet, 4.0, 5);
    drift.coefficient_b.assign(10, 3.0);
    drift.coefficient_c.assign(10, -0.5);
    for (const auto& spec : {GeneratorSpec::random_diffusion(10, BoundaryCondition::periodic, 4.0, 5), drift}) {
        const Semigroup s(assemble_generator(spec));
        for (double t1 : {1e-4, 1e-2, 0.3}) {
            for (double t2 : {1e-3, 0.1, 2.0}) {
                EXPECT_LE(s.semigroup_defect(t1, t2), 1e-8);
            }
        }
    }
}

TEST(ValidateSize, ModelKernelIsOne)
{
    const auto v = validate_size(model_scalar_kernel());
    EXPECT_EQ(v.estimate, 1.0);
    EXPECT_FALSE(v.diverged);
}

TEST(ValidateSize, GreenKernelIsInverseE)
{
    const auto spec = GeneratorSpec::constant(64, BoundaryCondition::periodic);
    EXPECT_NEAR(validate_size(greens_kernel_from_generator(spec)).estimate, frozen::inv_e, 1e-6);
    const auto random = GeneratorSpec::random_diffusion(16, BoundaryCondition::dirichlet, 10.0, 4);
    EXPECT_NEAR(validate_size(greens_kernel_from_generator(random)).estimate, frozen::inv_e, 1e-6);
}

TEST(ValidateSize, SteeperPowerDiverges)
{
    const auto v = validate_size(power_scalar_kernel(1.5));
    EXPECT_TRUE(v.diverged);
    EXPECT_EQ(v.divergence, "grows as the separation -> 0");
}

TEST(ValidateSize, RejectsShortPlans)
{
    SamplingPlan plan;
    plan.min_log2 = -5;
    plan.max_log2 = 5;
    EXPECT_THROW(validate_size(model_scalar_kernel(), plan), std::invalid_argument);
}

TEST(ValidateHolder, ModelKernelApproachesTwo)
{
    const auto s = validate_holder_s(model_scalar_kernel());
    EXPECT_GE(s.estimate, 1.9);
    EXPECT_LE(s.estimate, 2.0 + 1e-12);
    const auto t = validate_holder_t(model_scalar_kernel());
    EXPECT_GE(t.estimate, 1.9);
    EXPECT_LE(t.estimate, 2.0 + 1e-12);
}

TEST(ValidateHolder, ConvolutionKernelsAgreeInSAndT)
{
    const auto green = greens_kernel_from_generator(GeneratorSpec::random_diffusion(8, BoundaryCondition::dirichlet, 3.0, 9));
    EXPECT_NEAR(validate_holder_s(green).estimate, validate_holder_t(green).estimate, 1e-12);
    const auto heat = heat_volterra_kernel(HeatLattice{1, 8, 0.125});
    EXPECT_NEAR(validate_holder_s(heat).estimate, validate_holder_t(heat).estimate, 1e-9);
}

TEST(ValidateHolder, ConstantInSGivesZero)
{
    EXPECT_EQ(validate_holder_s(constant_in_s_kernel()).estimate, 0.0);
}

TEST(ValidateTimeDerivative, GreenKernelIsFourOverESquared)
{
    const auto spec = GeneratorSpec::constant(64, BoundaryCondition::periodic);
    EXPECT_NEAR(validate_time_derivative(greens_kernel_from_generator(spec)).estimate, frozen::four_over_e2, 1e-5);
}

TEST(Hormander, ModelKernelClosedFormsAcrossScales)
{
    const auto k = model_scalar_kernel();
    for (double delta : {1e-3, 1.0, 1e3}) {
        for (double s0 : {0.5, 1.0, 7.0}) {
            const auto plus = hormander_integral_s(k, s0 + delta, s0, 1e-7);
            EXPECT_NEAR(plus.value, frozen::ln2, 1e-6);
            EXPECT_GE(plus.value, frozen::ln2 - 1e-9);
            EXPECT_GT(plus.tail_bound, 0.0);
            if (s0 > delta) {
                EXPECT_NEAR(hormander_integral_s(k, s0 - delta, s0, 1e-7).value, frozen::ln3_2, 1e-6);
            }
            EXPECT_NEAR(hormander_integral_s(k, s0, s0 + delta, 1e-7).value, frozen::ln3_2, 1e-6);
        }
    }
}

TEST(Hormander, TimeVariantOfTheModelKernel)
{
    const auto k = model_scalar_kernel();
    for (double delta : {1e-3, 1.0, 1e3}) {
        const double t0 = delta * std::exp2(26.0);
        EXPECT_NEAR(hormander_integral_t(k, t0 + delta, t0, 1e-7).value, frozen::ln3_2, 1e-6);
        EXPECT_NEAR(hormander_integral_t(k, t0 - delta, t0, 1e-7).value, frozen::ln2, 1e-6);
    }
}

TEST(Hormander, ConstantInSAndSupremum)
{
    EXPECT_EQ(hormander_integral_s(constant_in_s_kernel(), 2.0, 1.0, 1e-7).value, 0.0);
    const auto sup = hormander_sup_s(model_scalar_kernel(), 1e-7);
    EXPECT_NEAR(sup.estimate, frozen::ln2, 1e-6);
    EXPECT_THROW(hormander_integral_s(model_scalar_kernel(), 1.0, 1.0, 1e-7), std::invalid_argument);
}

TEST(ParabolicEstimate, LiteralExponentIsUnbounded)
{
    const int none[] = {0};
    const auto check = parabolic_estimate_check(1, 0, none, 0.0);
    EXPECT_TRUE(check.unbounded);
    EXPECT_EQ(check.trend, "grows as t -> 0");
    // The growth follows k(t, 0) = -(2t)^{-1} (2πt)^{-1/2}.
    const double t = check.profile.front().first;
    EXPECT_NEAR(check.profile.front().second, 0.5 / t / std::sqrt(2.0 * std::numbers::pi * t),
                1e-9 * check.profile.front().second);
}

TEST(ParabolicEstimate, HomogeneousExponentIsBounded)
{
    const int none[] = {0};
    const auto check = parabolic_estimate_check(1, 0, none, 1.5);
    EXPECT_FALSE(check.unbounded);
    EXPECT_GT(check.supremum, 0.0);
    EXPECT_LT(check.supremum, 1.0);
}

TEST(ParabolicEstimate, DecayAtFixedXForSmallExponents)
{
    const double x[] = {1.0};
    for (double q : {0.0, 0.5, 1.0}) {
        double previous = kInfinity;
        for (double t = 1e3; t <= 1e12; t *= 10.0) {
            const double v = std::abs(heat_kernel_pointwise(t, x)) * std::pow(t + 1.0, q);
            EXPECT_LT(v, previous);
            previous = v;
        }
        EXPECT_LT(previous, 1e-5);
    }
}

TEST(KernelScaling, SlopesOfGreenKernelNorms)
{
    const Semigroup s(assemble_generator(GeneratorSpec::constant(64, BoundaryCondition::periodic)));
    const auto fit = kernel_scaling(s);
    EXPECT_NEAR(fit.kernel_slope, -1.0, 0.05);
    EXPECT_NEAR(fit.derivative_slope, -2.0, 0.05);
}

TEST(GrowthAtEdge, DetectsMonotoneEdges)
{
    EXPECT_EQ(growth_at_edge({8, 7, 6, 5, 4, 3, 2, 1, 1, 1}), "low");
    EXPECT_EQ(growth_at_edge({1, 1, 1, 2, 3, 4, 5, 6, 7, 8}), "high");
    EXPECT_EQ(growth_at_edge({1, 2, 3, 4, 3, 2, 1, 1, 1, 1}), "");
}

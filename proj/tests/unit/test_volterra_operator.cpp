#include "generators.hpp"
#include "oracles.hpp"

#include "vcz/cz_decomposition.hpp"
#include "vcz/experiments.hpp"
#include "vcz/volterra_operator.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <memory>

using namespace vcz;
using namespace vcz::testing;

namespace {

/// Mode-by-mode closed form of u' + Au = f for symmetric A and step f: cell averages of Au.
Eigen::MatrixXd au_by_modes(const Eigen::MatrixXd& a, const StepFunction& f)
{
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    const Eigen::MatrixXd q = es.eigenvectors();
    const Eigen::MatrixXd g = q.transpose() * f.samples();
    const double h = f.grid().cell_width();
    Eigen::MatrixXd out(g.rows(), g.cols());
    for (Eigen::Index m = 0; m < g.rows(); ++m) {
        const double lambda = es.eigenvalues()(m);
        double u = 0.0;
        for (Eigen::Index i = 0; i < g.cols(); ++i) {
            const double c = g(m, i);
            if (std::abs(lambda) < 1e-12) {
                out(m, i) = 0.0;
                u += h * c;
                continue;
            }
            // u(t) = c/λ + (u0 - c/λ) e^{-λ(t - t_i)} on the cell.
            const double decay = std::exp(-lambda * h);
            const double mean = c / lambda + (u - c / lambda) * (1.0 - decay) / (lambda * h);
            out(m, i) = lambda * mean;
            u = c / lambda + (u - c / lambda) * decay;
        }
    }
    return q * out;
}

VolterraKernel transposed_kernel(const VolterraKernel& k)
{
    return VolterraKernel(k.info(), k.range(), k.domain(),
                          [k](double t, double s) { return Eigen::MatrixXd(k(t, s).transpose()); });
}

StepFunction reversed(const StepFunction& f)
{
    return StepFunction(f.grid(), f.space(), f.samples().rowwise().reverse());
}

} // namespace

TEST(ApplyOffSupport, ModelKernelClosedForms)
{
    const auto k = model_scalar_kernel();
    const auto f = scalar_function(0, {1.0, 0.0, 0.0});
    EXPECT_NEAR(apply_off_support(k, f, 2.0)(0), frozen::ln2, 1e-10);
    EXPECT_NEAR(apply_off_support(k, f, 3.0)(0), frozen::ln3_2, 1e-10);
}

TEST(ApplyOffSupport, CausalityZeroBeforeSupport)
{
    Gen gen(31);
    const auto k = greens_kernel_from_generator(GeneratorSpec::random_diffusion(4, BoundaryCondition::dirichlet, 3.0, 1));
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::MatrixXd v = gen.values(4, 12, 0.0);
        v.leftCols(6).setZero();
        const StepFunction f(TimeGrid(-2, 12), SpatialSpace(4, 2.0), v);
        const double t = gen.uniform(0.05, 1.25);
        EXPECT_TRUE(apply_off_support(k, f, t).isZero(0.0));
    }
}

TEST(ApplyOffSupport, RejectsPointsOnOrNextToSupport)
{
    const auto k = model_scalar_kernel();
    const auto f = scalar_function(0, {1.0, 0.0, 0.0});
    EXPECT_THROW(apply_off_support(k, f, 0.5), std::invalid_argument);
    EXPECT_THROW(apply_off_support(k, f, 1.5), std::invalid_argument);
    EXPECT_NO_THROW(apply_off_support(k, f, 2.0));
}

TEST(ApplyBadPart, WorkedExampleMatchesOracle)
{
    const auto k = model_scalar_kernel();
    const auto d = decompose(scalar_function(0, {4.0}), 1.0);
    const auto b = d.bad[0].part.extended(4);
    const double shifted = apply_bad_part(k, b, d.bad[0].cube, 4.0)(0);
    EXPECT_NEAR(shifted, frozen::bad_part_at_4, 1e-10);
    EXPECT_NEAR(apply_off_support(k, b, 4.0)(0), shifted, 1e-10);
    EXPECT_NEAR(apply_bad_part(k, d.bad[0], 4.0)(0), shifted, 1e-10);
}

TEST(ApplyBadPart, ZeroBeforeCenterAndPreconditions)
{
    const auto k = model_scalar_kernel();
    const auto b = scalar_function(0, {0.0, 0.0, 1.0, -1.0});
    EXPECT_EQ(apply_bad_part(k, b, DyadicCube(1, 1), 1.0)(0), 0.0);
    EXPECT_THROW(apply_bad_part(k, scalar_function(0, {0.0, 0.0, 1.0, 0.0}), DyadicCube(1, 1), 6.0),
                 std::invalid_argument);
    EXPECT_THROW(apply_bad_part(k, b, DyadicCube(1, 1), 4.5), std::invalid_argument);
    EXPECT_THROW(apply_bad_part(k, b, DyadicCube(0, 3), 6.0), std::invalid_argument);
}

TEST(ApplyBadPart, MeanZeroCancellationOnRandomDecompositions)
{
    Gen gen(32);
    const auto green = greens_kernel_from_generator(GeneratorSpec::random_diffusion(3, BoundaryCondition::dirichlet, 5.0, 7));
    for (int trial = 0; trial < 30; ++trial) {
        Eigen::MatrixXd v = gen.values(3, 32, 0.4);
        const StepFunction f(TimeGrid(-3, 32), SpatialSpace(3, 2.0), v);
        const auto d = decompose(f, stress_alpha(f, 0.3));
        for (const auto& part : d.bad) {
            const auto wide = part.part.extended(d.grid().cells() + 64);
            const double t = expand(part.cube).right + gen.uniform(0.0, 2.0) + wide.grid().cell_width();
            const auto shifted = apply_bad_part(green, part, t);
            const auto direct = apply_off_support(green, wide, t);
            EXPECT_LE((shifted - direct).cwiseAbs().maxCoeff(), 1e-10);
        }
    }
}

TEST(ApplyOffSupport, SplitsOverTheDecomposition)
{
    Gen gen(33);
    const auto k = model_scalar_kernel();
    for (int trial = 0; trial < 30; ++trial) {
        Eigen::MatrixXd v = gen.values(1, 16, 0.3);
        const StepFunction f(TimeGrid(-2, 16), SpatialSpace(1, 2.0), v);
        const auto d = decompose(f, stress_alpha(f, 0.4));
        const std::int64_t cells = d.grid().cells() + 16;
        const double t = d.grid().horizon() + 1.0 + gen.uniform(0.0, 3.0);
        double parts = apply_off_support(k, d.good.extended(cells), t)(0);
        for (const auto& b : d.bad) {
            parts += apply_off_support(k, b.part.extended(cells), t)(0);
        }
        EXPECT_NEAR(apply_off_support(k, f.extended(cells), t)(0), parts, 1e-10);
    }
}

TEST(TransposeApply, ClosedFormAndAntiCausality)
{
    const auto k = model_scalar_kernel();
    EXPECT_NEAR(transpose_apply(k, scalar_function(0, {0.0, 0.0, 1.0}), 1.0)(0), frozen::ln2, 1e-10);
    EXPECT_EQ(transpose_apply(k, scalar_function(0, {1.0, 0.0, 0.0}), 2.5)(0), 0.0);
    EXPECT_THROW(transpose_apply(k, scalar_function(0, {0.0, 0.0, 1.0}), 2.5), std::invalid_argument);
}

TEST(TransposeApply, EqualsTimeReversedTransposedKernel)
{
    Gen gen(34);
    const auto spec = [] {
        auto s = GeneratorSpec::constant(4, BoundaryCondition::periodic);
        s.coefficient_b.assign(4, 1.5);
        return s;
    }();
    const auto k = greens_kernel_from_generator(spec);
    const auto kt = transposed_kernel(k);
    for (int trial = 0; trial < 10; ++trial) {
        Eigen::MatrixXd v = gen.values(4, 16, 0.2);
        v.leftCols(8).setZero();
        const StepFunction f(TimeGrid(-3, 16), SpatialSpace(4, 2.0), v);
        const double t = gen.uniform(0.05, 0.85);
        const auto lhs = transpose_apply(k, f, t);
        const auto rhs = apply_off_support(kt, reversed(f), f.grid().horizon() - t);
        EXPECT_LE((lhs - rhs).cwiseAbs().maxCoeff(), 1e-10 * (1.0 + lhs.cwiseAbs().maxCoeff()));
    }
}

TEST(Adjoint, ModelKernelClosedForm)
{
    const auto k = model_scalar_kernel();
    const auto c = adjoint_pairings(k, scalar_function(0, {1.0, 0.0, 0.0}), scalar_function(0, {0.0, 0.0, 1.0}));
    EXPECT_NEAR(c.forward, frozen::adjoint_pairing, 1e-10);
    EXPECT_NEAR(c.transpose, frozen::adjoint_pairing, 1e-10);
    EXPECT_LE(c.discrepancy(), 1e-10);
}

TEST(Adjoint, ZeroInputsAndOverlap)
{
    const auto k = model_scalar_kernel();
    EXPECT_EQ(adjoint_check(k, scalar_function(0, {0.0, 0.0, 0.0}), scalar_function(0, {0.0, 0.0, 1.0})), 0.0);
    EXPECT_EQ(adjoint_check(k, scalar_function(0, {1.0, 0.0, 0.0}), scalar_function(0, {0.0, 0.0, 0.0})), 0.0);
    EXPECT_THROW(adjoint_check(k, scalar_function(0, {1.0, 1.0, 0.0}), scalar_function(0, {0.0, 1.0, 1.0})),
                 std::invalid_argument);
}

TEST(Adjoint, RandomMatrixKernel)
{
    const auto k = greens_kernel_from_generator(GeneratorSpec::random_diffusion(5, BoundaryCondition::dirichlet, 8.0, 3));
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto [g, f] = random_separated_pair(5, seed);
        const auto c = adjoint_pairings(k, g, f);
        EXPECT_LE(c.discrepancy(), 1e-10 * (1.0 + std::abs(c.forward)));
    }
}

TEST(RandomSeparatedPair, SupportsAreSeparated)
{
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto [g, f] = random_separated_pair(2, seed, 5);
        for (std::int64_t i = 0; i < g.cells(); ++i) {
            for (std::int64_t j = 0; j < f.cells(); ++j) {
                if (!g.cell_is_zero(i) && !f.cell_is_zero(j)) {
                    EXPECT_GE(std::abs(i - j), 2);
                }
            }
        }
    }
}

TEST(SolveParabolic, ScalarClosedForm)
{
    const Semigroup one(Eigen::MatrixXd::Constant(1, 1, 1.0));
    const auto s = solve_parabolic(one, scalar_function(-5, std::vector<double>(32, 1.0)));
    EXPECT_NEAR(s.nodes(0, 32), frozen::scalar_u1, 1e-14);
    EXPECT_EQ(s.nodes(0, 0), 0.0);
    EXPECT_EQ(s.u.samples()(0, 31), s.nodes(0, 32));
}

TEST(SolveParabolic, ZeroForcingAndZeroGenerator)
{
    const auto zero = solve_parabolic(GeneratorSpec::constant(4, BoundaryCondition::periodic),
                                      StepFunction(TimeGrid(-3, 8), SpatialSpace(4, 2.0)));
    EXPECT_TRUE(zero.u.is_zero());
    EXPECT_TRUE(zero.Au.is_zero());

    const auto flat = solve_parabolic(Semigroup(Eigen::MatrixXd::Zero(1, 1)), scalar_function(-2, {3.0, 3.0, 3.0, 3.0}));
    for (int i = 0; i <= 4; ++i) {
        EXPECT_NEAR(flat.nodes(0, i), 3.0 * i * 0.25, 1e-15);
    }
    EXPECT_TRUE(flat.singular_generator);
    EXPECT_LE(flat.transformed().samples().cwiseAbs().maxCoeff(), 1e-15);
}

TEST(SolveParabolic, CellwiseEquationAndModeOracle)
{
    Gen gen(35);
    for (int trial = 0; trial < 20; ++trial) {
        const auto bc = trial % 2 ? BoundaryCondition::periodic : BoundaryCondition::dirichlet;
        const auto spec = GeneratorSpec::random_diffusion(6, bc, 10.0, static_cast<std::uint64_t>(trial));
        const StepFunction f(TimeGrid(-5, 32), SpatialSpace(6, 2.0), gen.values(6, 32, 0.2));
        const auto s = solve_parabolic(spec, f);
        const double scale = 1.0 + f.samples().cwiseAbs().maxCoeff();
        EXPECT_LE((s.du_dt.samples() + s.Au.samples() - f.samples()).cwiseAbs().maxCoeff(), 1e-10 * scale);
        EXPECT_TRUE(s.nodes.col(0).isZero(0.0));
        const auto oracle = au_by_modes(assemble_generator(spec), f);
        EXPECT_LE((s.Au.samples() - oracle).cwiseAbs().maxCoeff(), 1e-9 * scale);
    }
}

TEST(SolveParabolic, EnergyBoundAtTwoTwo)
{
    Gen gen(36);
    for (int trial = 0; trial < 30; ++trial) {
        const auto spec = GeneratorSpec::random_diffusion(8, BoundaryCondition::dirichlet, 10.0, 100 + trial);
        const StepFunction f(TimeGrid::unit_horizon(64), SpatialSpace(8, 2.0), gen.values(8, 64, 0.1));
        const auto s = solve_parabolic(spec, f);
        const double nf = bochner_norm(f, 2.0);
        EXPECT_LE(bochner_norm(s.Au, 2.0), nf * (1.0 + 1e-9));
        EXPECT_LE(bochner_norm(s.Au, 2.0) + bochner_norm(s.du_dt, 2.0), nf * (2.0 + 1e-9));
    }
}

TEST(SolveParabolic, MatchesOffSupportApplication)
{
    Gen gen(37);
    const auto spec = GeneratorSpec::random_diffusion(5, BoundaryCondition::dirichlet, 10.0, 9);
    const auto semigroup = std::make_shared<const Semigroup>(assemble_generator(spec));
    const auto kernel = greens_kernel(semigroup);
    for (int trial = 0; trial < 10; ++trial) {
        Eigen::MatrixXd v = gen.values(5, 32, 0.2);
        v.rightCols(16).setZero();
        const StepFunction f(TimeGrid(-5, 32), SpatialSpace(5, 2.0), v);
        const auto s = solve_parabolic(*semigroup, f);
        for (int node = 18; node <= 32; node += 7) {
            const Eigen::VectorXd pde = -(semigroup->generator() * s.nodes.col(node));
            const auto direct = apply_off_support(kernel, f, node / 32.0);
            EXPECT_LE((pde - direct).cwiseAbs().maxCoeff(), 1e-6 * (1.0 + pde.cwiseAbs().maxCoeff()));
        }
    }
}

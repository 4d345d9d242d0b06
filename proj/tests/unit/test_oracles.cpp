#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace vcz::testing;

TEST(Oracles, ModelCellIntegralsMatchFrozenLogs)
{
    EXPECT_NEAR(simpson([](double s) { return 1.0 / (2.0 - s); }, 0.0, 1.0), frozen::ln2, 1e-13);
    EXPECT_NEAR(simpson([](double s) { return 1.0 / (3.0 - s); }, 0.0, 1.0), frozen::ln3_2, 1e-13);
    EXPECT_NEAR(model_cell_integral(0.0, 1.0, 2.0), frozen::ln2, 1e-15);
}

TEST(Oracles, HormanderClosedForms)
{
    EXPECT_NEAR(hormander_model(+1.0), frozen::ln2, 1e-9);
    EXPECT_NEAR(hormander_model(-1.0), frozen::ln3_2, 1e-9);
}

TEST(Oracles, BadPartOfWorkedExample)
{
    const double v = simpson([](double s) { return 2.0 / (4.0 - s); }, 0.0, 1.0) -
                     simpson([](double s) { return 2.0 / (4.0 - s); }, 1.0, 2.0);
    EXPECT_NEAR(v, frozen::bad_part_at_4, 1e-13);
    EXPECT_LT(frozen::bad_part_at_4, 0.0);
}

TEST(Oracles, AdjointDoubleIntegral)
{
    EXPECT_NEAR(model_adjoint_pairing(), frozen::adjoint_pairing, 1e-10);
}

TEST(Oracles, SpectralSuprema)
{
    EXPECT_NEAR(spectral_sup(1), frozen::inv_e, 1e-9);
    EXPECT_NEAR(spectral_sup(2), frozen::four_over_e2, 1e-9);
    EXPECT_NEAR(spike_weak_limit(), frozen::inv_e, 1e-9);
}

TEST(Oracles, ScalarOdeAndMisc)
{
    // u' + u = 1, u(0) = 0 integrated by RK4 with a fine step.
    double u = 0.0;
    const int n = 10000;
    const double h = 1.0 / n;
    for (int i = 0; i < n; ++i) {
        auto f = [](double x) { return 1.0 - x; };
        const double k1 = f(u), k2 = f(u + h * k1 / 2), k3 = f(u + h * k2 / 2), k4 = f(u + h * k3);
        u += h * (k1 + 2 * k2 + 2 * k3 + k4) / 6.0;
    }
    EXPECT_NEAR(u, frozen::scalar_u1, 1e-12);
    EXPECT_NEAR(std::sqrt(9.0 + 9.0), frozen::three_sqrt2, 1e-15);
    // Largest singular value of the shear: sqrt of the top eigenvalue of [[1,1],[1,2]].
    EXPECT_NEAR(std::sqrt((3.0 + std::sqrt(5.0)) / 2.0), frozen::golden, 1e-15);
    const double c = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    EXPECT_NEAR(-0.5 * c, frozen::heat_at_origin, 1e-16);
    EXPECT_NEAR((1.0 - 0.5) * std::exp(-1.0) * c, frozen::heat_at_one, 1e-16);
}

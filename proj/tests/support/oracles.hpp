#pragma once

#include <cmath>
#include <functional>

/// Independent reference computations for the test suites, and their outputs frozen as
/// literals. test_oracles.cpp checks that each oracle still reproduces its frozen value;
/// the library tests compare against the literals.
namespace vcz::testing {

/// Composite Simpson rule with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 20000)
{
    const double h = (b - a) / n;
    double sum = f(a) + f(b);
    for (int i = 1; i < n; ++i) {
        sum += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    }
    return sum * h / 3.0;
}

/// ∫_a^b ds / (t - s) for b < t.
inline double model_cell_integral(double a, double b, double t)
{
    return std::log((t - a) / (t - b));
}

/// ∫_{2δ}^∞ δ / ((u - sign·δ) u) du after u = δ·e^x, which removes the scale; the tail
/// past u = δ·upper_ratio is 1/upper_ratio to leading order.
inline double hormander_model(double sign, double upper_ratio = 1e7)
{
    return simpson([sign](double x) { return 1.0 / (std::exp(x) - sign); }, std::log(2.0), std::log(upper_ratio),
                   200000) +
           1.0 / upper_ratio;
}

/// ∫_2^3 ∫_0^1 ds dt / (t - s).
inline double model_adjoint_pairing()
{
    return simpson([](double t) { return simpson([t](double s) { return 1.0 / (t - s); }, 0.0, 1.0, 400); }, 2.0,
                   3.0, 400);
}

/// Scalar response to a unit-mass spike in the delta limit, -a u(t) = -a e^{-a t}: its weak
/// L^1 norm is sup_λ λ·log(a/λ)/a = 1/e.
inline double spike_weak_limit()
{
    double best = 0.0;
    const double a = 1.0;
    for (int i = 1; i < 200000; ++i) {
        const double lambda = a * i / 200000.0;
        best = std::max(best, lambda * std::log(a / lambda) / a);
    }
    return best;
}

/// sup_{x > 0} x^k e^{-x}, by a fine scan.
inline double spectral_sup(int k)
{
    double best = 0.0;
    for (int i = 1; i < 400000; ++i) {
        const double x = i * 1e-5;
        best = std::max(best, std::pow(x, k) * std::exp(-x));
    }
    return best;
}

namespace frozen {
inline constexpr double ln2 = 0.6931471805599453;
inline constexpr double ln3_2 = 0.4054651081081644;
inline constexpr double bad_part_at_4 = -0.2355660713127669;
inline constexpr double adjoint_pairing = 0.523248143764548;
inline constexpr double inv_e = 0.36787944117144233;
inline constexpr double four_over_e2 = 0.5413411329464508;
inline constexpr double scalar_u1 = 0.6321205588285577;
inline constexpr double three_sqrt2 = 4.242640687119286;
inline constexpr double golden = 1.618033988749895;
inline constexpr double heat_at_origin = -0.19947114020071635;
inline constexpr double heat_at_one = 0.07338133158686996;
} // namespace frozen

} // namespace vcz::testing

#pragma once

#include "vcz/kernels.hpp"
#include "vcz/quadrature.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace vcz {

/// Deterministic log grid for kernel validators. Separations (t - s, or δ = |s - s0|) run
/// over [2^min_log2, 2^max_log2] with points_per_octave samples per doubling; general kernels
/// are probed at every anchor position, convolution kernels at the first anchor only.
struct SamplingPlan {
    int min_log2 = -20;
    int max_log2 = 20;
    int points_per_octave = 4;
    std::vector<double> anchors{1.0, 1.0 / 64.0, 64.0};
    /// Golden-section refinement around the best interior sample.
    bool refine = true;

    /// Throws std::invalid_argument unless the grid spans at least six decades.
    void validate() const;
};

/// Sampled supremum of a kernel condition. A sampled supremum is a lower bound on the true one;
/// `diverged` flags a quantity still growing monotonically at an edge of the sampling grid.
struct ValidatorResult {
    double estimate = 0.0;
    bool diverged = false;
    std::string divergence; ///< which edge, when diverged
    /// (separation, best value at that separation) along the grid, ascending separation.
    std::vector<std::pair<double, double>> profile;
};

/// sup (t - s) ‖K(t, s)‖, operator norms taken at the upper end of the induced-norm enclosure.
ValidatorResult validate_size(const VolterraKernel& kernel, const SamplingPlan& plan = {});

/// sup ‖K(t, s) - K(t, s0)‖ (t - s0)^{1+σ} / |s - s0|^σ over t - s0 >= 2|s - s0|.
ValidatorResult validate_holder_s(const VolterraKernel& kernel, const SamplingPlan& plan = {});
/// sup ‖K(t, s) - K(t0, s)‖ (t0 - s)^{1+σ} / |t - t0|^σ over t0 - s >= 2|t - t0|.
ValidatorResult validate_holder_t(const VolterraKernel& kernel, const SamplingPlan& plan = {});

/// sup τ² ‖∂_τ K(τ)‖ for convolution kernels.
ValidatorResult validate_time_derivative(const VolterraKernel& kernel, const SamplingPlan& plan = {});

/// ‖K(τ)‖ at the upper end of the induced-norm enclosure, for convolution kernels.
double kernel_norm(const VolterraKernel& kernel, double tau);
double kernel_derivative_norm(const VolterraKernel& kernel, double tau);

struct HormanderResult {
    double value = 0.0;      ///< quadrature + tail_bound
    double quadrature = 0.0;
    double tail_bound = 0.0; ///< certified remainder past the truncation point
    double truncation = 0.0; ///< separation at which the quadrature stops
    double holder_constant = 0.0;
    bool diverged = false;
};

/// ∫_{t - s0 >= 2|s - s0|} ‖K(t, s) - K(t, s0)‖ dt. The integral is truncated where the tail
/// bound (M1/σ) δ^σ / (t - s0)^σ drops below tol/2 and the bound is added to the result.
/// The Hölder constant M1 comes from validate_holder_s unless supplied.
HormanderResult hormander_integral_s(const VolterraKernel& kernel, double s, double s0, double tol,
                                     std::optional<double> holder_constant = std::nullopt);
/// ∫_{t0 - s >= 2|t - t0|, s > 0} ‖K(t, s) - K(t0, s)‖ ds, truncated the same way when t0 is large.
HormanderResult hormander_integral_t(const VolterraKernel& kernel, double t, double t0, double tol,
                                     std::optional<double> holder_constant = std::nullopt);

/// Sampled supremum of the Hörmander integrals over δ in {1e-3, 1, 1e3}, both signs of s - s0.
ValidatorResult hormander_sup_s(const VolterraKernel& kernel, double tol);
ValidatorResult hormander_sup_t(const VolterraKernel& kernel, double tol);

/// ∂_t^m ∂_x^α of the pointwise heat kernel by central differences with one Richardson step.
/// Requires m + |α| <= 2.
double heat_kernel_derivative(double t, std::span<const double> x, int time_order,
                              std::span<const int> multi_index,
                              HeatNormalization variant = HeatNormalization::literal);

struct ParabolicScan {
    int t_min_log2 = -30;
    int t_max_log2 = 10;
    int x_min_log2 = -15;
    int x_max_log2 = 5;
    int points_per_octave = 2;
};

struct ParabolicCheck {
    double supremum = 0.0;
    double t_at = 0.0;
    double x_at = 0.0; ///< |x| of the maximizer, along the first axis
    bool unbounded = false;
    std::string trend;  ///< description of the growth when unbounded
    /// (t, sup over |x| at that t), ascending t.
    std::vector<std::pair<double, double>> profile;
};

/// Scans |∂_t^m ∂_x^α k(t, x)| (t + |x|²)^q over a log grid in (t, |x|), x along the first axis.
ParabolicCheck parabolic_estimate_check(int dimension, int time_order, std::span<const int> multi_index,
                                        double q, HeatNormalization variant = HeatNormalization::literal,
                                        const ParabolicScan& scan = {});

/// Whether `values` (ordered along an axis) keep growing toward the front or the back.
/// Returns "low", "high" or an empty string.
std::string growth_at_edge(const std::vector<double>& values, int window = 6, double min_growth = 1e-3);

} // namespace vcz

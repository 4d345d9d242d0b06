#pragma once

#include "vcz/generator.hpp"
#include "vcz/semigroup.hpp"
#include "vcz/timegrid.hpp"

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

namespace vcz {

/// Raised when a Volterra kernel is queried outside 0 < s < t.
class CausalityError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Operator-valued kernel K(t, s) : X -> Y, defined for 0 < s < t.
///
/// Convolution kernels K(t, s) = k(t - s) may also carry an analytic time derivative
/// ∂_τ k(τ); validators fall back to finite differences when it is missing.
class VolterraKernel {
public:
    using Evaluator = std::function<Eigen::MatrixXd(double t, double s)>;
    using Applier = std::function<Eigen::VectorXd(double t, double s, const Eigen::VectorXd& v)>;
    using Derivative = std::function<Eigen::MatrixXd(double tau)>;

    struct Info {
        std::string name;
        double holder_exponent = 1.0;          ///< σ in (0, 1]
        std::optional<double> claimed_constant; ///< M, when known
        bool off_support_only = false;          ///< no meaning on the support of f
        bool convolution = false;               ///< K(t, s) depends on t - s only
    };

    VolterraKernel(Info info, SpatialSpace domain, SpatialSpace range, Evaluator evaluator,
                   Applier applier = {}, Derivative derivative = {});

    const Info& info() const noexcept { return info_; }
    const SpatialSpace& domain() const noexcept { return domain_; }
    const SpatialSpace& range() const noexcept { return range_; }

    /// Throws CausalityError unless 0 < s < t.
    Eigen::MatrixXd operator()(double t, double s) const;
    Eigen::VectorXd apply(double t, double s, const Eigen::VectorXd& v) const;

    bool has_time_derivative() const noexcept { return static_cast<bool>(derivative_); }
    /// ∂_τ k(τ) for convolution kernels; finite differences when no analytic form was supplied.
    Eigen::MatrixXd time_derivative(double tau) const;

    /// Same kernel with X and Y measured in ℓ^r.
    VolterraKernel with_exponent(double r) const;

private:
    void check_causal(double t, double s) const;

    Info info_;
    SpatialSpace domain_;
    SpatialSpace range_;
    Evaluator evaluator_;
    Applier applier_;
    Derivative derivative_;
};

/// K(t, s) = 1/(t - s), σ = 1. Only usable off the support of f.
VolterraKernel model_scalar_kernel();

/// K(t, s) = 1/(t - s)^γ. For γ != 1 this is not a standard kernel; useful for divergence checks.
VolterraKernel power_scalar_kernel(double exponent);

enum class HeatNormalization {
    literal,  ///< (|x|²/t² - d/(2t)) e^{-|x|²/t} / (2πt)^{d/2}
    standard, ///< ∂_t of e^{-|x|²/(4t)} / (4πt)^{d/2}
};

HeatNormalization parse_heat_normalization(const std::string& text);

/// Time derivative of the heat kernel at (t, x), d = x.size(). Throws for t <= 0.
double heat_kernel_pointwise(double t, std::span<const double> x,
                             HeatNormalization variant = HeatNormalization::literal);

/// Heat kernel acting on a lattice of points_per_axis^d samples with the given
/// spacing: [K(τ)g]_i = Σ_j k(τ, x_i - x_j) g_j spacing^d.
struct HeatLattice {
    int dimension = 1;
    int points_per_axis = 16;
    double spacing = 1.0 / 16.0;
    HeatNormalization variant = HeatNormalization::literal;
};
VolterraKernel heat_volterra_kernel(const HeatLattice& lattice, double r = 2.0);

/// K(t, s) = -A e^{-(t-s)A}, the time derivative of the discrete Green function.
VolterraKernel greens_kernel(std::shared_ptr<const Semigroup> semigroup, double r = 2.0);
VolterraKernel greens_kernel_from_generator(const GeneratorSpec& spec, double r = 2.0);

} // namespace vcz

#include "vcz/kernels.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

namespace vcz {

VolterraKernel::VolterraKernel(Info info, SpatialSpace domain, SpatialSpace range, Evaluator evaluator,
                               Applier applier, Derivative derivative)
    : info_(std::move(info)),
      domain_(domain),
      range_(range),
      evaluator_(std::move(evaluator)),
      applier_(std::move(applier)),
      derivative_(std::move(derivative))
{
    if (!evaluator_) {
        throw std::invalid_argument("VolterraKernel: evaluator is required");
    }
    if (!(info_.holder_exponent > 0.0 && info_.holder_exponent <= 1.0)) {
        throw std::invalid_argument("VolterraKernel: Hölder exponent must lie in (0, 1]");
    }
}

void VolterraKernel::check_causal(double t, double s) const
{
    if (!(s > 0.0 && s < t)) {
        std::ostringstream os;
        os << info_.name << ": kernel queried at (t, s) = (" << t << ", " << s << "), need 0 < s < t";
        throw CausalityError(os.str());
    }
}

Eigen::MatrixXd VolterraKernel::operator()(double t, double s) const
{
    check_causal(t, s);
    return evaluator_(t, s);
}

Eigen::VectorXd VolterraKernel::apply(double t, double s, const Eigen::VectorXd& v) const
{
    check_causal(t, s);
    if (applier_) {
        return applier_(t, s, v);
    }
    return evaluator_(t, s) * v;
}

Eigen::MatrixXd VolterraKernel::time_derivative(double tau) const
{
    if (!info_.convolution) {
        throw std::logic_error(info_.name + ": time derivative is defined for convolution kernels only");
    }
    if (!(tau > 0.0)) {
        throw CausalityError(info_.name + ": time derivative needs tau > 0");
    }
    if (derivative_) {
        return derivative_(tau);
    }
    // Central difference with one Richardson step, anchored at s = tau so that s stays positive.
    const double s = tau;
    auto central = [&](double step) {
        return (evaluator_(s + tau + step, s) - evaluator_(s + tau - step, s)) / (2.0 * step);
    };
    const double step = 1e-2 * tau;
    return (4.0 * central(0.5 * step) - central(step)) / 3.0;
}

VolterraKernel VolterraKernel::with_exponent(double r) const
{
    VolterraKernel copy = *this;
    copy.domain_ = domain_.with_exponent(r);
    copy.range_ = range_.with_exponent(r);
    return copy;
}

VolterraKernel model_scalar_kernel()
{
    return power_scalar_kernel(1.0);
}

VolterraKernel power_scalar_kernel(double exponent)
{
    VolterraKernel::Info info;
    info.holder_exponent = 1.0;
    info.off_support_only = true;
    info.convolution = true;
    if (exponent == 1.0) {
        info.name = "model";
        info.claimed_constant = 2.0;
    } else {
        info.name = "power:" + std::to_string(exponent);
    }
    const SpatialSpace scalar(1, 2.0);
    return VolterraKernel(
        info, scalar, scalar,
        [exponent](double t, double s) {
            Eigen::MatrixXd k(1, 1);
            k(0, 0) = exponent == 1.0 ? 1.0 / (t - s) : std::pow(t - s, -exponent);
            return k;
        },
        {},
        [exponent](double tau) {
            Eigen::MatrixXd k(1, 1);
            k(0, 0) = -exponent * std::pow(tau, -exponent - 1.0);
            return k;
        });
}

HeatNormalization parse_heat_normalization(const std::string& text)
{
    if (text == "literal") {
        return HeatNormalization::literal;
    }
    if (text == "standard") {
        return HeatNormalization::standard;
    }
    throw std::invalid_argument("unknown heat kernel normalization '" + text + "' (literal|standard)");
}

double heat_kernel_pointwise(double t, std::span<const double> x, HeatNormalization variant)
{
    if (!(t > 0.0)) {
        throw std::invalid_argument("heat_kernel_pointwise: t must be positive");
    }
    if (x.empty()) {
        throw std::invalid_argument("heat_kernel_pointwise: dimension must be positive");
    }
    double r2 = 0.0;
    for (double xi : x) {
        r2 += xi * xi;
    }
    const auto d = static_cast<double>(x.size());
    if (variant == HeatNormalization::literal) {
        return (r2 / (t * t) - d / (2.0 * t)) * std::exp(-r2 / t)
               / std::pow(2.0 * std::numbers::pi * t, d / 2.0);
    }
    return (r2 / (4.0 * t * t) - d / (2.0 * t)) * std::exp(-r2 / (4.0 * t))
           / std::pow(4.0 * std::numbers::pi * t, d / 2.0);
}

VolterraKernel heat_volterra_kernel(const HeatLattice& lattice, double r)
{
    if (lattice.dimension < 1 || lattice.points_per_axis < 1 || !(lattice.spacing > 0.0)) {
        throw std::invalid_argument("heat_volterra_kernel: invalid lattice");
    }
    int m = 1;
    for (int i = 0; i < lattice.dimension; ++i) {
        m *= lattice.points_per_axis;
        if (m > 4096) {
            throw std::invalid_argument("heat_volterra_kernel: lattice larger than 4096 points");
        }
    }
    // Coordinates of every lattice point, row-major in the axis index.
    std::vector<std::vector<double>> points(static_cast<std::size_t>(m),
                                            std::vector<double>(static_cast<std::size_t>(lattice.dimension)));
    for (int p = 0; p < m; ++p) {
        int rest = p;
        for (int axis = 0; axis < lattice.dimension; ++axis) {
            points[static_cast<std::size_t>(p)][static_cast<std::size_t>(axis)] =
                lattice.spacing * (rest % lattice.points_per_axis);
            rest /= lattice.points_per_axis;
        }
    }
    const double volume = std::pow(lattice.spacing, lattice.dimension);
    auto matrix = [points, m, volume, lattice](double tau) {
        Eigen::MatrixXd k(m, m);
        std::vector<double> diff(static_cast<std::size_t>(lattice.dimension));
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) {
                for (std::size_t a = 0; a < diff.size(); ++a) {
                    diff[a] = points[static_cast<std::size_t>(i)][a] - points[static_cast<std::size_t>(j)][a];
                }
                k(i, j) = volume * heat_kernel_pointwise(tau, diff, lattice.variant);
            }
        }
        return k;
    };
    VolterraKernel::Info info;
    info.name = "heat:d=" + std::to_string(lattice.dimension);
    info.convolution = true;
    const SpatialSpace space(m, r);
    return VolterraKernel(info, space, space, [matrix](double t, double s) { return matrix(t - s); });
}

VolterraKernel greens_kernel(std::shared_ptr<const Semigroup> semigroup, double r)
{
    if (!semigroup) {
        throw std::invalid_argument("greens_kernel: semigroup is null");
    }
    VolterraKernel::Info info;
    info.name = "green";
    info.convolution = true;
    const SpatialSpace space(static_cast<int>(semigroup->size()), r);
    return VolterraKernel(
        info, space, space, [semigroup](double t, double s) { return semigroup->kernel(t - s); },
        [semigroup](double t, double s, const Eigen::VectorXd& v) { return semigroup->apply_kernel(t - s, v); },
        [semigroup](double tau) { return semigroup->kernel_derivative(tau); });
}

VolterraKernel greens_kernel_from_generator(const GeneratorSpec& spec, double r)
{
    return greens_kernel(std::make_shared<const Semigroup>(assemble_generator(spec)), r);
}

} // namespace vcz

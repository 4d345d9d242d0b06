#include "vcz/generator.hpp"

#include "vcz/random.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vcz {

BoundaryCondition parse_boundary_condition(const std::string& text)
{
    if (text == "periodic") {
        return BoundaryCondition::periodic;
    }
    if (text == "dirichlet") {
        return BoundaryCondition::dirichlet;
    }
    throw std::invalid_argument("unknown boundary condition '" + text + "' (periodic|dirichlet)");
}

std::string to_string(BoundaryCondition bc)
{
    return bc == BoundaryCondition::periodic ? "periodic" : "dirichlet";
}

double GeneratorSpec::spacing() const noexcept
{
    return boundary == BoundaryCondition::periodic ? 1.0 / size : 1.0 / (size + 1);
}

std::size_t GeneratorSpec::midpoint_count() const noexcept
{
    const auto m = static_cast<std::size_t>(std::max(size, 0));
    return boundary == BoundaryCondition::periodic ? m : m + 1;
}

bool GeneratorSpec::has_drift() const noexcept
{
    return std::any_of(coefficient_b.begin(), coefficient_b.end(), [](double v) { return v != 0.0; });
}

void GeneratorSpec::validate() const
{
    if (size < 1) {
        throw std::invalid_argument("GeneratorSpec: m must be positive");
    }
    if (boundary == BoundaryCondition::periodic && size < 3) {
        throw std::invalid_argument("GeneratorSpec: periodic grids need m >= 3");
    }
    if (!(ellipticity >= 1.0) || !std::isfinite(ellipticity)) {
        throw std::invalid_argument("GeneratorSpec: Lambda must be a finite number >= 1");
    }
    if (diffusion.size() != midpoint_count()) {
        throw std::invalid_argument("GeneratorSpec: expected " + std::to_string(midpoint_count())
                                    + " diffusion values, got " + std::to_string(diffusion.size()));
    }
    // Relative slack so that a = Λ^{-1} computed as 1/Λ is accepted.
    const double lo = (1.0 / ellipticity) * (1.0 - 1e-12);
    const double hi = ellipticity * (1.0 + 1e-12);
    for (double a : diffusion) {
        if (!(a >= lo && a <= hi)) {
            throw std::invalid_argument("GeneratorSpec: diffusion value " + std::to_string(a)
                                        + " violates the ellipticity bounds for Lambda="
                                        + std::to_string(ellipticity));
        }
    }
    for (const auto* v : {&coefficient_b, &coefficient_c}) {
        if (!v->empty() && v->size() != static_cast<std::size_t>(size)) {
            throw std::invalid_argument("GeneratorSpec: b and c need one value per node");
        }
        if (!std::all_of(v->begin(), v->end(), [](double x) { return std::isfinite(x); })) {
            throw std::invalid_argument("GeneratorSpec: coefficients must be finite");
        }
    }
}

GeneratorSpec GeneratorSpec::constant(int size, BoundaryCondition boundary, double a)
{
    GeneratorSpec spec;
    spec.size = size;
    spec.boundary = boundary;
    spec.ellipticity = std::max({1.0, a, 1.0 / a});
    spec.diffusion.assign(spec.midpoint_count(), a);
    return spec;
}

GeneratorSpec GeneratorSpec::random_diffusion(int size, BoundaryCondition boundary, double ellipticity,
                                              std::uint64_t seed)
{
    GeneratorSpec spec;
    spec.size = size;
    spec.boundary = boundary;
    spec.ellipticity = ellipticity;
    Rng rng(seed);
    const double log_l = std::log(ellipticity);
    spec.diffusion.resize(spec.midpoint_count());
    for (double& a : spec.diffusion) {
        a = std::exp(rng.uniform(-log_l, log_l));
    }
    return spec;
}

Eigen::MatrixXd assemble_generator(const GeneratorSpec& spec)
{
    spec.validate();
    const int m = spec.size;
    const double dx = spec.spacing();
    const double inv_dx2 = 1.0 / (dx * dx);
    const bool periodic = spec.boundary == BoundaryCondition::periodic;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);

    // Midpoint indices to the left and right of node i.
    auto left_mid = [&](int i) { return periodic ? (i + m - 1) % m : i; };
    auto right_mid = [&](int i) { return periodic ? i : i + 1; };

    for (int i = 0; i < m; ++i) {
        const double al = spec.diffusion[static_cast<std::size_t>(left_mid(i))];
        const double ar = spec.diffusion[static_cast<std::size_t>(right_mid(i))];
        a(i, i) += (al + ar) * inv_dx2;
        const int lft = i - 1;
        const int rgt = i + 1;
        if (lft >= 0 || periodic) {
            a(i, (lft + m) % m) -= al * inv_dx2;
        }
        if (rgt < m || periodic) {
            a(i, rgt % m) -= ar * inv_dx2;
        }
        if (!spec.coefficient_b.empty()) {
            const double b = spec.coefficient_b[static_cast<std::size_t>(i)] / (2.0 * dx);
            if (rgt < m || periodic) {
                a(i, rgt % m) += b;
            }
            if (lft >= 0 || periodic) {
                a(i, (lft + m) % m) -= b;
            }
        }
        if (!spec.coefficient_c.empty()) {
            a(i, i) += spec.coefficient_c[static_cast<std::size_t>(i)];
        }
    }
    return a;
}

} // namespace vcz

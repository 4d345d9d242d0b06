#pragma once

#include <Eigen/Dense>

#include <cstdint>

namespace vcz {

/// Certified enclosure of an induced operator norm.
struct NormBounds {
    double lower = 0.0;
    double upper = 0.0;

    bool exact() const noexcept { return lower == upper; }
};

double max_column_sum(const Eigen::MatrixXd& a);
double max_row_sum(const Eigen::MatrixXd& a);
double spectral_norm(const Eigen::MatrixXd& a);

/// Riesz–Thorin style bound ‖A‖_1^{1/r} ‖A‖_∞^{1-1/r} on the ℓ^r → ℓ^r norm.
double interpolation_upper_bound(const Eigen::MatrixXd& a, double r);

/// ‖A‖_{ℓ^r → ℓ^r}. Exact for r in {1, 2, inf}. For other r the lower end comes from a
/// power-type ascent over deterministic random starts, the upper end from interpolation.
/// Throws std::invalid_argument for r < 1 or non-finite entries.
NormBounds induced_operator_norm(const Eigen::MatrixXd& a, double r, std::uint64_t seed = 0x5eedULL);

/// Upper end of induced_operator_norm without running the ascent.
double induced_norm_upper(const Eigen::MatrixXd& a, double r);

} // namespace vcz

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace vcz {

enum class BoundaryCondition { periodic, dirichlet };

BoundaryCondition parse_boundary_condition(const std::string& text);
std::string to_string(BoundaryCondition bc);

/// One-dimensional elliptic operator Au = -(a u')' + b u' + c u on (0, 1), discretized by
/// second-order centered differences with a sampled at cell midpoints.
///
/// Periodic grids have m nodes x_i = i/m and m midpoints (the last one wraps). Dirichlet grids
/// have m interior nodes x_i = (i+1)/(m+1) and m+1 midpoints, the first to the left of node 0.
struct GeneratorSpec {
    int size = 0;
    BoundaryCondition boundary = BoundaryCondition::periodic;
    double ellipticity = 1.0;               ///< Λ >= 1
    std::vector<double> diffusion;          ///< a at midpoints
    std::vector<double> coefficient_b;      ///< drift at nodes; empty means zero
    std::vector<double> coefficient_c;      ///< reaction at nodes; empty means zero

    /// Throws std::invalid_argument when sizes mismatch or Λ^{-1} <= a <= Λ fails.
    void validate() const;

    double spacing() const noexcept;
    std::size_t midpoint_count() const noexcept;
    bool has_drift() const noexcept;

    static GeneratorSpec constant(int size, BoundaryCondition boundary, double a = 1.0);
    /// Log-uniform a in [Λ^{-1}, Λ], deterministic in the seed.
    static GeneratorSpec random_diffusion(int size, BoundaryCondition boundary, double ellipticity,
                                          std::uint64_t seed);
};

/// Dense m x m matrix of A.
Eigen::MatrixXd assemble_generator(const GeneratorSpec& spec);

} // namespace vcz

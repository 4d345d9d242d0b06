#pragma once

#include "vcz/dyadic.hpp"
#include "vcz/timegrid.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace vcz {

struct CubeAverage {
    Eigen::VectorXd vector; ///< (1/|Q|) ∫_Q f
    double norm = 0.0;      ///< (1/|Q|) ∫_Q ‖f‖_X
};

/// Vector and norm averages of f over a dyadic cube. Cells past the end of the grid count as
/// zero. Throws std::invalid_argument for cubes finer than the grid.
CubeAverage cube_average(const StepFunction& f, const DyadicCube& q);

/// One maximal bad cube together with its share of f.
struct BadPart {
    DyadicCube cube;
    StepFunction part;      ///< b_j = (f - average) 1_{Q_j}
    Eigen::VectorXd average;
    double norm_average = 0.0;

    double center() const noexcept { return cube.center(); }
};

/// f = good + Σ bad[j].part at level alpha.
///
/// The decomposition lives on a grid that may be longer than f's: a selected cube can
/// reach past the end of f's support when the cell count is not a power of two, and the
/// good part is spread over the whole cube.
struct CZDecomposition {
    double alpha = 0.0;
    StepFunction good;
    std::vector<BadPart> bad;

    const TimeGrid& grid() const noexcept { return good.grid(); }
    StepFunction bad_sum() const;
};

/// Calderón–Zygmund decomposition by top-down stopping time over the dyadic tree.
///
/// Starts from the lowest level at which every cube meeting the support is good and
/// descends; a child whose norm-average exceeds alpha is a maximal bad cube. A cube whose
/// norm-average equals alpha is good. Throws std::invalid_argument for alpha <= 0.
CZDecomposition decompose(const StepFunction& f, double alpha);

struct PropertyCheck {
    std::string property;
    bool passed = true;
    double lhs = 0.0;
    double rhs = 0.0;
    std::optional<DyadicCube> witness;
    std::string detail;
};

struct PropertyReport {
    std::vector<PropertyCheck> checks;

    bool passed() const;
    const PropertyCheck* first_failure() const;
};

/// Checks every stated property of a decomposition of f at level alpha, plus exact
/// reconstruction and the (alpha, 2 alpha] selection bound. `r` is the time exponent used
/// for the partial-sum bound ∫‖Σ_{j=k}^l b_j‖^r <= 2^r ∫_{∪Q_j} ‖f‖^r.
PropertyReport verify(const CZDecomposition& d, const StepFunction& f, double alpha, double r,
                      double tolerance = 1e-12);

} // namespace vcz

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

namespace vcz {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// ℓ^r norm of a finite vector, r in [1, inf].
double lr_norm(const Eigen::Ref<const Eigen::VectorXd>& v, double r);

/// Finite-dimensional ℓ^r space on R^m. Plays the role of the Banach spaces X and Y.
class SpatialSpace {
public:
    /// Throws std::invalid_argument unless dimension >= 1 and exponent in (1, inf].
    SpatialSpace(int dimension, double exponent);

    int dimension() const noexcept { return dimension_; }
    double exponent() const noexcept { return exponent_; }

    double norm(const Eigen::Ref<const Eigen::VectorXd>& v) const;

    /// Same dimension, different exponent.
    SpatialSpace with_exponent(double exponent) const { return {dimension_, exponent}; }

    bool operator==(const SpatialSpace&) const = default;

private:
    int dimension_;
    double exponent_;
};

/// Uniform dyadic grid on (0, T]: cell i is (i*h, (i+1)*h] with h = 2^level.
class TimeGrid {
public:
    TimeGrid(int level, std::int64_t cells);

    /// Grid on (0, 1] with `cells` cells; `cells` must be a power of two.
    static TimeGrid unit_horizon(std::int64_t cells);

    int level() const noexcept { return level_; }
    std::int64_t cells() const noexcept { return cells_; }
    double cell_width() const noexcept { return width_; }
    double horizon() const noexcept { return width_ * static_cast<double>(cells_); }
    double left(std::int64_t i) const noexcept { return width_ * static_cast<double>(i); }
    double right(std::int64_t i) const noexcept { return width_ * static_cast<double>(i + 1); }
    double midpoint(std::int64_t i) const noexcept { return width_ * (static_cast<double>(i) + 0.5); }

    /// Same resolution with a different number of cells.
    TimeGrid resized(std::int64_t cells) const { return {level_, cells}; }

    bool operator==(const TimeGrid& o) const noexcept
    {
        return level_ == o.level_ && cells_ == o.cells_;
    }

private:
    int level_;
    std::int64_t cells_;
    double width_;
};

/// Vector-valued piecewise-constant function on a TimeGrid, zero outside (0, T].
/// Column i of samples() is the value on cell i.
class StepFunction {
public:
    StepFunction(TimeGrid grid, SpatialSpace space);
    StepFunction(TimeGrid grid, SpatialSpace space, Eigen::MatrixXd samples);

    const TimeGrid& grid() const noexcept { return grid_; }
    const SpatialSpace& space() const noexcept { return space_; }
    const Eigen::MatrixXd& samples() const noexcept { return samples_; }
    std::int64_t cells() const noexcept { return grid_.cells(); }
    int dimension() const noexcept { return space_.dimension(); }

    auto value(std::int64_t i) const { return samples_.col(static_cast<Eigen::Index>(i)); }

    /// ‖f_i‖_X for every cell.
    std::vector<double> cell_norms() const;

    /// First and last cell carrying a nonzero value.
    std::optional<std::pair<std::int64_t, std::int64_t>> support_cells() const;
    bool is_zero() const { return !support_cells().has_value(); }
    bool cell_is_zero(std::int64_t i) const;

    /// Zero-extended copy on a longer grid with the same resolution.
    StepFunction extended(std::int64_t cells) const;
    /// Same samples measured in another ℓ^r norm.
    StepFunction with_space(SpatialSpace space) const;

    /// Value at time t (zero outside (0, T]).
    Eigen::VectorXd evaluate(double t) const;

    StepFunction operator+(const StepFunction& other) const;
    StepFunction operator-(const StepFunction& other) const;
    StepFunction operator-() const;
    StepFunction scaled(double factor) const;

private:
    TimeGrid grid_;
    SpatialSpace space_;
    Eigen::MatrixXd samples_;
};

/// (Σ_i h ‖f_i‖^p)^{1/p}, or max_i ‖f_i‖ for p = inf. Throws for p < 1.
double bochner_norm(const StepFunction& f, double p);

/// sup_λ λ |{‖f‖ > λ}|, attained in the left limit at one of the finitely many values of ‖f‖.
double weak_l1_norm(const StepFunction& f);

/// |{t : ‖f(t)‖ > λ}|. Throws for λ <= 0.
double distribution_function(const StepFunction& f, double lambda);

/// Points (λ, λ·|{‖f‖ >= λ}|) at every distinct nonzero value λ of ‖f‖, ascending in λ.
std::vector<std::pair<double, double>> weak_profile(const StepFunction& f);

/// Time-integrated Euclidean pairing ∫ f(t)·g(t) dt.
double pairing(const StepFunction& f, const StepFunction& g);

} // namespace vcz

#include "vcz/timegrid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace vcz {

double lr_norm(const Eigen::Ref<const Eigen::VectorXd>& v, double r)
{
    if (!(r >= 1.0)) {
        throw std::invalid_argument("lr_norm: exponent must be >= 1, got " + std::to_string(r));
    }
    if (v.size() == 0) {
        return 0.0;
    }
    if (std::isinf(r)) {
        return v.cwiseAbs().maxCoeff();
    }
    if (r == 1.0) {
        return v.cwiseAbs().sum();
    }
    if (r == 2.0) {
        return v.norm();
    }
    // Scale by the largest entry so |x|^r neither overflows nor underflows.
    const double scale = v.cwiseAbs().maxCoeff();
    if (scale == 0.0) {
        return 0.0;
    }
    double acc = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        acc += std::pow(std::abs(v[i]) / scale, r);
    }
    return scale * std::pow(acc, 1.0 / r);
}

SpatialSpace::SpatialSpace(int dimension, double exponent)
    : dimension_(dimension), exponent_(exponent)
{
    if (dimension < 1) {
        throw std::invalid_argument("SpatialSpace: dimension must be positive");
    }
    if (!(exponent > 1.0)) {
        throw std::invalid_argument("SpatialSpace: exponent r must lie in (1, inf], got "
                                    + std::to_string(exponent));
    }
}

double SpatialSpace::norm(const Eigen::Ref<const Eigen::VectorXd>& v) const
{
    return lr_norm(v, exponent_);
}

TimeGrid::TimeGrid(int level, std::int64_t cells)
    : level_(level), cells_(cells), width_(std::ldexp(1.0, level))
{
    if (cells < 1) {
        throw std::invalid_argument("TimeGrid: cell count must be positive");
    }
    if (level < -60 || level > 60) {
        throw std::invalid_argument("TimeGrid: level out of range");
    }
}

TimeGrid TimeGrid::unit_horizon(std::int64_t cells)
{
    if (cells < 1 || !std::has_single_bit(static_cast<std::uint64_t>(cells))) {
        throw std::invalid_argument("TimeGrid::unit_horizon: cell count must be a power of two");
    }
    return TimeGrid(-std::countr_zero(static_cast<std::uint64_t>(cells)), cells);
}

StepFunction::StepFunction(TimeGrid grid, SpatialSpace space)
    : grid_(grid), space_(space), samples_(Eigen::MatrixXd::Zero(space.dimension(), grid.cells()))
{
}

StepFunction::StepFunction(TimeGrid grid, SpatialSpace space, Eigen::MatrixXd samples)
    : grid_(grid), space_(space), samples_(std::move(samples))
{
    if (samples_.rows() != space_.dimension() || samples_.cols() != grid_.cells()) {
        throw std::invalid_argument("StepFunction: samples must be m x N (got "
                                    + std::to_string(samples_.rows()) + "x"
                                    + std::to_string(samples_.cols()) + ")");
    }
    if (!samples_.allFinite()) {
        throw std::invalid_argument("StepFunction: samples must be finite");
    }
}

std::vector<double> StepFunction::cell_norms() const
{
    std::vector<double> out(static_cast<std::size_t>(cells()));
    for (std::int64_t i = 0; i < cells(); ++i) {
        out[static_cast<std::size_t>(i)] = space_.norm(value(i));
    }
    return out;
}

bool StepFunction::cell_is_zero(std::int64_t i) const
{
    return (value(i).array() == 0.0).all();
}

std::optional<std::pair<std::int64_t, std::int64_t>> StepFunction::support_cells() const
{
    std::int64_t first = -1;
    std::int64_t last = -1;
    for (std::int64_t i = 0; i < cells(); ++i) {
        if (!cell_is_zero(i)) {
            if (first < 0) {
                first = i;
            }
            last = i;
        }
    }
    if (first < 0) {
        return std::nullopt;
    }
    return std::make_pair(first, last);
}

StepFunction StepFunction::extended(std::int64_t cells) const
{
    if (cells < this->cells()) {
        throw std::invalid_argument("StepFunction::extended: cannot shrink a grid");
    }
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dimension(), cells);
    out.leftCols(this->cells()) = samples_;
    return {grid_.resized(cells), space_, std::move(out)};
}

StepFunction StepFunction::with_space(SpatialSpace space) const
{
    if (space.dimension() != dimension()) {
        throw std::invalid_argument("StepFunction::with_space: dimension mismatch");
    }
    return {grid_, space, samples_};
}

Eigen::VectorXd StepFunction::evaluate(double t) const
{
    if (!(t > 0.0) || t > grid_.horizon()) {
        return Eigen::VectorXd::Zero(dimension());
    }
    auto i = static_cast<std::int64_t>(std::ceil(t / grid_.cell_width())) - 1;
    i = std::clamp<std::int64_t>(i, 0, cells() - 1);
    return value(i);
}

namespace {
void require_compatible(const StepFunction& a, const StepFunction& b)
{
    if (!(a.grid() == b.grid()) || a.dimension() != b.dimension()) {
        throw std::invalid_argument("StepFunction: incompatible grids or dimensions");
    }
}
} // namespace

StepFunction StepFunction::operator+(const StepFunction& other) const
{
    require_compatible(*this, other);
    return {grid_, space_, samples_ + other.samples_};
}

StepFunction StepFunction::operator-(const StepFunction& other) const
{
    require_compatible(*this, other);
    return {grid_, space_, samples_ - other.samples_};
}

StepFunction StepFunction::operator-() const { return {grid_, space_, -samples_}; }

StepFunction StepFunction::scaled(double factor) const { return {grid_, space_, factor * samples_}; }

double bochner_norm(const StepFunction& f, double p)
{
    if (!(p >= 1.0)) {
        throw std::invalid_argument("bochner_norm: p must be >= 1, got " + std::to_string(p));
    }
    const auto norms = f.cell_norms();
    if (norms.empty()) {
        return 0.0;
    }
    const double sup = *std::max_element(norms.begin(), norms.end());
    if (std::isinf(p)) {
        return sup;
    }
    if (sup == 0.0) {
        return 0.0;
    }
    double acc = 0.0;
    for (double v : norms) {
        acc += std::pow(v / sup, p);
    }
    return sup * std::pow(acc * f.grid().cell_width(), 1.0 / p);
}

std::vector<std::pair<double, double>> weak_profile(const StepFunction& f)
{
    auto norms = f.cell_norms();
    std::sort(norms.begin(), norms.end(), std::greater<>());
    const double h = f.grid().cell_width();
    std::vector<std::pair<double, double>> out;
    std::size_t i = 0;
    while (i < norms.size() && norms[i] > 0.0) {
        const double v = norms[i];
        while (i < norms.size() && norms[i] == v) {
            ++i;
        }
        // Left-limit: measure of {‖f‖ >= v}.
        out.emplace_back(v, v * h * static_cast<double>(i));
    }
    std::reverse(out.begin(), out.end());
    return out;
}

double weak_l1_norm(const StepFunction& f)
{
    double best = 0.0;
    for (const auto& [value, product] : weak_profile(f)) {
        best = std::max(best, product);
    }
    return best;
}

double distribution_function(const StepFunction& f, double lambda)
{
    if (!(lambda > 0.0)) {
        throw std::invalid_argument("distribution_function: lambda must be positive");
    }
    std::int64_t count = 0;
    for (double v : f.cell_norms()) {
        if (v > lambda) {
            ++count;
        }
    }
    return f.grid().cell_width() * static_cast<double>(count);
}

double pairing(const StepFunction& f, const StepFunction& g)
{
    require_compatible(f, g);
    return f.grid().cell_width() * f.samples().cwiseProduct(g.samples()).sum();
}

} // namespace vcz

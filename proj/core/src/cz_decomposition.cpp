#include "vcz/cz_decomposition.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace vcz {

namespace {

// First grid cell and cell count covered by a cube at level >= grid level.
std::pair<std::int64_t, std::int64_t> cell_span(const TimeGrid& grid, const DyadicCube& q)
{
    const int rel = q.level() - grid.level();
    if (rel < 0) {
        throw std::invalid_argument("cube " + to_string(q) + " is finer than the grid");
    }
    if (rel >= 62) {
        throw std::invalid_argument("cube " + to_string(q) + " is too coarse for the grid");
    }
    const std::int64_t width = std::int64_t{1} << rel;
    return {q.index() * width, width};
}

// Sums of ‖f_i‖ over every dyadic block, level 0 = grid cells, padded to a power of two.
class NormPyramid {
public:
    explicit NormPyramid(const std::vector<double>& cell_norms)
    {
        const auto padded = std::bit_ceil(std::max<std::size_t>(cell_norms.size(), 1));
        std::vector<double> base(padded, 0.0);
        std::copy(cell_norms.begin(), cell_norms.end(), base.begin());
        levels_.push_back(std::move(base));
        while (levels_.back().size() > 1) {
            const auto& below = levels_.back();
            std::vector<double> above(below.size() / 2);
            for (std::size_t k = 0; k < above.size(); ++k) {
                above[k] = below[2 * k] + below[2 * k + 1];
            }
            levels_.push_back(std::move(above));
        }
    }

    int top() const noexcept { return static_cast<int>(levels_.size()) - 1; }

    // Number of cubes at relative level `rel` that meet the padded grid.
    std::int64_t width(int rel) const noexcept
    {
        return rel <= top() ? static_cast<std::int64_t>(levels_[static_cast<std::size_t>(rel)].size()) : 1;
    }

    double sum(int rel, std::int64_t k) const noexcept
    {
        if (rel <= top()) {
            const auto& row = levels_[static_cast<std::size_t>(rel)];
            return k < static_cast<std::int64_t>(row.size()) ? row[static_cast<std::size_t>(k)] : 0.0;
        }
        return k == 0 ? levels_.back().front() : 0.0;
    }

private:
    std::vector<std::vector<double>> levels_;
};

bool within(double lhs, double rhs, double tol)
{
    return lhs <= rhs + tol * std::max(1.0, std::abs(rhs));
}

} // namespace

CubeAverage cube_average(const StepFunction& f, const DyadicCube& q)
{
    const auto [first, width] = cell_span(f.grid(), q);
    CubeAverage out{Eigen::VectorXd::Zero(f.dimension()), 0.0};
    const std::int64_t last = std::min(first + width, f.cells());
    double norm_sum = 0.0;
    for (std::int64_t i = first; i < last; ++i) {
        out.vector += f.value(i);
        norm_sum += f.space().norm(f.value(i));
    }
    out.vector /= static_cast<double>(width);
    out.norm = norm_sum / static_cast<double>(width);
    return out;
}

StepFunction CZDecomposition::bad_sum() const
{
    StepFunction acc(good.grid(), good.space());
    for (const auto& b : bad) {
        acc = acc + b.part;
    }
    return acc;
}

CZDecomposition decompose(const StepFunction& f, double alpha)
{
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw std::invalid_argument("decompose: alpha must be a positive finite number");
    }
    const TimeGrid& grid = f.grid();
    const NormPyramid pyramid(f.cell_norms());
    auto bad = [&](int rel, std::int64_t k) {
        return pyramid.sum(rel, k) > alpha * std::ldexp(1.0, rel);
    };

    // Lowest level at which every cube meeting the support is good. Goodness is inherited
    // upwards (a parent's average is the mean of its children's), so the descent from here
    // selects exactly the maximal bad cubes.
    int root = 0;
    for (;; ++root) {
        if (grid.level() + root > 60) {
            throw std::invalid_argument("decompose: alpha too small for the representable cube range");
        }
        bool all_good = true;
        for (std::int64_t k = 0; k < pyramid.width(root) && all_good; ++k) {
            all_good = !bad(root, k);
        }
        if (all_good) {
            break;
        }
    }

    std::vector<std::pair<int, std::int64_t>> selected;
    std::vector<std::pair<int, std::int64_t>> stack;
    for (std::int64_t k = pyramid.width(root) - 1; k >= 0; --k) {
        stack.emplace_back(root, k);
    }
    while (!stack.empty()) {
        const auto [rel, k] = stack.back();
        stack.pop_back();
        if (bad(rel, k)) {
            selected.emplace_back(rel, k);
        } else if (rel > 0 && pyramid.sum(rel, k) > 0.0) {
            stack.emplace_back(rel - 1, 2 * k + 1);
            stack.emplace_back(rel - 1, 2 * k);
        }
    }

    std::int64_t cells = f.cells();
    for (const auto& [rel, k] : selected) {
        cells = std::max(cells, (k + 1) << rel);
    }
    const StepFunction fe = f.extended(cells);
    Eigen::MatrixXd good = fe.samples();

    CZDecomposition out{alpha, StepFunction(fe.grid(), f.space()), {}};
    out.bad.reserve(selected.size());
    for (const auto& [rel, k] : selected) {
        const DyadicCube cube(grid.level() + rel, k);
        const std::int64_t first = k << rel;
        const std::int64_t width = std::int64_t{1} << rel;
        const Eigen::VectorXd avg =
            fe.samples().middleCols(first, width).rowwise().sum() / static_cast<double>(width);
        Eigen::MatrixXd part = Eigen::MatrixXd::Zero(f.dimension(), cells);
        part.middleCols(first, width) = fe.samples().middleCols(first, width).colwise() - avg;
        good.middleCols(first, width).colwise() = avg;
        out.bad.push_back(BadPart{cube, StepFunction(fe.grid(), f.space(), std::move(part)), avg,
                                  pyramid.sum(rel, k) / static_cast<double>(width)});
    }
    out.good = StepFunction(fe.grid(), f.space(), std::move(good));
    return out;
}

bool PropertyReport::passed() const
{
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

const PropertyCheck* PropertyReport::first_failure() const
{
    for (const auto& c : checks) {
        if (!c.passed) {
            return &c;
        }
    }
    return nullptr;
}

PropertyReport verify(const CZDecomposition& d, const StepFunction& f, double alpha, double r,
                      double tolerance)
{
    if (!(r >= 1.0) || !std::isfinite(r)) {
        throw std::invalid_argument("verify: r must lie in [1, inf)");
    }
    PropertyReport report;
    auto add = [&](std::string name, bool ok, double lhs, double rhs,
                   std::optional<DyadicCube> witness = std::nullopt, std::string detail = {}) {
        report.checks.push_back({std::move(name), ok, lhs, rhs, witness, std::move(detail)});
    };

    const std::int64_t cells = std::max(f.cells(), d.good.cells());
    const StepFunction fe = f.extended(cells);
    const StepFunction g = d.good.extended(cells);
    const double h = f.grid().cell_width();
    const bool grid_ok = d.good.grid().level() == f.grid().level()
                         && std::all_of(d.bad.begin(), d.bad.end(), [&](const BadPart& b) {
                                return b.part.grid() == d.good.grid();
                            });
    if (!grid_ok) {
        add("grid", false, 0.0, 0.0, std::nullopt, "parts do not share the decomposition grid");
        return report;
    }

    // Reconstruction.
    {
        Eigen::MatrixXd sum = g.samples();
        for (const auto& b : d.bad) {
            sum.leftCols(b.part.cells()) += b.part.samples();
        }
        const double err = (sum - fe.samples()).cwiseAbs().maxCoeff();
        const double scale = fe.samples().size() ? fe.samples().cwiseAbs().maxCoeff() : 0.0;
        add("reconstruction", within(err, 0.0, tolerance * std::max(1.0, scale)), err, 0.0);
    }

    // (1)
    const double f_l1 = bochner_norm(fe, 1.0);
    const double g_l1 = bochner_norm(g, 1.0);
    add("(1) L1 good part", within(g_l1, f_l1, tolerance), g_l1, f_l1);
    const double g_inf = bochner_norm(g, kInfinity);
    add("(1) Linf good part", within(g_inf, 2.0 * alpha, tolerance), g_inf, 2.0 * alpha);

    // (2)
    {
        bool ok = true;
        std::optional<DyadicCube> witness;
        for (std::size_t i = 0; i < d.bad.size() && ok; ++i) {
            for (std::size_t j = i + 1; j < d.bad.size() && ok; ++j) {
                if (!d.bad[i].cube.disjoint(d.bad[j].cube)) {
                    ok = false;
                    witness = d.bad[j].cube;
                }
            }
        }
        add("(2) disjoint cubes", ok, ok ? 0.0 : 1.0, 0.0, witness);
    }
    const bool disjoint = report.checks.back().passed;
    {
        bool ok = true;
        std::optional<DyadicCube> witness;
        for (const auto& b : d.bad) {
            const auto [first, width] = cell_span(d.good.grid(), b.cube);
            for (std::int64_t i = 0; i < b.part.cells() && ok; ++i) {
                if ((i < first || i >= first + width) && !b.part.cell_is_zero(i)) {
                    ok = false;
                    witness = b.cube;
                }
            }
        }
        add("(2) supported in cube", ok, ok ? 0.0 : 1.0, 0.0, witness);
    }

    // (3)
    {
        bool mean_ok = true;
        bool mass_ok = true;
        double worst_mean = 0.0;
        double worst_mass_ratio = 0.0;
        std::optional<DyadicCube> mean_witness;
        std::optional<DyadicCube> mass_witness;
        double mass_lhs = 0.0;
        double mass_rhs = 0.0;
        for (const auto& b : d.bad) {
            const auto [first, width] = cell_span(d.good.grid(), b.cube);
            const Eigen::VectorXd integral = h * b.part.samples().middleCols(first, width).rowwise().sum();
            double mass = 0.0;
            for (std::int64_t i = first; i < first + width; ++i) {
                mass += h * b.part.space().norm(b.part.value(i));
            }
            const double mean = integral.size() ? integral.cwiseAbs().maxCoeff() : 0.0;
            worst_mean = std::max(worst_mean, mean);
            if (mean_ok && !within(mean, 0.0, tolerance * std::max(1.0, mass))) {
                mean_ok = false;
                mean_witness = b.cube;
            }
            const double cap = 4.0 * alpha * b.cube.measure();
            if (mass / cap > worst_mass_ratio) {
                worst_mass_ratio = mass / cap;
                mass_lhs = mass;
                mass_rhs = cap;
            }
            if (mass_ok && !within(mass, cap, tolerance)) {
                mass_ok = false;
                mass_witness = b.cube;
                mass_lhs = mass;
                mass_rhs = cap;
            }
        }
        add("(3) mean zero", mean_ok, worst_mean, 0.0, mean_witness);
        add("(3) L1 bad part", mass_ok, mass_lhs, mass_rhs, mass_witness);
    }

    // (4)
    {
        double total = 0.0;
        for (const auto& b : d.bad) {
            total += b.cube.measure();
        }
        add("(4) total measure", within(total, f_l1 / alpha, tolerance), total, f_l1 / alpha);
    }

    // (5)
    {
        const std::size_t n = d.bad.size();
        std::vector<double> lhs(n, 0.0);
        std::vector<double> rhs(n, 0.0);
        const double factor = std::pow(2.0, r);
        for (std::size_t j = 0; j < n; ++j) {
            const auto [first, width] = cell_span(d.good.grid(), d.bad[j].cube);
            for (std::int64_t i = 0; i < d.bad[j].part.cells(); ++i) {
                lhs[j] += h * std::pow(d.bad[j].part.space().norm(d.bad[j].part.value(i)), r);
            }
            for (std::int64_t i = first; i < first + width; ++i) {
                rhs[j] += h * std::pow(fe.space().norm(fe.value(i)), r);
            }
        }
        bool ok = true;
        double worst_l = 0.0;
        double worst_r = 0.0;
        std::optional<DyadicCube> witness;
        for (std::size_t k = 0; k < n && ok; ++k) {
            double acc_l = 0.0;
            double acc_r = 0.0;
            Eigen::MatrixXd partial;
            if (!disjoint) {
                partial = Eigen::MatrixXd::Zero(fe.dimension(), cells);
            }
            for (std::size_t l = k; l < n; ++l) {
                acc_r += rhs[l];
                if (disjoint) {
                    acc_l += lhs[l];
                } else {
                    // Overlapping parts: integrate the actual partial sum.
                    partial.leftCols(d.bad[l].part.cells()) += d.bad[l].part.samples();
                    acc_l = 0.0;
                    for (Eigen::Index i = 0; i < partial.cols(); ++i) {
                        acc_l += h * std::pow(fe.space().norm(partial.col(i)), r);
                    }
                }
                if (acc_l > worst_l) {
                    worst_l = acc_l;
                    worst_r = factor * acc_r;
                }
                if (!within(acc_l, factor * acc_r, tolerance)) {
                    ok = false;
                    witness = d.bad[l].cube;
                    worst_l = acc_l;
                    worst_r = factor * acc_r;
                    break;
                }
            }
        }
        add("(5) Lr partial sums", ok, worst_l, worst_r, witness);
    }

    // Selection bound alpha < avg ‖f‖ <= 2 alpha.
    {
        bool ok = true;
        std::optional<DyadicCube> witness;
        double worst = 0.0;
        for (const auto& b : d.bad) {
            const double avg = cube_average(fe, b.cube).norm;
            worst = std::max(worst, avg);
            // Pairwise and direct sums may round a tie at alpha either way.
            if (!(avg > alpha * (1.0 - tolerance)) || !within(avg, 2.0 * alpha, tolerance)) {
                ok = false;
                witness = b.cube;
                worst = avg;
                break;
            }
        }
        add("selection bound", ok, worst, 2.0 * alpha, witness);
    }
    return report;
}

} // namespace vcz

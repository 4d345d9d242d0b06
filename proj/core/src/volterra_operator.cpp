#include "vcz/volterra_operator.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace vcz {

namespace {

double cell_distance(const TimeGrid& grid, std::int64_t i, double t)
{
    return std::max({grid.left(i) - t, t - grid.right(i), 0.0});
}

void require_off_support(const StepFunction& f, double t, const char* who)
{
    const double h = f.grid().cell_width();
    for (std::int64_t i = 0; i < f.cells(); ++i) {
        if (!f.cell_is_zero(i) && cell_distance(f.grid(), i, t) < h * (1.0 - 1e-12)) {
            std::ostringstream os;
            os << who << ": t = " << t << " lies within one cell of the support of f (cell " << i << ")";
            throw std::invalid_argument(os.str());
        }
    }
}

void require_dimension(const VolterraKernel& kernel, const StepFunction& f, const char* who)
{
    if (kernel.domain().dimension() != f.dimension()) {
        throw std::invalid_argument(std::string(who) + ": kernel and function dimensions differ");
    }
}

} // namespace

Eigen::VectorXd apply_off_support(const VolterraKernel& kernel, const StepFunction& f, double t,
                                  const QuadratureOptions& options)
{
    require_dimension(kernel, f, "apply_off_support");
    require_off_support(f, t, "apply_off_support");
    Eigen::VectorXd out = Eigen::VectorXd::Zero(kernel.range().dimension());
    for (std::int64_t i = 0; i < f.cells(); ++i) {
        const double right = f.grid().right(i);
        if (right >= t) {
            break;
        }
        if (f.cell_is_zero(i)) {
            continue;
        }
        const Eigen::VectorXd v = f.value(i);
        out += integrate([&](double s) { return Eigen::VectorXd(kernel.apply(t, s, v)); }, f.grid().left(i),
                         right, options);
    }
    return out;
}

Eigen::VectorXd apply_bad_part(const VolterraKernel& kernel, const StepFunction& b, const DyadicCube& cube,
                               double t, const QuadratureOptions& options)
{
    require_dimension(kernel, b, "apply_bad_part");
    const auto& grid = b.grid();
    Eigen::VectorXd integral = Eigen::VectorXd::Zero(b.dimension());
    double mass = 0.0;
    for (std::int64_t i = 0; i < b.cells(); ++i) {
        if (b.cell_is_zero(i)) {
            continue;
        }
        if (grid.left(i) < cube.left() || grid.right(i) > cube.right()) {
            throw std::invalid_argument("apply_bad_part: b is not supported in the cube");
        }
        integral += grid.cell_width() * b.value(i);
        mass += grid.cell_width() * b.value(i).cwiseAbs().maxCoeff();
    }
    if (integral.cwiseAbs().maxCoeff() > 1e-10 * mass) {
        throw std::invalid_argument("apply_bad_part: b does not have mean zero");
    }
    if (cube.expand().contains(t)) {
        throw std::invalid_argument("apply_bad_part: t lies inside the expanded cube");
    }
    const double center = cube.center();
    Eigen::VectorXd out = Eigen::VectorXd::Zero(kernel.range().dimension());
    if (t < center) {
        return out;
    }
    const Eigen::MatrixXd at_center = kernel(t, center);
    for (std::int64_t i = 0; i < b.cells(); ++i) {
        if (b.cell_is_zero(i)) {
            continue;
        }
        const Eigen::VectorXd v = b.value(i);
        const Eigen::VectorXd shift = at_center * v;
        out += integrate([&](double s) { return Eigen::VectorXd(kernel.apply(t, s, v) - shift); }, grid.left(i),
                         grid.right(i), options);
    }
    return out;
}

Eigen::VectorXd apply_bad_part(const VolterraKernel& kernel, const BadPart& part, double t,
                               const QuadratureOptions& options)
{
    return apply_bad_part(kernel, part.part, part.cube, t, options);
}

Eigen::VectorXd transpose_apply(const VolterraKernel& kernel, const StepFunction& f, double t,
                                const QuadratureOptions& options)
{
    if (kernel.range().dimension() != f.dimension()) {
        throw std::invalid_argument("transpose_apply: kernel and function dimensions differ");
    }
    if (!(t > 0.0)) {
        throw std::invalid_argument("transpose_apply: t must be positive");
    }
    require_off_support(f, t, "transpose_apply");
    Eigen::VectorXd out = Eigen::VectorXd::Zero(kernel.domain().dimension());
    for (std::int64_t i = 0; i < f.cells(); ++i) {
        const double left = f.grid().left(i);
        if (left <= t || f.cell_is_zero(i)) {
            continue;
        }
        const Eigen::VectorXd v = f.value(i);
        out += integrate([&](double s) { return Eigen::VectorXd(kernel(s, t).transpose() * v); }, left,
                         f.grid().right(i), options);
    }
    return out;
}

AdjointCheck adjoint_pairings(const VolterraKernel& kernel, const StepFunction& g, const StepFunction& f,
                              const QuadratureOptions& options)
{
    if (g.grid().level() != f.grid().level()) {
        throw std::invalid_argument("adjoint_check: g and f must share a cell width");
    }
    for (std::int64_t j = 0; j < g.cells(); ++j) {
        if (g.cell_is_zero(j)) {
            continue;
        }
        for (std::int64_t i = 0; i < f.cells(); ++i) {
            if (!f.cell_is_zero(i) && std::abs(i - j) <= 1) {
                throw std::invalid_argument("adjoint_check: supports of g and f are not separated by a cell");
            }
        }
    }
    AdjointCheck out;
    for (std::int64_t i = 0; i < f.cells(); ++i) {
        if (f.cell_is_zero(i)) {
            continue;
        }
        const Eigen::VectorXd fi = f.value(i);
        out.forward += integrate([&](double t) { return fi.dot(apply_off_support(kernel, g, t, options)); },
                                 f.grid().left(i), f.grid().right(i), options);
    }
    for (std::int64_t j = 0; j < g.cells(); ++j) {
        if (g.cell_is_zero(j)) {
            continue;
        }
        const Eigen::VectorXd gj = g.value(j);
        out.transpose += integrate([&](double t) { return gj.dot(transpose_apply(kernel, f, t, options)); },
                                   g.grid().left(j), g.grid().right(j), options);
    }
    return out;
}

double adjoint_check(const VolterraKernel& kernel, const StepFunction& g, const StepFunction& f)
{
    return adjoint_pairings(kernel, g, f).discrepancy();
}

ParabolicSolution solve_parabolic(const Semigroup& semigroup, const StepFunction& f)
{
    const auto m = semigroup.size();
    if (f.dimension() != m) {
        throw std::invalid_argument("solve_parabolic: f has dimension " + std::to_string(f.dimension())
                                    + ", generator has " + std::to_string(m));
    }
    const double h = f.grid().cell_width();
    const auto n = static_cast<Eigen::Index>(f.cells());
    const auto step = semigroup.step(h);
    const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(m, m);
    const Eigen::MatrixXd forcing = h * step.phi1;
    const Eigen::MatrixXd decay = (identity - step.propagator) / h;
    const Eigen::MatrixXd residual = identity - step.phi1;

    Eigen::MatrixXd nodes = Eigen::MatrixXd::Zero(m, n + 1);
    Eigen::MatrixXd au(m, n);
    Eigen::MatrixXd du(m, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto fi = f.samples().col(i);
        nodes.col(i + 1) = step.propagator * nodes.col(i) + forcing * fi;
        au.col(i) = decay * nodes.col(i) + residual * fi;
        du.col(i) = (nodes.col(i + 1) - nodes.col(i)) / h;
    }

    bool singular = false;
    if (semigroup.symmetric()) {
        const auto& ev = semigroup.eigenvalues();
        singular = ev.cwiseAbs().minCoeff() <= 1e-12 * std::max(1.0, ev.cwiseAbs().maxCoeff());
    } else {
        Eigen::FullPivLU<Eigen::MatrixXd> lu(semigroup.generator());
        lu.setThreshold(1e-12);
        singular = lu.rank() < m;
    }
    return ParabolicSolution{StepFunction(f.grid(), f.space(), nodes.rightCols(n)),
                             StepFunction(f.grid(), f.space(), std::move(du)),
                             StepFunction(f.grid(), f.space(), std::move(au)), std::move(nodes), singular};
}

ParabolicSolution solve_parabolic(const GeneratorSpec& spec, const StepFunction& f)
{
    return solve_parabolic(Semigroup(assemble_generator(spec)), f);
}

} // namespace vcz

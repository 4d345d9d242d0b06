#include "vcz/operator_norm.hpp"

#include "vcz/random.hpp"
#include "vcz/timegrid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vcz {

namespace {

void require_valid(const Eigen::MatrixXd& a, double r)
{
    if (!(r >= 1.0)) {
        throw std::invalid_argument("induced_operator_norm: r must be >= 1");
    }
    if (!a.allFinite()) {
        throw std::invalid_argument("induced_operator_norm: matrix entries must be finite");
    }
}

// Unit vector in ℓ^{p'} norming y in ℓ^p: <dual(y), y> = ‖y‖_p.
Eigen::VectorXd dual_vector(const Eigen::VectorXd& y, double p)
{
    const double n = lr_norm(y, p);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(y.size());
    if (n == 0.0) {
        return out;
    }
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        const double s = y[i] / n;
        out[i] = std::copysign(std::pow(std::abs(s), p - 1.0), s);
    }
    return out;
}

double ratio(const Eigen::MatrixXd& a, const Eigen::VectorXd& x, double r)
{
    const double nx = lr_norm(x, r);
    return nx == 0.0 ? 0.0 : lr_norm(a * x, r) / nx;
}

double ascend(const Eigen::MatrixXd& a, Eigen::VectorXd x, double r)
{
    const double conjugate = r / (r - 1.0);
    double best = ratio(a, x, r);
    for (int it = 0; it < 200; ++it) {
        const Eigen::VectorXd z = a.transpose() * dual_vector(a * x, r);
        if (lr_norm(z, conjugate) == 0.0) {
            break;
        }
        x = dual_vector(z, conjugate);
        const double next = ratio(a, x, r);
        const bool stalled = next <= best * (1.0 + 1e-15);
        best = std::max(best, next);
        if (stalled) {
            break;
        }
    }
    return best;
}

} // namespace

double max_column_sum(const Eigen::MatrixXd& a)
{
    return a.size() == 0 ? 0.0 : a.cwiseAbs().colwise().sum().maxCoeff();
}

double max_row_sum(const Eigen::MatrixXd& a)
{
    return a.size() == 0 ? 0.0 : a.cwiseAbs().rowwise().sum().maxCoeff();
}

double spectral_norm(const Eigen::MatrixXd& a)
{
    if (a.size() == 0) {
        return 0.0;
    }
    Eigen::BDCSVD<Eigen::MatrixXd> svd(a);
    return svd.singularValues()(0);
}

double interpolation_upper_bound(const Eigen::MatrixXd& a, double r)
{
    require_valid(a, r);
    const double one = max_column_sum(a);
    const double inf = max_row_sum(a);
    if (std::isinf(r)) {
        return inf;
    }
    if (one == 0.0 || inf == 0.0) {
        return 0.0;
    }
    return std::pow(one, 1.0 / r) * std::pow(inf, 1.0 - 1.0 / r);
}

double induced_norm_upper(const Eigen::MatrixXd& a, double r)
{
    require_valid(a, r);
    if (r == 1.0) {
        return max_column_sum(a);
    }
    if (r == 2.0) {
        return spectral_norm(a);
    }
    if (std::isinf(r)) {
        return max_row_sum(a);
    }
    return interpolation_upper_bound(a, r);
}

NormBounds induced_operator_norm(const Eigen::MatrixXd& a, double r, std::uint64_t seed)
{
    require_valid(a, r);
    if (r == 1.0 || r == 2.0 || std::isinf(r)) {
        const double v = induced_norm_upper(a, r);
        return {v, v};
    }
    const double upper = interpolation_upper_bound(a, r);
    if (upper == 0.0) {
        return {0.0, 0.0};
    }

    const auto n = a.cols();
    double lower = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        lower = std::max(lower, ascend(a, Eigen::VectorXd::Unit(n, j), r));
    }
    lower = std::max(lower, ascend(a, Eigen::VectorXd::Ones(n), r));
    Rng rng(seed);
    for (int trial = 0; trial < 16; ++trial) {
        Eigen::VectorXd x(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            x[i] = rng.normal();
        }
        lower = std::max(lower, ascend(a, x, r));
    }
    // Rounding in the ascent can overshoot a tight upper bound by a few ulps.
    if (lower > upper && lower <= upper * (1.0 + 1e-12)) {
        lower = upper;
    }
    return {lower, upper};
}

} // namespace vcz

#include "vcz/kernel_validators.hpp"

#include "vcz/operator_norm.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace vcz {

namespace {

constexpr double kGolden = 0.6180339887498949;

double norm_of(const VolterraKernel& kernel, const Eigen::MatrixXd& k)
{
    return induced_norm_upper(k, kernel.range().exponent());
}

// Grid of separations 2^j (1 + i/ppo); every sample has a short binary mantissa.
std::vector<double> separation_grid(const SamplingPlan& plan)
{
    std::vector<double> out;
    for (int j = plan.min_log2; j < plan.max_log2; ++j) {
        for (int i = 0; i < plan.points_per_octave; ++i) {
            out.push_back(std::ldexp(1.0 + static_cast<double>(i) / plan.points_per_octave, j));
        }
    }
    out.push_back(std::ldexp(1.0, plan.max_log2));
    return out;
}

// Maximizes f on [lo, hi] (log scale): dense sweep, then golden section around the best sample.
double refine_max(const std::function<double(double)>& f, double lo, double hi)
{
    constexpr int dense = 256;
    const double llo = std::log(lo);
    const double lhi = std::log(hi);
    const double step = (lhi - llo) / dense;
    double best = -kInfinity;
    int best_i = 0;
    for (int i = 0; i <= dense; ++i) {
        const double v = f(std::exp(llo + step * i));
        if (v > best) {
            best = v;
            best_i = i;
        }
    }
    double a = llo + step * std::max(best_i - 1, 0);
    double b = llo + step * std::min(best_i + 1, dense);
    double c = b - kGolden * (b - a);
    double d = a + kGolden * (b - a);
    double fc = f(std::exp(c));
    double fd = f(std::exp(d));
    for (int it = 0; it < 80 && (b - a) > 1e-14 * std::max(1.0, std::abs(b)); ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kGolden * (b - a);
            fc = f(std::exp(c));
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kGolden * (b - a);
            fd = f(std::exp(d));
        }
        best = std::max({best, fc, fd});
    }
    return best;
}

bool flat(const std::vector<double>& v)
{
    if (v.empty()) {
        return true;
    }
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi - *lo <= 1e-14 * std::max(std::abs(*hi), 1e-300);
}

// Sup over a separation grid of `quantity(separation, anchor)`, with refinement and edge checks.
ValidatorResult sampled_sup(const VolterraKernel& kernel, const SamplingPlan& plan,
                            const std::function<double(double, double)>& quantity)
{
    plan.validate();
    const auto grid = separation_grid(plan);
    std::vector<double> anchors = plan.anchors;
    if (kernel.info().convolution || anchors.empty()) {
        anchors = {anchors.empty() ? 1.0 : anchors.front()};
    }
    ValidatorResult out;
    std::vector<double> best(grid.size(), 0.0);
    std::vector<std::size_t> best_anchor(grid.size(), 0);
    for (std::size_t a = 0; a < anchors.size(); ++a) {
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double v = quantity(grid[i], anchors[a]);
            if (!std::isnan(v) && v > best[i]) {
                best[i] = v;
                best_anchor[i] = a;
            }
        }
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out.profile.emplace_back(grid[i], best[i]);
    }
    const auto arg = static_cast<std::size_t>(std::max_element(best.begin(), best.end()) - best.begin());
    out.estimate = best[arg];
    if (plan.refine && !flat(best) && arg > 0 && arg + 1 < grid.size()) {
        const double anchor = anchors[best_anchor[arg]];
        out.estimate = std::max(out.estimate,
                                refine_max([&](double sep) { return quantity(sep, anchor); },
                                           grid[arg - 1], grid[arg + 1]));
    }
    const auto edge = growth_at_edge(best);
    if (!edge.empty()) {
        out.diverged = true;
        out.divergence = edge == "low" ? "grows as the separation -> 0" : "grows as the separation -> inf";
    }
    return out;
}

enum class Variable { s, t };

ValidatorResult holder_sup(const VolterraKernel& kernel, const SamplingPlan& plan, Variable variable)
{
    plan.validate();
    const double sigma = kernel.info().holder_exponent;
    std::vector<double> ratios{2.0};
    for (int k = 1; k <= 2 * 20; ++k) {
        ratios.push_back(2.0 * std::exp2(0.5 * k));
    }
    std::vector<double> anchors = plan.anchors;
    if (kernel.info().convolution || anchors.empty()) {
        anchors = {anchors.empty() ? 1.0 : anchors.front()};
    }
    ValidatorResult out;
    std::vector<double> profile;
    for (int j = plan.min_log2; j <= plan.max_log2; ++j) {
        const double delta = std::ldexp(1.0, j);
        double best = 0.0;
        for (double anchor : anchors) {
            for (double rho : ratios) {
                for (double sign : {1.0, -1.0}) {
                    double v = 0.0;
                    if (variable == Variable::s) {
                        const double s0 = anchor + delta;
                        const double s = s0 + sign * delta;
                        const double t = s0 + rho * delta;
                        const Eigen::MatrixXd diff = kernel(t, s) - kernel(t, s0);
                        v = norm_of(kernel, diff) * std::pow(t - s0, 1.0 + sigma)
                            / std::pow(std::abs(s - s0), sigma);
                    } else {
                        const double s = anchor;
                        const double t0 = s + rho * delta;
                        const double t = t0 - sign * delta;
                        const Eigen::MatrixXd diff = kernel(t, s) - kernel(t0, s);
                        v = norm_of(kernel, diff) * std::pow(t0 - s, 1.0 + sigma)
                            / std::pow(std::abs(t - t0), sigma);
                    }
                    if (!std::isnan(v)) {
                        best = std::max(best, v);
                    }
                }
            }
        }
        out.profile.emplace_back(delta, best);
        profile.push_back(best);
    }
    out.estimate = *std::max_element(profile.begin(), profile.end());
    const auto edge = growth_at_edge(profile);
    if (!edge.empty()) {
        out.diverged = true;
        out.divergence = edge == "low" ? "grows as |s - s0| -> 0" : "grows as |s - s0| -> inf";
    }
    return out;
}

double holder_constant_for(const VolterraKernel& kernel, std::optional<double> supplied, Variable v,
                           bool& diverged)
{
    if (supplied) {
        return *supplied;
    }
    const auto res = v == Variable::s ? validate_holder_s(kernel) : validate_holder_t(kernel);
    diverged = res.diverged;
    return res.estimate;
}

// Truncation separation where (M1/σ) δ^σ / W^σ = tol/2.
double truncation_point(double m1, double sigma, double delta, double tol)
{
    return delta * std::pow(2.0 * m1 / (sigma * tol), 1.0 / sigma);
}

} // namespace

void SamplingPlan::validate() const
{
    if (points_per_octave < 1) {
        throw std::invalid_argument("SamplingPlan: points_per_octave must be positive");
    }
    if ((max_log2 - min_log2) * std::log10(2.0) < 6.0) {
        throw std::invalid_argument("SamplingPlan: the separation grid must cover at least six decades");
    }
    if (std::any_of(anchors.begin(), anchors.end(), [](double a) { return !(a > 0.0); })) {
        throw std::invalid_argument("SamplingPlan: anchors must be positive");
    }
}

std::string growth_at_edge(const std::vector<double>& values, int window, double min_growth)
{
    const auto n = static_cast<int>(values.size());
    if (n <= window) {
        return {};
    }
    // Growth only counts at the dominant edge; rounding noise far below the peak is ignored.
    const double peak = *std::max_element(values.begin(), values.end());
    auto grows = [&](auto at) {
        for (int i = 0; i < window; ++i) {
            if (!(at(i) >= at(i + 1) * (1.0 - 1e-12))) {
                return false;
            }
        }
        return at(0) > at(window) * (1.0 + min_growth) && at(0) >= 0.5 * peak && peak > 0.0;
    };
    if (grows([&](int i) { return values[static_cast<std::size_t>(i)]; })) {
        return "low";
    }
    if (grows([&](int i) { return values[static_cast<std::size_t>(n - 1 - i)]; })) {
        return "high";
    }
    return {};
}

double kernel_norm(const VolterraKernel& kernel, double tau)
{
    return norm_of(kernel, kernel(2.0 * tau, tau));
}

double kernel_derivative_norm(const VolterraKernel& kernel, double tau)
{
    return norm_of(kernel, kernel.time_derivative(tau));
}

ValidatorResult validate_size(const VolterraKernel& kernel, const SamplingPlan& plan)
{
    return sampled_sup(kernel, plan, [&](double tau, double anchor) {
        // Convolution kernels: (2τ, τ) keeps t - s exact.
        const double s = kernel.info().convolution ? tau : anchor;
        const double t = kernel.info().convolution ? 2.0 * tau : anchor + tau;
        return (t - s) * norm_of(kernel, kernel(t, s));
    });
}

ValidatorResult validate_time_derivative(const VolterraKernel& kernel, const SamplingPlan& plan)
{
    if (!kernel.info().convolution) {
        throw std::invalid_argument("validate_time_derivative: convolution kernels only");
    }
    return sampled_sup(kernel, plan,
                       [&](double tau, double) { return tau * tau * kernel_derivative_norm(kernel, tau); });
}

ValidatorResult validate_holder_s(const VolterraKernel& kernel, const SamplingPlan& plan)
{
    return holder_sup(kernel, plan, Variable::s);
}

ValidatorResult validate_holder_t(const VolterraKernel& kernel, const SamplingPlan& plan)
{
    return holder_sup(kernel, plan, Variable::t);
}

HormanderResult hormander_integral_s(const VolterraKernel& kernel, double s, double s0, double tol,
                                     std::optional<double> holder_constant)
{
    if (s == s0) {
        throw std::invalid_argument("hormander_integral_s: s and s0 must differ");
    }
    if (!(tol > 0.0)) {
        throw std::invalid_argument("hormander_integral_s: tol must be positive");
    }
    HormanderResult out;
    const double sigma = kernel.info().holder_exponent;
    out.holder_constant = holder_constant_for(kernel, holder_constant, Variable::s, out.diverged);
    if (out.diverged) {
        out.value = kInfinity;
        return out;
    }
    const double delta = std::abs(s - s0);
    if (out.holder_constant == 0.0) {
        out.truncation = 2.0 * delta;
        return out;
    }
    out.truncation = truncation_point(out.holder_constant, sigma, delta, tol);
    out.tail_bound = out.holder_constant / sigma * std::pow(delta / out.truncation, sigma);
    const QuadratureOptions options{8, 512, 1e-8};
    out.quadrature = integrate_geometric(
        [&](double u) {
            const double t = s0 + u;
            return norm_of(kernel, kernel(t, s) - kernel(t, s0));
        },
        2.0 * delta, std::max(out.truncation, 2.0 * delta), 2.0 * delta, options);
    out.value = out.quadrature + out.tail_bound;
    return out;
}

HormanderResult hormander_integral_t(const VolterraKernel& kernel, double t, double t0, double tol,
                                     std::optional<double> holder_constant)
{
    if (t == t0) {
        throw std::invalid_argument("hormander_integral_t: t and t0 must differ");
    }
    if (!(tol > 0.0)) {
        throw std::invalid_argument("hormander_integral_t: tol must be positive");
    }
    HormanderResult out;
    const double sigma = kernel.info().holder_exponent;
    out.holder_constant = holder_constant_for(kernel, holder_constant, Variable::t, out.diverged);
    if (out.diverged) {
        out.value = kInfinity;
        return out;
    }
    const double delta = std::abs(t - t0);
    if (t0 <= 2.0 * delta || out.holder_constant == 0.0) {
        out.truncation = 2.0 * delta;
        return out;
    }
    // w = t0 - s runs over [2δ, t0); beyond the truncation point the tail bound takes over.
    out.truncation = std::min(t0, truncation_point(out.holder_constant, sigma, delta, tol));
    if (out.truncation < t0) {
        out.tail_bound = out.holder_constant / sigma * std::pow(delta / out.truncation, sigma);
    }
    const QuadratureOptions options{8, 512, 1e-8};
    out.quadrature = integrate_geometric(
        [&](double w) {
            const double s = t0 - w;
            return norm_of(kernel, kernel(t, s) - kernel(t0, s));
        },
        2.0 * delta, out.truncation, 2.0 * delta, options);
    out.value = out.quadrature + out.tail_bound;
    return out;
}

ValidatorResult hormander_sup_s(const VolterraKernel& kernel, double tol)
{
    ValidatorResult out;
    const auto m1 = validate_holder_s(kernel);
    if (m1.diverged) {
        out.diverged = true;
        out.divergence = m1.divergence;
        out.estimate = kInfinity;
        return out;
    }
    for (double delta : {1e-3, 1.0, 1e3}) {
        double best = 0.0;
        for (double sign : {1.0, -1.0}) {
            const double s0 = 1.0 + delta;
            best = std::max(best, hormander_integral_s(kernel, s0 + sign * delta, s0, tol, m1.estimate).value);
        }
        out.profile.emplace_back(delta, best);
        out.estimate = std::max(out.estimate, best);
    }
    return out;
}

ValidatorResult hormander_sup_t(const VolterraKernel& kernel, double tol)
{
    ValidatorResult out;
    const auto m1 = validate_holder_t(kernel);
    if (m1.diverged) {
        out.diverged = true;
        out.divergence = m1.divergence;
        out.estimate = kInfinity;
        return out;
    }
    for (double delta : {1e-3, 1.0, 1e3}) {
        double best = 0.0;
        for (double sign : {1.0, -1.0}) {
            // Smallest t0 = 2^k δ past the truncation point: the whole half-line is covered
            // while t0 - s stays well conditioned relative to δ.
            const double reach = truncation_point(m1.estimate, kernel.info().holder_exponent, delta, tol);
            const double t0 = std::ldexp(delta, std::max(2, static_cast<int>(std::ceil(std::log2(reach / delta)))));
            best = std::max(best, hormander_integral_t(kernel, t0 + sign * delta, t0, tol, m1.estimate).value);
        }
        out.profile.emplace_back(delta, best);
        out.estimate = std::max(out.estimate, best);
    }
    return out;
}

double heat_kernel_derivative(double t, std::span<const double> x, int time_order,
                              std::span<const int> multi_index, HeatNormalization variant)
{
    if (multi_index.size() != x.size()) {
        throw std::invalid_argument("heat_kernel_derivative: multi-index length must equal the dimension");
    }
    int total = time_order;
    for (int a : multi_index) {
        if (a < 0) {
            throw std::invalid_argument("heat_kernel_derivative: negative derivative order");
        }
        total += a;
    }
    if (time_order < 0 || total > 2) {
        throw std::invalid_argument("heat_kernel_derivative: total derivative order must be at most 2");
    }
    if (!(t > 0.0)) {
        throw std::invalid_argument("heat_kernel_derivative: t must be positive");
    }
    // Variables with a nonzero order: index 0 is time, index i + 1 is x_i.
    std::vector<std::pair<std::size_t, int>> vars;
    if (time_order > 0) {
        vars.emplace_back(0, time_order);
    }
    for (std::size_t i = 0; i < multi_index.size(); ++i) {
        if (multi_index[i] > 0) {
            vars.emplace_back(i + 1, multi_index[i]);
        }
    }
    double xnorm = 0.0;
    for (double xi : x) {
        xnorm += xi * xi;
    }
    xnorm = std::sqrt(xnorm);
    const double root = std::sqrt(t);
    const double eta = 1e-2;
    const double base_t = eta * t;
    const double base_x = eta * root / (1.0 + xnorm / root);

    auto difference = [&](double scale) {
        std::vector<double> point(x.begin(), x.end());
        double acc = 0.0;
        // Enumerate the tensor-product stencil.
        const std::size_t nv = vars.size();
        std::vector<int> idx(nv, 0);
        auto offsets = [](int order) {
            return order == 1 ? std::vector<std::pair<int, double>>{{-1, -0.5}, {1, 0.5}}
                              : std::vector<std::pair<int, double>>{{-1, 1.0}, {0, -2.0}, {1, 1.0}};
        };
        std::vector<std::vector<std::pair<int, double>>> stencils;
        for (const auto& [var, order] : vars) {
            stencils.push_back(offsets(order));
        }
        while (true) {
            double weight = 1.0;
            double tt = t;
            std::copy(x.begin(), x.end(), point.begin());
            for (std::size_t k = 0; k < nv; ++k) {
                const auto [off, w] = stencils[k][static_cast<std::size_t>(idx[k])];
                const auto [var, order] = vars[k];
                const double h = (var == 0 ? base_t : base_x) * scale;
                weight *= w / std::pow(h, order);
                if (var == 0) {
                    tt += off * h;
                } else {
                    point[var - 1] += off * h;
                }
            }
            acc += weight * heat_kernel_pointwise(tt, point, variant);
            std::size_t k = 0;
            while (k < nv) {
                if (++idx[k] < static_cast<int>(stencils[k].size())) {
                    break;
                }
                idx[k] = 0;
                ++k;
            }
            if (k == nv) {
                break;
            }
        }
        return acc;
    };
    if (vars.empty()) {
        return heat_kernel_pointwise(t, x, variant);
    }
    return (4.0 * difference(0.5) - difference(1.0)) / 3.0;
}

ParabolicCheck parabolic_estimate_check(int dimension, int time_order, std::span<const int> multi_index,
                                        double q, HeatNormalization variant, const ParabolicScan& scan)
{
    if (dimension < 1) {
        throw std::invalid_argument("parabolic_estimate_check: dimension must be positive");
    }
    std::vector<int> alpha(multi_index.begin(), multi_index.end());
    if (alpha.empty()) {
        alpha.assign(static_cast<std::size_t>(dimension), 0);
    }
    if (alpha.size() != static_cast<std::size_t>(dimension)) {
        throw std::invalid_argument("parabolic_estimate_check: multi-index length must equal d");
    }
    std::vector<double> ts;
    for (int j = scan.t_min_log2 * scan.points_per_octave; j <= scan.t_max_log2 * scan.points_per_octave; ++j) {
        ts.push_back(std::exp2(static_cast<double>(j) / scan.points_per_octave));
    }
    std::vector<double> xs{0.0};
    for (int j = scan.x_min_log2 * scan.points_per_octave; j <= scan.x_max_log2 * scan.points_per_octave; ++j) {
        xs.push_back(std::exp2(static_cast<double>(j) / scan.points_per_octave));
    }
    ParabolicCheck out;
    std::vector<double> by_t(ts.size(), 0.0);
    std::vector<double> by_x(xs.size(), 0.0);
    std::vector<double> point(static_cast<std::size_t>(dimension), 0.0);
    for (std::size_t i = 0; i < ts.size(); ++i) {
        for (std::size_t j = 0; j < xs.size(); ++j) {
            point[0] = xs[j];
            const double d = heat_kernel_derivative(ts[i], point, time_order, alpha, variant);
            const double v = std::abs(d) * std::pow(ts[i] + xs[j] * xs[j], q);
            if (!std::isfinite(v)) {
                continue;
            }
            by_t[i] = std::max(by_t[i], v);
            by_x[j] = std::max(by_x[j], v);
            if (v > out.supremum) {
                out.supremum = v;
                out.t_at = ts[i];
                out.x_at = xs[j];
            }
        }
        out.profile.emplace_back(ts[i], by_t[i]);
    }
    const auto t_edge = growth_at_edge(by_t);
    std::vector<double> by_x_nonzero(by_x.begin() + 1, by_x.end());
    const auto x_edge = growth_at_edge(by_x_nonzero);
    if (!t_edge.empty()) {
        out.unbounded = true;
        out.trend = t_edge == "low" ? "grows as t -> 0" : "grows as t -> inf";
    } else if (x_edge == "high") {
        out.unbounded = true;
        out.trend = "grows as |x| -> inf";
    }
    return out;
}

} // namespace vcz

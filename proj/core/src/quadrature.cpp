#include "vcz/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>
#include <vector>

namespace vcz {

namespace {

struct RuleStorage {
    std::vector<double> nodes;
    std::vector<double> weights;
};

RuleStorage build_rule(int n)
{
    RuleStorage rule{std::vector<double>(static_cast<std::size_t>(n)),
                     std::vector<double>(static_cast<std::size_t>(n))};
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) {
                break;
            }
        }
        // Refresh the derivative at the converged node.
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        const auto lo = static_cast<std::size_t>(i);
        const auto hi = static_cast<std::size_t>(n - 1 - i);
        rule.nodes[lo] = -x;
        rule.nodes[hi] = x;
        rule.weights[lo] = w;
        rule.weights[hi] = w;
    }
    if (n % 2 == 1) {
        rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
    }
    return rule;
}

constexpr int kMaxOrder = 1024;

} // namespace

GaussRule gauss_legendre(int order)
{
    if (order < 1 || order > kMaxOrder) {
        throw std::invalid_argument("gauss_legendre: order must lie in [1, 1024]");
    }
    static std::array<RuleStorage, kMaxOrder + 1> cache;
    static std::array<std::once_flag, kMaxOrder + 1> flags;
    const auto idx = static_cast<std::size_t>(order);
    std::call_once(flags[idx], [&] { cache[idx] = build_rule(order); });
    return {cache[idx].nodes, cache[idx].weights};
}

double integrate_fixed(const std::function<double(double)>& f, double a, double b, int order)
{
    const auto rule = gauss_legendre(order);
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double acc = 0.0;
    for (int i = 0; i < rule.order(); ++i) {
        acc += rule.weights[static_cast<std::size_t>(i)] * f(mid + half * rule.nodes[static_cast<std::size_t>(i)]);
    }
    return half * acc;
}

Eigen::VectorXd integrate_fixed(const std::function<Eigen::VectorXd(double)>& f, double a, double b,
                                int order)
{
    const auto rule = gauss_legendre(order);
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    Eigen::VectorXd acc;
    for (int i = 0; i < rule.order(); ++i) {
        Eigen::VectorXd v = f(mid + half * rule.nodes[static_cast<std::size_t>(i)]);
        if (i == 0) {
            acc = rule.weights[0] * v;
        } else {
            acc += rule.weights[static_cast<std::size_t>(i)] * v;
        }
    }
    return half * acc;
}

double integrate(const std::function<double(double)>& f, double a, double b, const QuadratureOptions& options)
{
    if (a == b) {
        return 0.0;
    }
    int order = options.initial_order;
    double prev = integrate_fixed(f, a, b, order);
    while (order * 2 <= options.max_order) {
        order *= 2;
        const double next = integrate_fixed(f, a, b, order);
        if (std::abs(next - prev) <= options.tolerance * std::max(1.0, std::abs(next))) {
            return next;
        }
        prev = next;
    }
    throw QuadratureError("integrate: no agreement up to order " + std::to_string(options.max_order)
                          + " on [" + std::to_string(a) + ", " + std::to_string(b) + "]");
}

Eigen::VectorXd integrate(const std::function<Eigen::VectorXd(double)>& f, double a, double b,
                          const QuadratureOptions& options)
{
    int order = options.initial_order;
    Eigen::VectorXd prev = integrate_fixed(f, a, b, order);
    if (a == b) {
        return Eigen::VectorXd::Zero(prev.size());
    }
    while (order * 2 <= options.max_order) {
        order *= 2;
        Eigen::VectorXd next = integrate_fixed(f, a, b, order);
        const double scale = next.size() ? next.cwiseAbs().maxCoeff() : 0.0;
        const double diff = next.size() ? (next - prev).cwiseAbs().maxCoeff() : 0.0;
        if (diff <= options.tolerance * std::max(1.0, scale)) {
            return next;
        }
        prev = std::move(next);
    }
    throw QuadratureError("integrate: no agreement up to order " + std::to_string(options.max_order)
                          + " on [" + std::to_string(a) + ", " + std::to_string(b) + "]");
}

double integrate_geometric(const std::function<double(double)>& f, double a, double b, double first_width,
                           const QuadratureOptions& options)
{
    if (!(first_width > 0.0)) {
        throw std::invalid_argument("integrate_geometric: first_width must be positive");
    }
    double acc = 0.0;
    double lo = a;
    double width = first_width;
    while (lo < b) {
        const double hi = std::min(b, lo + width);
        acc += integrate(f, lo, hi, options);
        lo = hi;
        width = (lo - a);
    }
    return acc;
}

} // namespace vcz

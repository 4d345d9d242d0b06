#pragma once

#include <Eigen/Dense>

#include <functional>
#include <span>
#include <stdexcept>

namespace vcz {

/// Gauss–Legendre rule on [-1, 1].
struct GaussRule {
    std::span<const double> nodes;
    std::span<const double> weights;
    int order() const noexcept { return static_cast<int>(nodes.size()); }
};

/// Cached rule of the given order (1..1024). Nodes come from Newton iteration on the
/// three-term Legendre recurrence.
GaussRule gauss_legendre(int order);

struct QuadratureOptions {
    int initial_order = 8;
    int max_order = 512;
    /// Accept when two successive (doubled) orders agree to tolerance * max(1, |I|).
    double tolerance = 1e-11;
};

class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// ∫_a^b f with a fixed rule.
double integrate_fixed(const std::function<double(double)>& f, double a, double b, int order);
Eigen::VectorXd integrate_fixed(const std::function<Eigen::VectorXd(double)>& f, double a, double b,
                                int order);

/// Order-doubling Gauss–Legendre on a single interval. Throws QuadratureError when max_order
/// is reached without agreement.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& options = {});
Eigen::VectorXd integrate(const std::function<Eigen::VectorXd(double)>& f, double a, double b,
                          const QuadratureOptions& options = {});

/// ∫_a^b f over geometrically growing panels [a + w 2^i, a + w 2^{i+1}] (first panel [a, a + w]),
/// each integrated by order doubling. Suited to integrands decaying like a power of (t - a).
double integrate_geometric(const std::function<double(double)>& f, double a, double b, double first_width,
                           const QuadratureOptions& options = {});

} // namespace vcz

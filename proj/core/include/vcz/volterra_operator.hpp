#pragma once

#include "vcz/cz_decomposition.hpp"
#include "vcz/generator.hpp"
#include "vcz/kernels.hpp"
#include "vcz/quadrature.hpp"
#include "vcz/semigroup.hpp"
#include "vcz/timegrid.hpp"

#include <Eigen/Dense>

namespace vcz {

/// Tf(t) = ∫_0^t K(t, s) f(s) ds for t at least one cell away from every nonzero cell of f.
/// Each cell with s < t is integrated by order-doubling Gauss–Legendre; cells after t
/// contribute nothing. Throws std::invalid_argument when t is on or next to the support.
Eigen::VectorXd apply_off_support(const VolterraKernel& kernel, const StepFunction& f, double t,
                                  const QuadratureOptions& options = {});

/// ∫_Q (K(t, s) - K(t, s_Q)) b(s) ds for t > s_Q, exactly zero for t < s_Q, where s_Q is the
/// center of Q. Requires ∫ b = 0, supp b ⊆ Q and t outside the expanded cube.
Eigen::VectorXd apply_bad_part(const VolterraKernel& kernel, const StepFunction& b, const DyadicCube& cube,
                               double t, const QuadratureOptions& options = {});
Eigen::VectorXd apply_bad_part(const VolterraKernel& kernel, const BadPart& part, double t,
                               const QuadratureOptions& options = {});

/// T'f(t) = ∫_t^∞ K(s, t)ᵀ f(s) ds, under the same off-support rule as apply_off_support.
Eigen::VectorXd transpose_apply(const VolterraKernel& kernel, const StepFunction& f, double t,
                                const QuadratureOptions& options = {});

struct AdjointCheck {
    double forward = 0.0;   ///< ⟨Tg, f⟩
    double transpose = 0.0; ///< ⟨g, T'f⟩
    double discrepancy() const { return std::abs(forward - transpose); }
};

/// Both pairings by nested adaptive quadrature: the outer integral runs over the cells of f
/// (resp. g) and calls apply_off_support (resp. transpose_apply) at every node.
/// g and f must share a cell width and every pair of nonzero cells must be at least one
/// cell apart.
AdjointCheck adjoint_pairings(const VolterraKernel& kernel, const StepFunction& g, const StepFunction& f,
                              const QuadratureOptions& options = {1 << 3, 512, 1e-13});
double adjoint_check(const VolterraKernel& kernel, const StepFunction& g, const StepFunction& f);

/// Exact solution of u' + Au = f, u(0) = 0, for piecewise-constant f.
struct ParabolicSolution {
    StepFunction u;     ///< cell i holds u(t_{i+1})
    StepFunction du_dt; ///< cell averages (u(t_{i+1}) - u(t_i)) / h
    StepFunction Au;    ///< cell averages of A u
    Eigen::MatrixXd nodes; ///< u(t_i), i = 0..N, as columns
    bool singular_generator = false;

    /// Tf = ∂_t u - f = -Au.
    StepFunction transformed() const { return -Au; }
};

/// u(t_{i+1}) = e^{-hA} u(t_i) + h φ1(hA) f_i with φ1(z) = (1 - e^{-z})/z, so that ker A is
/// integrated exactly. Au and ∂_t u are cell averages of the exact solution.
ParabolicSolution solve_parabolic(const Semigroup& semigroup, const StepFunction& f);
ParabolicSolution solve_parabolic(const GeneratorSpec& spec, const StepFunction& f);

} // namespace vcz

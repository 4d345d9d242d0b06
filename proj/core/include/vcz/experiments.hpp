#pragma once

#include "vcz/cz_decomposition.hpp"
#include "vcz/generator.hpp"
#include "vcz/semigroup.hpp"
#include "vcz/trials.hpp"
#include "vcz/volterra_operator.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace vcz {

/// Per-trial norm ratios of one solved right-hand side.
struct TrialRatios {
    double total = 0.0; ///< (‖∂_t u‖ + ‖Au‖) / ‖f‖ in L^p(ℓ^r)
    double au = 0.0;    ///< ‖Au‖ / ‖f‖
};

TrialRatios trial_ratios(const StepFunction& f, const ParabolicSolution& solution, double p, double r);

/// Largest (‖∂_t u‖ + ‖Au‖)/‖f‖ in L^p(ℓ^r) over the family on a unit-horizon grid with
/// `cells` cells. A sampled lower bound on the maximal-regularity constant.
double estimate_strong_constant(const GeneratorSpec& spec, double p, double r, const TrialFamily& trials,
                                std::int64_t cells = 64, int jobs = 0);

/// Largest ‖Au‖_{L^{1,∞}(ℓ^r)} / ‖f‖_{L^1(ℓ^r)} over the family.
double estimate_weak_constant(const GeneratorSpec& spec, const TrialFamily& trials, std::int64_t cells = 64,
                              double r = 2.0, int jobs = 0);

struct RegularityEntry {
    double p = 2.0;
    double r = 2.0;
    std::int64_t cells = 0;
    double constant = 0.0;      ///< C(p, r)
    double au_constant = 0.0;   ///< sup ‖Au‖/‖f‖ at (p, r)
    double weak_constant = 0.0; ///< spike family, measured in ℓ^r
    double m0 = 0.0;            ///< size constant of the Green kernel in ℓ^r
    double base_b = 0.0;        ///< sup ‖Au‖/‖f‖ at (r, r)
    double ratio = 0.0;         ///< C(p, r) / (M0 + C(r, r))
    std::optional<double> doubled_horizon; ///< C(p, r) with f zero-padded to T = 2
};

struct RegularityReport {
    GeneratorSpec spec;
    std::string trials;
    std::string spike_trials;
    std::vector<double> p_list;
    std::vector<double> r_list;
    std::vector<std::int64_t> refinements;
    std::vector<std::pair<double, double>> m1; ///< (r, Hölder constant of the Green kernel)
    std::vector<RegularityEntry> entries;      ///< ordered by N, then p, then r

    const RegularityEntry* find(double p, double r, std::int64_t cells) const;
    /// max C / min C - 1 across refinements at fixed (p, r).
    double variation(double p, double r) const;
    double max_variation() const;
    double max_ratio() const;
};

struct SweepOptions {
    bool horizon_doubling = true;
    bool holder_constants = true;
    int jobs = 0;
};

RegularityReport maxreg_sweep(const GeneratorSpec& spec, const std::vector<double>& p_list,
                              const std::vector<double>& r_list, const TrialFamily& trials,
                              const std::vector<std::int64_t>& refinements, const SweepOptions& options = {});

/// Log-log least-squares slopes of ‖K(τ)‖_{2→2} and ‖∂_τ K(τ)‖_{2→2} against τ over
/// τ in [3/λ_max, 0.3/λ_min], λ_min the smallest nonzero eigenvalue. Symmetric generators only.
struct ScalingFit {
    double kernel_slope = 0.0;
    double derivative_slope = 0.0;
    double tau_min = 0.0;
    double tau_max = 0.0;
    std::vector<std::pair<double, double>> kernel_samples;     ///< (τ, ‖K(τ)‖)
    std::vector<std::pair<double, double>> derivative_samples; ///< (τ, ‖∂_τ K(τ)‖)
};
ScalingFit kernel_scaling(const Semigroup& semigroup, int samples = 40);

/// Random g and f on a shared grid, every nonzero cell of one at least one cell away from every
/// nonzero cell of the other. Each lives on `cells` cells; usually g comes first.
std::pair<StepFunction, StepFunction> random_separated_pair(int dimension, std::uint64_t seed, int cells = 8);

/// Random step function used by czd_stress; seeds divisible by 100 give f = 0.
StepFunction stress_function(std::uint64_t seed);
/// α = scale times sup ‖f‖ (scale itself when f = 0).
double stress_alpha(const StepFunction& f, double scale);
/// Adds 0.1 to the first bad part on its cube, or to the good part when there is none.
CZDecomposition mutate_decomposition(CZDecomposition d);

struct StressFailure {
    std::uint64_t seed = 0;
    double alpha_scale = 0.0;
    double alpha = 0.0;
    PropertyCheck check;
};

struct StressSummary {
    std::int64_t seeds = 0;
    std::int64_t scales = 0;
    std::int64_t failed = 0;
    bool mutated = false;
    std::optional<StressFailure> first_failure;

    std::int64_t total() const { return seeds * scales; }
    /// "<seeds>x<scales> pass", or "<failed>/<total> fail"; in mutation mode
    /// "<failed>/<total> mutations detected".
    std::string summary() const;
    /// All checks pass, or in mutation mode every mutation is caught.
    bool ok() const { return mutated ? failed == total() : failed == 0; }
};

StressSummary czd_stress(std::uint64_t first_seed, std::uint64_t last_seed, const std::vector<double>& alpha_scales,
                         bool mutate = false, int jobs = 0);

} // namespace vcz

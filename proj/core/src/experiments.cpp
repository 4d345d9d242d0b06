#include "vcz/experiments.hpp"

#include "vcz/kernel_validators.hpp"
#include "vcz/kernels.hpp"
#include "vcz/operator_norm.hpp"
#include "vcz/parallel.hpp"
#include "vcz/random.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace vcz {

namespace {

void require_exponents(const std::vector<double>& list, const char* name)
{
    if (list.empty()) {
        throw std::invalid_argument(std::string("maxreg_sweep: ") + name + " list is empty");
    }
    for (double v : list) {
        if (!(v > 1.0) || !std::isfinite(v)) {
            throw std::invalid_argument(std::string("maxreg_sweep: ") + name + " values must lie in (1, inf)");
        }
    }
}

double weak_ratio(const StepFunction& f, const ParabolicSolution& solution, double r)
{
    const SpatialSpace space(f.dimension(), r);
    const double mass = bochner_norm(f.with_space(space), 1.0);
    if (!(mass > 0.0)) {
        return 0.0;
    }
    return weak_l1_norm(solution.transformed().with_space(space)) / mass;
}

double least_squares_slope(const std::vector<std::pair<double, double>>& samples)
{
    double sx = 0.0;
    double sy = 0.0;
    double sxx = 0.0;
    double sxy = 0.0;
    const auto n = static_cast<double>(samples.size());
    for (const auto& [tau, value] : samples) {
        const double x = std::log(tau);
        const double y = std::log(value);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace

TrialRatios trial_ratios(const StepFunction& f, const ParabolicSolution& solution, double p, double r)
{
    const SpatialSpace space(f.dimension(), r);
    const double norm_f = bochner_norm(f.with_space(space), p);
    if (!(norm_f > 0.0)) {
        return {};
    }
    const double du = bochner_norm(solution.du_dt.with_space(space), p);
    const double au = bochner_norm(solution.Au.with_space(space), p);
    return {(du + au) / norm_f, au / norm_f};
}

double estimate_strong_constant(const GeneratorSpec& spec, double p, double r, const TrialFamily& trials,
                                std::int64_t cells, int jobs)
{
    trials.validate();
    const Semigroup semigroup(assemble_generator(spec));
    const auto grid = TimeGrid::unit_horizon(cells);
    std::vector<double> slots(static_cast<std::size_t>(trials.count), 0.0);
    parallel_for(trials.count, resolve_jobs(jobs), [&](std::int64_t i) {
        const auto f = trials.generate(static_cast<int>(i), grid, spec.size, r);
        slots[static_cast<std::size_t>(i)] = trial_ratios(f, solve_parabolic(semigroup, f), p, r).total;
    });
    return *std::max_element(slots.begin(), slots.end());
}

double estimate_weak_constant(const GeneratorSpec& spec, const TrialFamily& trials, std::int64_t cells, double r,
                              int jobs)
{
    trials.validate();
    const Semigroup semigroup(assemble_generator(spec));
    const auto grid = TimeGrid::unit_horizon(cells);
    std::vector<double> slots(static_cast<std::size_t>(trials.count), 0.0);
    parallel_for(trials.count, resolve_jobs(jobs), [&](std::int64_t i) {
        const auto f = trials.generate(static_cast<int>(i), grid, spec.size, r);
        slots[static_cast<std::size_t>(i)] = weak_ratio(f, solve_parabolic(semigroup, f), r);
    });
    return *std::max_element(slots.begin(), slots.end());
}

const RegularityEntry* RegularityReport::find(double p, double r, std::int64_t cells) const
{
    for (const auto& e : entries) {
        if (e.p == p && e.r == r && e.cells == cells) {
            return &e;
        }
    }
    return nullptr;
}

double RegularityReport::variation(double p, double r) const
{
    double lo = kInfinity;
    double hi = 0.0;
    for (const auto& e : entries) {
        if (e.p == p && e.r == r) {
            lo = std::min(lo, e.constant);
            hi = std::max(hi, e.constant);
        }
    }
    return lo > 0.0 && std::isfinite(lo) ? hi / lo - 1.0 : 0.0;
}

double RegularityReport::max_variation() const
{
    double worst = 0.0;
    for (double p : p_list) {
        for (double r : r_list) {
            worst = std::max(worst, variation(p, r));
        }
    }
    return worst;
}

double RegularityReport::max_ratio() const
{
    double worst = 0.0;
    for (const auto& e : entries) {
        worst = std::max(worst, e.ratio);
    }
    return worst;
}

RegularityReport maxreg_sweep(const GeneratorSpec& spec, const std::vector<double>& p_list,
                              const std::vector<double>& r_list, const TrialFamily& trials,
                              const std::vector<std::int64_t>& refinements, const SweepOptions& options)
{
    require_exponents(p_list, "p");
    require_exponents(r_list, "r");
    if (refinements.empty()) {
        throw std::invalid_argument("maxreg_sweep: refinement list is empty");
    }
    trials.validate();
    spec.validate();

    RegularityReport report;
    report.spec = spec;
    report.trials = trials.to_string();
    report.p_list = p_list;
    report.r_list = r_list;
    report.refinements = refinements;
    TrialFamily spikes;
    spikes.kind = TrialKind::spikes;
    spikes.seed = trials.seed;
    spikes.count = trials.count;
    report.spike_trials = spikes.to_string();

    const auto semigroup = std::make_shared<const Semigroup>(assemble_generator(spec));
    const int jobs = resolve_jobs(options.jobs);

    std::vector<double> m0(r_list.size());
    for (std::size_t k = 0; k < r_list.size(); ++k) {
        const auto kernel = greens_kernel(semigroup, r_list[k]);
        m0[k] = validate_size(kernel).estimate;
        if (options.holder_constants) {
            report.m1.emplace_back(r_list[k], validate_holder_s(kernel).estimate);
        }
    }

    // Time exponents to evaluate: every p, plus every r for the base case (r, r).
    std::vector<double> exponents = p_list;
    for (double r : r_list) {
        if (std::find(exponents.begin(), exponents.end(), r) == exponents.end()) {
            exponents.push_back(r);
        }
    }
    const std::size_t np = exponents.size();
    const std::size_t nr = r_list.size();
    auto slot = [&](std::size_t pi, std::size_t ri) { return pi * nr + ri; };

    for (const auto cells : refinements) {
        const auto grid = TimeGrid::unit_horizon(cells);
        const auto count = static_cast<std::size_t>(trials.count);
        std::vector<std::vector<TrialRatios>> ratios(count);
        std::vector<std::vector<double>> doubled(count);
        std::vector<std::vector<double>> weak(count);
        parallel_for(trials.count, jobs, [&](std::int64_t i) {
            const auto idx = static_cast<std::size_t>(i);
            const auto f = trials.generate(static_cast<int>(i), grid, spec.size, 2.0);
            const auto solution = solve_parabolic(*semigroup, f);
            ratios[idx].resize(np * nr);
            for (std::size_t pi = 0; pi < np; ++pi) {
                for (std::size_t ri = 0; ri < nr; ++ri) {
                    ratios[idx][slot(pi, ri)] = trial_ratios(f, solution, exponents[pi], r_list[ri]);
                }
            }
            if (options.horizon_doubling) {
                const auto padded = f.extended(2 * cells);
                const auto long_solution = solve_parabolic(*semigroup, padded);
                doubled[idx].resize(np * nr);
                for (std::size_t pi = 0; pi < np; ++pi) {
                    for (std::size_t ri = 0; ri < nr; ++ri) {
                        doubled[idx][slot(pi, ri)] =
                            trial_ratios(padded, long_solution, exponents[pi], r_list[ri]).total;
                    }
                }
            }
            const auto spike = spikes.generate(static_cast<int>(i), grid, spec.size, 2.0);
            const auto spike_solution = solve_parabolic(*semigroup, spike);
            weak[idx].resize(nr);
            for (std::size_t ri = 0; ri < nr; ++ri) {
                weak[idx][ri] = weak_ratio(spike, spike_solution, r_list[ri]);
            }
        });

        std::vector<TrialRatios> best(np * nr);
        std::vector<double> best_doubled(np * nr, 0.0);
        std::vector<double> best_weak(nr, 0.0);
        for (std::size_t i = 0; i < count; ++i) {
            for (std::size_t k = 0; k < np * nr; ++k) {
                best[k].total = std::max(best[k].total, ratios[i][k].total);
                best[k].au = std::max(best[k].au, ratios[i][k].au);
                if (options.horizon_doubling) {
                    best_doubled[k] = std::max(best_doubled[k], doubled[i][k]);
                }
            }
            for (std::size_t ri = 0; ri < nr; ++ri) {
                best_weak[ri] = std::max(best_weak[ri], weak[i][ri]);
            }
        }

        for (std::size_t pi = 0; pi < p_list.size(); ++pi) {
            for (std::size_t ri = 0; ri < nr; ++ri) {
                const auto base = static_cast<std::size_t>(
                    std::find(exponents.begin(), exponents.end(), r_list[ri]) - exponents.begin());
                RegularityEntry e;
                e.p = p_list[pi];
                e.r = r_list[ri];
                e.cells = cells;
                e.constant = best[slot(pi, ri)].total;
                e.au_constant = best[slot(pi, ri)].au;
                e.weak_constant = best_weak[ri];
                e.m0 = m0[ri];
                e.base_b = best[slot(base, ri)].au;
                e.ratio = e.constant / (e.m0 + best[slot(base, ri)].total);
                if (options.horizon_doubling) {
                    e.doubled_horizon = best_doubled[slot(pi, ri)];
                }
                report.entries.push_back(e);
            }
        }
    }
    return report;
}

ScalingFit kernel_scaling(const Semigroup& semigroup, int samples)
{
    if (!semigroup.symmetric()) {
        throw std::invalid_argument("kernel_scaling: symmetric generators only");
    }
    if (samples < 2) {
        throw std::invalid_argument("kernel_scaling: need at least two samples");
    }
    const auto& ev = semigroup.eigenvalues();
    const double lambda_max = ev.maxCoeff();
    double lambda_min = kInfinity;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev[i] > 1e-12 * lambda_max) {
            lambda_min = std::min(lambda_min, ev[i]);
        }
    }
    ScalingFit fit;
    fit.tau_min = 3.0 / lambda_max;
    fit.tau_max = 0.3 / lambda_min;
    if (!(lambda_max > 0.0) || !(fit.tau_min < fit.tau_max)) {
        throw std::invalid_argument("kernel_scaling: spectrum too narrow for a scaling range");
    }
    const double step = std::log(fit.tau_max / fit.tau_min) / (samples - 1);
    for (int i = 0; i < samples; ++i) {
        const double tau = fit.tau_min * std::exp(step * i);
        fit.kernel_samples.emplace_back(tau, spectral_norm(semigroup.kernel(tau)));
        fit.derivative_samples.emplace_back(tau, spectral_norm(semigroup.kernel_derivative(tau)));
    }
    fit.kernel_slope = least_squares_slope(fit.kernel_samples);
    fit.derivative_slope = least_squares_slope(fit.derivative_samples);
    return fit;
}

std::pair<StepFunction, StepFunction> random_separated_pair(int dimension, std::uint64_t seed, int cells)
{
    Rng rng(seed, 0xad1);
    const int level = -static_cast<int>(rng.integer(0, 3));
    const auto gap = rng.integer(1, 3);
    const std::int64_t total = 2 * cells + gap;
    const bool g_first = rng.uniform() < 0.75;
    auto draw = [&](std::int64_t offset) {
        Eigen::MatrixXd values = Eigen::MatrixXd::Zero(dimension, total);
        for (std::int64_t i = 0; i < cells; ++i) {
            if (rng.uniform() < 0.2) {
                continue;
            }
            for (int a = 0; a < dimension; ++a) {
                values(a, offset + i) = rng.normal();
            }
        }
        return StepFunction(TimeGrid(level, total), SpatialSpace(dimension, 2.0), std::move(values));
    };
    auto first = draw(0);
    auto second = draw(cells + gap);
    return g_first ? std::pair{std::move(first), std::move(second)} : std::pair{std::move(second), std::move(first)};
}

StepFunction stress_function(std::uint64_t seed)
{
    Rng rng(seed, 0xc2d);
    // Mix power-of-two and ragged lengths so that selected cubes can run past the grid.
    const std::int64_t cells = rng.uniform() < 0.5 ? (std::int64_t{1} << rng.integer(0, 8)) : rng.integer(1, 300);
    const int level = static_cast<int>(rng.integer(-8, 2));
    const int dimension = static_cast<int>(rng.integer(1, 3));
    static constexpr double exponents[] = {1.5, 2.0, 4.0, kInfinity};
    const double r = exponents[rng.integer(0, 3)];
    Eigen::MatrixXd values = Eigen::MatrixXd::Zero(dimension, cells);
    if (seed % 100 != 0) {
        const double zero_fraction = rng.uniform(0.0, 0.8);
        for (std::int64_t i = 0; i < cells; ++i) {
            if (rng.uniform() < zero_fraction) {
                continue;
            }
            double scale = std::exp(1.5 * rng.normal());
            if (rng.uniform() < 0.05) {
                scale *= 100.0;
            }
            for (int a = 0; a < dimension; ++a) {
                values(a, i) = scale * rng.normal();
            }
        }
    }
    return StepFunction(TimeGrid(level, cells), SpatialSpace(dimension, r), std::move(values));
}

double stress_alpha(const StepFunction& f, double scale)
{
    const double peak = bochner_norm(f, kInfinity);
    return peak > 0.0 ? scale * peak : scale;
}

CZDecomposition mutate_decomposition(CZDecomposition d)
{
    if (d.bad.empty()) {
        Eigen::MatrixXd g = d.good.samples().array() + 0.1;
        d.good = StepFunction(d.good.grid(), d.good.space(), std::move(g));
        return d;
    }
    auto& first = d.bad.front();
    Eigen::MatrixXd b = first.part.samples();
    const auto& grid = first.part.grid();
    for (std::int64_t i = 0; i < first.part.cells(); ++i) {
        if (grid.left(i) >= first.cube.left() && grid.right(i) <= first.cube.right()) {
            b.col(static_cast<Eigen::Index>(i)).array() += 0.1;
        }
    }
    first.part = StepFunction(grid, first.part.space(), std::move(b));
    return d;
}

std::string StressSummary::summary() const
{
    std::ostringstream os;
    if (mutated) {
        os << failed << "/" << total() << " mutations detected";
    } else if (failed == 0) {
        os << seeds << "x" << scales << " pass";
    } else {
        os << failed << "/" << total() << " fail";
    }
    return os.str();
}

StressSummary czd_stress(std::uint64_t first_seed, std::uint64_t last_seed, const std::vector<double>& alpha_scales,
                         bool mutate, int jobs)
{
    if (last_seed < first_seed) {
        throw std::invalid_argument("czd_stress: empty seed range");
    }
    if (alpha_scales.empty()) {
        throw std::invalid_argument("czd_stress: no alpha scales");
    }
    for (double s : alpha_scales) {
        if (!(s > 0.0) || !std::isfinite(s)) {
            throw std::invalid_argument("czd_stress: alpha scales must be positive");
        }
    }
    StressSummary out;
    out.seeds = static_cast<std::int64_t>(last_seed - first_seed + 1);
    out.scales = static_cast<std::int64_t>(alpha_scales.size());
    out.mutated = mutate;
    static constexpr double time_exponents[] = {1.0, 1.5, 2.0, 3.0};

    std::vector<std::optional<StressFailure>> failures(static_cast<std::size_t>(out.total()));
    parallel_for(out.total(), resolve_jobs(jobs), [&](std::int64_t k) {
        const auto seed = first_seed + static_cast<std::uint64_t>(k / out.scales);
        const double scale = alpha_scales[static_cast<std::size_t>(k % out.scales)];
        const auto f = stress_function(seed);
        const double alpha = stress_alpha(f, scale);
        auto d = decompose(f, alpha);
        if (mutate) {
            d = mutate_decomposition(std::move(d));
        }
        const auto report = verify(d, f, alpha, time_exponents[seed % 4]);
        if (const auto* bad = report.first_failure()) {
            failures[static_cast<std::size_t>(k)] = StressFailure{seed, scale, alpha, *bad};
        }
    });
    for (const auto& failure : failures) {
        if (failure) {
            ++out.failed;
            if (!out.first_failure) {
                out.first_failure = failure;
            }
        }
    }
    return out;
}

} // namespace vcz

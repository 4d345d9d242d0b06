#include "commands.hpp"

#include "vcz/experiments.hpp"
#include "vcz/kernel_validators.hpp"
#include "vcz/parallel.hpp"

#include <cmath>
#include <fstream>
#include <memory>
#include <ostream>

namespace vcz::cli {

namespace {

TrialFamily parse_family(const std::string& text)
{
    try {
        auto family = TrialFamily::parse(text);
        family.validate();
        return family;
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("--trials: ") + e.what());
    }
}

void write_columns(const fs::path& path, const std::vector<std::pair<double, double>>& rows, const std::string& header)
{
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream out(path);
    if (!out) {
        throw UsageError("cannot write " + path.string());
    }
    out << "# " << header << '\n';
    for (const auto& [x, y] : rows) {
        out << fmt(x) << ' ' << fmt(y) << '\n';
    }
}

json entry_json(const RegularityEntry& e)
{
    json out{{"p", number(e.p)},
             {"r", number(e.r)},
             {"N", e.cells},
             {"constant", e.constant},
             {"au_constant", e.au_constant},
             {"weak_constant", e.weak_constant},
             {"M0", e.m0},
             {"base_B", e.base_b},
             {"ratio", e.ratio}};
    if (e.doubled_horizon) {
        out["doubled_horizon_constant"] = *e.doubled_horizon;
    }
    return out;
}

} // namespace

int run_maxreg_sweep(const SweepCommandOptions& o, Context& ctx)
{
    if (o.spec.empty()) {
        throw UsageError("maxreg-sweep needs --spec");
    }
    const auto spec = read_generator_spec(o.spec);
    const auto p_list = parse_real_list(o.p, "--p");
    const auto r_list = parse_real_list(o.r, "--r");
    const auto trials = parse_family(o.trials);
    const auto refine = parse_int_list(o.refine, "--refine");
    for (const auto n : refine) {
        if (n < 1 || (n & (n - 1)) != 0) {
            throw UsageError("--refine entries must be powers of two, got " + std::to_string(n));
        }
    }
    SweepOptions options;
    options.horizon_doubling = !o.no_doubling;
    options.jobs = ctx.jobs;
    RegularityReport report;
    try {
        report = maxreg_sweep(spec, p_list, r_list, trials, refine, options);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }

    bool finite = true;
    for (const auto& e : report.entries) {
        finite = finite && std::isfinite(e.constant) && std::isfinite(e.weak_constant);
        ctx.out << "p=" << fmt(e.p) << " r=" << fmt(e.r) << " N=" << e.cells << " C=" << fmt(e.constant)
                << " weak=" << fmt(e.weak_constant) << " M0=" << fmt(e.m0) << " B=" << fmt(e.base_b)
                << " ratio=" << fmt(e.ratio) << '\n';
    }
    const double variation = report.max_variation();
    const bool stable = refine.size() < 2 || variation < 0.1;
    ctx.out << "max_variation=" << fmt(variation) << '\n' << "max_ratio=" << fmt(report.max_ratio()) << '\n';

    if (!o.csv.empty()) {
        std::ofstream csv(o.csv);
        if (!csv) {
            throw UsageError("cannot write " + o.csv);
        }
        csv << "p,r,N,constant,weak_constant,M0,base_B\n";
        for (const auto& e : report.entries) {
            csv << fmt(e.p) << ',' << fmt(e.r) << ',' << e.cells << ',' << fmt(e.constant) << ','
                << fmt(e.weak_constant) << ',' << fmt(e.m0) << ',' << fmt(e.base_b) << '\n';
        }
    }
    if (!o.plot_data.empty()) {
        const fs::path dir(o.plot_data);
        const auto semigroup = std::make_shared<const Semigroup>(assemble_generator(spec));
        const auto grid = TimeGrid::unit_horizon(refine.back());
        const auto spikes = TrialFamily::parse(report.spike_trials);
        const auto spike = spikes.generate(0, grid, spec.size, r_list.front());
        const auto response = solve_parabolic(*semigroup, spike).transformed();
        write_columns(dir / "weak_profile.dat", weak_profile(response), "lambda lambda*|{|Tf|>=lambda}|");
        const auto kernel = greens_kernel(semigroup, 2.0);
        std::vector<std::pair<double, double>> size;
        for (int k = -80; k <= 40; ++k) {
            const double tau = std::exp2(k / 4.0);
            size.emplace_back(tau, tau * kernel_norm(kernel, tau));
        }
        write_columns(dir / "kernel_size.dat", size, "tau tau*|K(tau)|_{2->2}");
    }
    if (!o.out.empty()) {
        json entries = json::array();
        for (const auto& e : report.entries) {
            entries.push_back(entry_json(e));
        }
        json m1 = json::array();
        for (const auto& [r, value] : report.m1) {
            m1.push_back({{"r", number(r)}, {"M1", number(value)}});
        }
        json config{{"subcommand", "maxreg-sweep"},
                    {"spec", to_json(spec)},
                    {"spec_path", o.spec},
                    {"p", json::array()},
                    {"r", json::array()},
                    {"trials", report.trials},
                    {"spike_trials", report.spike_trials},
                    {"refine", refine},
                    {"horizon_doubling", options.horizon_doubling},
                    {"horizon", 1.0}};
        for (double p : p_list) {
            config["p"].push_back(number(p));
        }
        for (double r : r_list) {
            config["r"].push_back(number(r));
        }
        write_json({{"config", config},
                    {"entries", std::move(entries)},
                    {"M1", std::move(m1)},
                    {"max_variation", variation},
                    {"max_ratio", report.max_ratio()}},
                   o.out);
    }
    return finite && stable ? kOk : kPropertyFailure;
}

int run_weak_type(const WeakTypeOptions& o, Context& ctx)
{
    if (o.spec.empty()) {
        throw UsageError("weak-type needs --spec");
    }
    if (o.cells < 1 || (o.cells & (o.cells - 1)) != 0) {
        throw UsageError("--cells must be a power of two");
    }
    if (o.halvings < 0) {
        throw UsageError("--halvings must be nonnegative");
    }
    const auto spec = read_generator_spec(o.spec);
    auto family = parse_family(o.trials);
    const double width = family.width;
    std::vector<double> constants;
    json rows = json::array();
    double max_change = 0.0;
    for (int k = 0; k <= o.halvings; ++k) {
        family.width = width / std::exp2(k);
        const double c = estimate_weak_constant(spec, family, o.cells, o.r, ctx.jobs);
        ctx.out << "width=" << fmt(family.width) << " weak_constant=" << fmt(c);
        if (!constants.empty()) {
            const double change = std::abs(c / constants.back() - 1.0);
            max_change = std::max(max_change, change);
            ctx.out << " change=" << fmt(change);
        }
        ctx.out << '\n';
        constants.push_back(c);
        rows.push_back({{"width", family.width}, {"weak_constant", number(c)}});
    }
    const bool finite = std::all_of(constants.begin(), constants.end(), [](double c) { return std::isfinite(c); });
    const bool stable = max_change < o.threshold;
    ctx.out << "max_change=" << fmt(max_change) << '\n';
    if (!o.out.empty()) {
        family.width = width;
        write_json({{"config",
                     {{"subcommand", "weak-type"},
                      {"spec", to_json(spec)},
                      {"spec_path", o.spec},
                      {"trials", family.to_string()},
                      {"cells", o.cells},
                      {"r", number(o.r)},
                      {"halvings", o.halvings},
                      {"threshold", o.threshold}}},
                    {"rows", std::move(rows)},
                    {"max_change", max_change}},
                   o.out);
    }
    return finite && stable ? kOk : kPropertyFailure;
}

int run_czd_stress(const StressOptions& o, Context& ctx)
{
    const auto [first, last] = parse_seed_range(o.seeds);
    const auto scales = parse_real_list(o.alpha_scales, "--alpha-scales");
    for (double s : scales) {
        if (!(s > 0.0) || !std::isfinite(s)) {
            throw UsageError("--alpha-scales entries must be positive and finite");
        }
    }
    const auto summary = czd_stress(first, last, scales, o.mutate, ctx.jobs);
    ctx.out << summary.summary() << '\n';
    json failure = nullptr;
    if (summary.first_failure) {
        const auto& f = *summary.first_failure;
        ctx.out << (o.mutate ? "first detection: " : "first failure: ") << "seed=" << f.seed
                << " alpha_scale=" << fmt(f.alpha_scale) << " alpha=" << fmt(f.alpha) << " property=" << f.check.property;
        if (f.check.witness) {
            ctx.out << " witness=" << to_string(*f.check.witness);
        }
        ctx.out << '\n';
        failure = {{"seed", f.seed},
                   {"alpha_scale", f.alpha_scale},
                   {"alpha", f.alpha},
                   {"property", f.check.property},
                   {"lhs", number(f.check.lhs)},
                   {"rhs", number(f.check.rhs)}};
        if (f.check.witness) {
            failure["witness"] = to_string(*f.check.witness);
        }
    }
    if (!o.out.empty()) {
        write_json({{"config",
                     {{"subcommand", "czd-stress"},
                      {"seeds", {first, last}},
                      {"alpha_scales", scales},
                      {"mutate", o.mutate}}},
                    {"summary", summary.summary()},
                    {"failed", summary.failed},
                    {"total", summary.total()},
                    {"first_failure", failure}},
                   o.out);
    }
    return summary.ok() ? kOk : kPropertyFailure;
}

} // namespace vcz::cli

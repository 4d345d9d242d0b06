#include "commands.hpp"

#include "kernel_choice.hpp"

#include "vcz/experiments.hpp"
#include "vcz/kernel_validators.hpp"
#include "vcz/parallel.hpp"
#include "vcz/volterra_operator.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

namespace vcz::cli {

namespace {

json decomposition_json(const CZDecomposition& d, const StepFunction& f, const PropertyReport& report,
                        const json& config)
{
    json cubes = json::array();
    for (const auto& part : d.bad) {
        json entry = to_json(part.cube);
        entry["average"] = std::vector<double>(part.average.data(), part.average.data() + part.average.size());
        entry["norm_average"] = part.norm_average;
        entry["b_j"] = to_json(part.part);
        cubes.push_back(std::move(entry));
    }
    return {{"config", config},
            {"alpha", d.alpha},
            {"f", to_json(f)},
            {"g", to_json(d.good)},
            {"cubes", std::move(cubes)},
            {"properties", to_json(report)}};
}

CZDecomposition decomposition_from_json(const json& j)
{
    CZDecomposition d{j.at("alpha").get<double>(), step_function_from_json(j.at("g")), {}};
    for (const auto& entry : j.at("cubes")) {
        const DyadicCube cube(entry.at("n").get<int>(), entry.at("k").get<std::int64_t>());
        const auto avg = entry.at("average").get<std::vector<double>>();
        d.bad.push_back(BadPart{cube, step_function_from_json(entry.at("b_j")),
                                Eigen::Map<const Eigen::VectorXd>(avg.data(), static_cast<Eigen::Index>(avg.size())),
                                entry.at("norm_average").get<double>()});
    }
    return d;
}

void print_report(const PropertyReport& report, std::ostream& out)
{
    if (report.passed()) {
        out << "properties=pass\n";
        return;
    }
    for (const auto& c : report.checks) {
        if (!c.passed) {
            out << "property failed: " << c.property << " lhs=" << fmt(c.lhs) << " rhs=" << fmt(c.rhs);
            if (c.witness) {
                out << " witness=" << to_string(*c.witness);
            }
            out << '\n';
        }
    }
    out << "properties=fail\n";
}

int recheck(const DecomposeOptions& o, Context& ctx)
{
    const json stored = read_json(o.recheck);
    try {
        const auto f = step_function_from_json(stored.at("f"));
        const auto d = decomposition_from_json(stored);
        const double r = number_from_json(stored.at("config").at("r"));
        const auto report = verify(d, f, d.alpha, r);
        print_report(report, ctx.out);
        const bool identical = to_json(report) == stored.at("properties");
        ctx.out << "recheck=" << (identical ? "identical" : "differs") << '\n';
        return identical && report.passed() ? kOk : kPropertyFailure;
    } catch (const json::exception& e) {
        throw UsageError(o.recheck + ": not a decompose report (" + e.what() + ")");
    }
}

void print_vector(std::ostream& out, const Eigen::VectorXd& v)
{
    for (Eigen::Index a = 0; a < v.size(); ++a) {
        out << (a ? "," : "") << fmt(v(a));
    }
}

std::vector<double> to_std(const Eigen::VectorXd& v)
{
    return {v.data(), v.data() + v.size()};
}

json profile_json(const std::vector<std::pair<double, double>>& profile)
{
    json out = json::array();
    for (const auto& [x, y] : profile) {
        out.push_back({number(x), number(y)});
    }
    return out;
}

/// "parabolic:q=Q[,m=M,alpha=A1+A2+...]"
struct ParabolicCondition {
    double q = 0.0;
    int time_order = 0;
    std::vector<int> multi_index;
};

ParabolicCondition parse_parabolic(const std::string& rest, int dimension)
{
    ParabolicCondition c;
    c.multi_index.assign(static_cast<std::size_t>(dimension), 0);
    bool have_q = false;
    std::stringstream ss(rest);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw UsageError("--condition parabolic expects key=value parameters, got '" + item + "'");
        }
        const auto key = item.substr(0, eq);
        const auto value = item.substr(eq + 1);
        if (key == "q") {
            c.q = parse_real(value, "--condition parabolic:q");
            have_q = true;
        } else if (key == "m") {
            c.time_order = static_cast<int>(parse_real(value, "--condition parabolic:m"));
        } else if (key == "alpha") {
            std::stringstream parts(value);
            std::string part;
            std::size_t axis = 0;
            while (std::getline(parts, part, '+')) {
                if (axis >= c.multi_index.size()) {
                    throw UsageError("--condition parabolic:alpha has more entries than the dimension");
                }
                c.multi_index[axis++] = static_cast<int>(parse_real(part, "--condition parabolic:alpha"));
            }
        } else {
            throw UsageError("unknown parabolic condition parameter '" + key + "'");
        }
    }
    if (!have_q) {
        throw UsageError("--condition parabolic needs q=Q");
    }
    return c;
}

HeatNormalization normalization_of(const std::string& text)
{
    try {
        return parse_heat_normalization(text);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("--normalization: ") + e.what());
    }
}

} // namespace

int run_decompose(const DecomposeOptions& o, Context& ctx)
{
    if (!o.recheck.empty()) {
        return recheck(o, ctx);
    }
    if (!(o.alpha > 0.0) || !std::isfinite(o.alpha)) {
        throw UsageError("invalid --alpha " + fmt(o.alpha) + ": alpha must be a positive finite number");
    }
    if (!(o.r >= 1.0)) {
        throw UsageError("invalid --r " + fmt(o.r) + ": the partial-sum exponent must be >= 1");
    }
    if (o.input.empty()) {
        throw UsageError("decompose needs --input");
    }
    const auto f = read_step_function(o.input);
    const auto d = decompose(f, o.alpha);
    const auto report = verify(d, f, o.alpha, o.r);

    ctx.out << "cubes=" << d.bad.size() << '\n';
    for (const auto& part : d.bad) {
        ctx.out << to_string(part.cube) << " s_j=" << fmt(part.center()) << '\n';
    }
    print_report(report, ctx.out);

    const json config{{"subcommand", "decompose"},
                      {"input", o.input},
                      {"alpha", o.alpha},
                      {"r", number(o.r)},
                      {"emit_parts", o.emit_parts}};
    if (!o.report.empty()) {
        write_json(decomposition_json(d, f, report, config), o.report);
    }
    if (!o.emit_parts.empty()) {
        const fs::path dir(o.emit_parts);
        write_step_function(d.good, dir / "g.csv");
        for (std::size_t j = 0; j < d.bad.size(); ++j) {
            write_step_function(d.bad[j].part, dir / ("b_" + std::to_string(j + 1) + ".csv"));
        }
    }
    return report.passed() ? kOk : kPropertyFailure;
}

int run_validate_kernel(const ValidateKernelOptions& o, Context& ctx)
{
    const auto choice = KernelChoice::parse(o.kernel, normalization_of(o.normalization));
    if (!(o.tol > 0.0)) {
        throw UsageError("--tol must be positive");
    }
    json config{{"subcommand", "validate-kernel"},
                {"kernel", choice.to_json()},
                {"condition", o.condition},
                {"tol", o.tol},
                {"r", number(o.r)},
                {"min_log2", o.min_log2},
                {"max_log2", o.max_log2},
                {"points_per_octave", o.points_per_octave}};
    json result;
    int code = kOk;

    if (o.condition.rfind("parabolic", 0) == 0) {
        if (choice.family != "heat") {
            throw UsageError("--condition parabolic applies to --kernel heat:d=D");
        }
        const auto rest = o.condition.size() > 10 ? o.condition.substr(10) : std::string();
        const auto c = parse_parabolic(rest, choice.lattice.dimension);
        const auto check = parabolic_estimate_check(choice.lattice.dimension, c.time_order, c.multi_index, c.q,
                                                    choice.lattice.variant);
        ctx.out << "sup=" << fmt(check.supremum) << '\n'
                << "t_at=" << fmt(check.t_at) << '\n'
                << "x_at=" << fmt(check.x_at) << '\n'
                << "bounded=" << (check.unbounded ? "false" : "true") << '\n';
        if (check.unbounded) {
            ctx.out << "trend=" << check.trend << '\n';
        }
        result = {{"supremum", number(check.supremum)},
                  {"t_at", check.t_at},
                  {"x_at", check.x_at},
                  {"unbounded", check.unbounded},
                  {"trend", check.trend},
                  {"profile", profile_json(check.profile)}};
    } else {
        const auto kernel = choice.build(o.r);
        SamplingPlan plan;
        plan.min_log2 = o.min_log2;
        plan.max_log2 = o.max_log2;
        plan.points_per_octave = o.points_per_octave;
        ValidatorResult v;
        std::string label;
        bool claim_applies = true;
        if (o.condition == "size") {
            v = validate_size(kernel, plan);
            label = "M0";
        } else if (o.condition == "holder-s") {
            v = validate_holder_s(kernel, plan);
            label = "M1";
        } else if (o.condition == "holder-t") {
            v = validate_holder_t(kernel, plan);
            label = "M1";
        } else if (o.condition == "time-derivative") {
            v = validate_time_derivative(kernel, plan);
            label = "Mdt";
            claim_applies = false;
        } else if (o.condition == "hormander-s") {
            v = hormander_sup_s(kernel, o.tol);
            label = "H";
            claim_applies = false;
        } else if (o.condition == "hormander-t") {
            v = hormander_sup_t(kernel, o.tol);
            label = "H";
            claim_applies = false;
        } else {
            throw UsageError("unknown --condition '" + o.condition +
                             "' (size|holder-s|holder-t|time-derivative|hormander-s|hormander-t|parabolic:q=Q)");
        }
        ctx.out << label << '=' << fmt(v.estimate) << '\n';
        if (v.diverged) {
            ctx.out << "diverged: " << v.divergence << '\n';
            code = kPropertyFailure;
        }
        const auto claim = o.claimed ? o.claimed : kernel.info().claimed_constant;
        if (claim_applies && claim) {
            const bool within = v.estimate <= *claim * (1.0 + o.tol);
            ctx.out << "claimed=" << fmt(*claim) << (within ? " (holds)" : " (exceeded)") << '\n';
            if (!within) {
                code = kPropertyFailure;
            }
        }
        config["claimed"] = claim ? json(*claim) : json(nullptr);
        result = {{label, number(v.estimate)},
                  {"diverged", v.diverged},
                  {"divergence", v.divergence},
                  {"profile", profile_json(v.profile)}};
    }
    if (!o.out.empty()) {
        write_json({{"config", config}, {"result", result}, {"exit_code", code}}, o.out);
    }
    return code;
}

int run_hormander(const HormanderOptions& o, Context& ctx)
{
    const bool s_form = o.s || o.s0;
    const bool t_form = o.t || o.t0;
    if (s_form == t_form || (s_form && !(o.s && o.s0)) || (t_form && !(o.t && o.t0))) {
        throw UsageError("hormander needs exactly one of the pairs --s/--s0 or --t/--t0");
    }
    if (!(o.tol > 0.0)) {
        throw UsageError("--tol must be positive");
    }
    const auto choice = KernelChoice::parse(o.kernel, normalization_of(o.normalization));
    const auto kernel = choice.build(o.r);
    HormanderResult h;
    try {
        h = s_form ? hormander_integral_s(kernel, *o.s, *o.s0, o.tol, o.holder_constant)
                   : hormander_integral_t(kernel, *o.t, *o.t0, o.tol, o.holder_constant);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    ctx.out << "value=" << fmt(h.value) << '\n'
            << "quadrature=" << fmt(h.quadrature) << '\n'
            << "tail_bound=" << fmt(h.tail_bound) << '\n'
            << "truncation=" << fmt(h.truncation) << '\n'
            << "M1=" << fmt(h.holder_constant) << '\n';
    if (h.diverged) {
        ctx.out << "diverged: Holder constant is unbounded\n";
    }
    if (!o.out.empty()) {
        json config{{"subcommand", "hormander"}, {"kernel", choice.to_json()}, {"tol", o.tol}, {"r", number(o.r)}};
        if (s_form) {
            config["s"] = *o.s;
            config["s0"] = *o.s0;
        } else {
            config["t"] = *o.t;
            config["t0"] = *o.t0;
        }
        write_json({{"config", config},
                    {"result",
                     {{"value", number(h.value)},
                      {"quadrature", number(h.quadrature)},
                      {"tail_bound", number(h.tail_bound)},
                      {"truncation", number(h.truncation)},
                      {"holder_constant", number(h.holder_constant)},
                      {"diverged", h.diverged}}}},
                   o.out);
    }
    return h.diverged ? kPropertyFailure : kOk;
}

int run_apply(const ApplyOptions& o, Context& ctx)
{
    const auto choice = KernelChoice::parse(o.kernel, normalization_of(o.normalization));
    const auto f = read_step_function(o.input);
    const auto times = parse_real_list(o.at, "--at");
    const auto kernel = choice.build(f.space().exponent());
    json values = json::array();
    for (const double t : times) {
        Eigen::VectorXd v;
        try {
            v = o.transpose ? transpose_apply(kernel, f, t) : apply_off_support(kernel, f, t);
        } catch (const std::invalid_argument& e) {
            throw UsageError(std::string("--at ") + fmt(t) + ": " + e.what());
        }
        ctx.out << "t=" << fmt(t) << " value=";
        print_vector(ctx.out, v);
        ctx.out << '\n';
        values.push_back({{"t", t}, {"value", to_std(v)}});
    }
    if (!o.out.empty()) {
        write_json({{"config",
                     {{"subcommand", "apply"},
                      {"kernel", choice.to_json()},
                      {"input", o.input},
                      {"at", times},
                      {"transpose", o.transpose}}},
                    {"values", std::move(values)}},
                   o.out);
    }
    return kOk;
}

int run_solve(const SolveOptions& o, Context& ctx)
{
    if (o.spec.empty() || o.input.empty() || o.out.empty()) {
        throw UsageError("solve needs --spec, --input and --out");
    }
    const auto spec = read_generator_spec(o.spec);
    const auto f = read_step_function(o.input);
    if (f.dimension() != spec.size) {
        throw UsageError("input has " + std::to_string(f.dimension()) + " components but the generator has m=" +
                         std::to_string(spec.size));
    }
    const auto solution = solve_parabolic(spec, f);
    const fs::path dir(o.out);
    write_step_function(solution.u, dir / "u.csv");
    write_step_function(solution.du_dt, dir / "du_dt.csv");
    write_step_function(solution.Au, dir / "Au.csv");

    const Eigen::MatrixXd defect = solution.du_dt.samples() + solution.Au.samples() - f.samples();
    const double scale = 1.0 + f.samples().cwiseAbs().maxCoeff();
    const double residual = defect.size() ? defect.cwiseAbs().maxCoeff() : 0.0;
    const bool ok = residual <= 1e-10 * scale;
    ctx.out << "residual=" << fmt(residual) << '\n'
            << "singular_generator=" << (solution.singular_generator ? "true" : "false") << '\n';
    write_json({{"config",
                 {{"subcommand", "solve"}, {"spec", to_json(spec)}, {"spec_path", o.spec}, {"input", o.input}}},
                {"residual", residual},
                {"singular_generator", solution.singular_generator},
                {"files", {"u.csv", "du_dt.csv", "Au.csv"}}},
               dir / "solution.json");
    return ok ? kOk : kPropertyFailure;
}

int run_adjoint_check(const AdjointOptions& o, Context& ctx)
{
    if (o.pairs < 1 || o.cells < 1) {
        throw UsageError("--pairs and --cells must be positive");
    }
    const auto choice = KernelChoice::parse(o.kernel, normalization_of(o.normalization));
    const auto kernel = choice.build(2.0);
    const int dimension = kernel.domain().dimension();
    std::vector<AdjointCheck> checks(static_cast<std::size_t>(o.pairs));
    parallel_for(o.pairs, ctx.jobs, [&](std::int64_t i) {
        const auto [g, f] = random_separated_pair(dimension, o.seed + static_cast<std::uint64_t>(i), o.cells);
        checks[static_cast<std::size_t>(i)] = adjoint_pairings(kernel, g, f);
    });
    double worst = 0.0;
    double discrepancy = 0.0;
    bool ok = true;
    json entries = json::array();
    for (const auto& c : checks) {
        const double relative = c.discrepancy() / (1.0 + std::abs(c.forward));
        ok = ok && relative <= 1e-10;
        if (relative >= worst) {
            worst = relative;
            discrepancy = c.discrepancy();
        }
        entries.push_back({{"forward", c.forward}, {"transpose", c.transpose}, {"discrepancy", c.discrepancy()}});
    }
    ctx.out << "discrepancy=" << fmt(discrepancy) << '\n';
    if (o.pairs > 1) {
        ctx.out << "pairs=" << o.pairs << " max_relative=" << fmt(worst) << '\n';
    }
    if (!o.out.empty()) {
        write_json({{"config",
                     {{"subcommand", "adjoint-check"},
                      {"kernel", choice.to_json()},
                      {"seed", o.seed},
                      {"pairs", o.pairs},
                      {"cells", o.cells}}},
                    {"pairs", std::move(entries)},
                    {"max_relative_discrepancy", worst}},
                   o.out);
    }
    return ok ? kOk : kPropertyFailure;
}

} // namespace vcz::cli

#include "app.hpp"

#include "commands.hpp"

#include "vcz/parallel.hpp"

#include <CLI11.hpp>

#include <functional>
#include <ostream>

namespace vcz::cli {

namespace {

void add_kernel_options(CLI::App* cmd, std::string& kernel, std::string& normalization)
{
    cmd->add_option("--kernel", kernel, "model | power:G | heat:d=D[,n=P,spacing=H] | green:spec.cfg")->required();
    cmd->add_option("--normalization", normalization, "heat kernel normalization: literal | standard")
        ->capture_default_str();
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Calderon-Zygmund decompositions, Volterra singular integrals and maximal regularity experiments",
                 "volterra-cz"};
    app.require_subcommand(1);
    app.fallthrough();
    int jobs = 0;
    app.add_option("--jobs", jobs, "worker threads (default: VOLTERRA_CZ_JOBS or 1)");

    std::function<int(Context&)> action;

    DecomposeOptions dec;
    auto* decompose = app.add_subcommand("decompose", "decompose a step function at level alpha and verify it");
    decompose->add_option("--input", dec.input, "step function CSV");
    decompose->add_option("--alpha", dec.alpha, "level alpha > 0");
    decompose->add_option("--r", dec.r, "exponent of the partial-sum property")->capture_default_str();
    decompose->add_option("--report", dec.report, "JSON report path");
    decompose->add_option("--emit-parts", dec.emit_parts, "directory for g.csv and b_j.csv");
    decompose->add_option("--recheck", dec.recheck, "re-verify a stored JSON report instead");
    decompose->callback([&] { action = [&](Context& c) { return run_decompose(dec, c); }; });

    ValidateKernelOptions val;
    auto* validate = app.add_subcommand("validate-kernel", "sample a kernel condition");
    add_kernel_options(validate, val.kernel, val.normalization);
    validate->add_option("--condition", val.condition,
                         "size | holder-s | holder-t | time-derivative | hormander-s | hormander-t | "
                         "parabolic:q=Q[,m=M,alpha=A1+A2]")
        ->capture_default_str();
    validate->add_option("--tol", val.tol, "tolerance (Hormander truncation, claimed-constant slack)")
        ->capture_default_str();
    validate->add_option("--r", val.r, "spatial exponent")->capture_default_str();
    validate->add_option("--claimed", val.claimed, "constant to check against (default: the kernel's own claim)");
    validate->add_option("--min-log2", val.min_log2, "smallest separation 2^k")->capture_default_str();
    validate->add_option("--max-log2", val.max_log2, "largest separation 2^k")->capture_default_str();
    validate->add_option("--points-per-octave", val.points_per_octave)->capture_default_str();
    validate->add_option("--out", val.out, "JSON report path");
    validate->callback([&] { action = [&](Context& c) { return run_validate_kernel(val, c); }; });

    HormanderOptions hor;
    auto* hormander = app.add_subcommand("hormander", "integrated kernel difference with certified tail");
    add_kernel_options(hormander, hor.kernel, hor.normalization);
    hormander->add_option("--s", hor.s);
    hormander->add_option("--s0", hor.s0);
    hormander->add_option("--t", hor.t);
    hormander->add_option("--t0", hor.t0);
    hormander->add_option("--tol", hor.tol)->capture_default_str();
    hormander->add_option("--r", hor.r)->capture_default_str();
    hormander->add_option("--holder-constant", hor.holder_constant, "skip the Holder validator");
    hormander->add_option("--out", hor.out, "JSON report path");
    hormander->callback([&] { action = [&](Context& c) { return run_hormander(hor, c); }; });

    ApplyOptions ap;
    auto* apply = app.add_subcommand("apply", "apply T (or its transpose) off the support of f");
    add_kernel_options(apply, ap.kernel, ap.normalization);
    apply->add_option("--input", ap.input, "step function CSV")->required();
    apply->add_option("--at", ap.at, "comma-separated evaluation times")->required();
    apply->add_flag("--transpose", ap.transpose);
    apply->add_option("--out", ap.out, "JSON report path");
    apply->callback([&] { action = [&](Context& c) { return run_apply(ap, c); }; });

    SolveOptions sol;
    auto* solve = app.add_subcommand("solve", "solve u' + Au = f, u(0) = 0 exactly for step f");
    solve->add_option("--spec", sol.spec, "generator config")->required();
    solve->add_option("--input", sol.input, "step function CSV")->required();
    solve->add_option("--out", sol.out, "output directory")->required();
    solve->callback([&] { action = [&](Context& c) { return run_solve(sol, c); }; });

    AdjointOptions adj;
    auto* adjoint = app.add_subcommand("adjoint-check", "compare <Tg,f> with <g,T'f> on random separated inputs");
    add_kernel_options(adjoint, adj.kernel, adj.normalization);
    adjoint->add_option("--seed", adj.seed)->capture_default_str();
    adjoint->add_option("--pairs", adj.pairs)->capture_default_str();
    adjoint->add_option("--cells", adj.cells, "cells per input")->capture_default_str();
    adjoint->add_option("--out", adj.out, "JSON report path");
    adjoint->callback([&] { action = [&](Context& c) { return run_adjoint_check(adj, c); }; });

    SweepCommandOptions sw;
    auto* sweep = app.add_subcommand("maxreg-sweep", "estimate maximal regularity constants over (p, r, N)");
    sweep->add_option("--spec", sw.spec, "generator config")->required();
    sweep->add_option("--p", sw.p, "time exponents, e.g. 4/3,2,4")->capture_default_str();
    sweep->add_option("--r", sw.r, "space exponents")->capture_default_str();
    sweep->add_option("--trials", sw.trials, "kind[:key=value,...]")->capture_default_str();
    sweep->add_option("--refine", sw.refine, "cell counts on (0,1]")->capture_default_str();
    sweep->add_flag("--no-doubling", sw.no_doubling, "skip the doubled-horizon check");
    sweep->add_option("--out", sw.out, "JSON report path");
    sweep->add_option("--csv", sw.csv, "CSV table path");
    sweep->add_option("--plot-data", sw.plot_data, "directory for two-column plot files");
    sweep->callback([&] { action = [&](Context& c) { return run_maxreg_sweep(sw, c); }; });

    WeakTypeOptions wk;
    auto* weak = app.add_subcommand("weak-type", "weak (1,1) ratios of spike families under width halving");
    weak->add_option("--spec", wk.spec, "generator config")->required();
    weak->add_option("--trials", wk.trials)->capture_default_str();
    weak->add_option("--cells", wk.cells, "cell count on (0,1]")->capture_default_str();
    weak->add_option("--r", wk.r)->capture_default_str();
    weak->add_option("--halvings", wk.halvings)->capture_default_str();
    weak->add_option("--threshold", wk.threshold, "largest accepted relative change per halving")
        ->capture_default_str();
    weak->add_option("--out", wk.out, "JSON report path");
    weak->callback([&] { action = [&](Context& c) { return run_weak_type(wk, c); }; });

    StressOptions st;
    auto* stress = app.add_subcommand("czd-stress", "decompose and verify random step functions");
    stress->add_option("--seeds", st.seeds, "inclusive range a..b")->capture_default_str();
    stress->add_option("--alpha-scales", st.alpha_scales, "multiples of sup |f|")->capture_default_str();
    stress->add_flag("--mutate", st.mutate, "corrupt each decomposition and expect detection");
    stress->add_option("--out", st.out, "JSON report path");
    stress->callback([&] { action = [&](Context& c) { return run_czd_stress(st, c); }; });

    SelftestOptions self;
    auto* selftest = app.add_subcommand("selftest", "run the built-in example corpus");
    selftest->add_flag("--verbose", self.verbose, "print passing cases too");
    selftest->callback([&] { action = [&](Context& c) { return run_selftest(self, c); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kUsageError;
    }
    if (jobs < 0) {
        err << "error: --jobs must be nonnegative\n";
        return kUsageError;
    }

    Context ctx{out, err, resolve_jobs(jobs)};
    try {
        return action(ctx);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kPropertyFailure;
    }
}

} // namespace vcz::cli

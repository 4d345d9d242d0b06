#pragma once

#include "io.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace vcz::cli {

enum ExitCode : int { kOk = 0, kPropertyFailure = 1, kUsageError = 2 };

struct Context {
    std::ostream& out;
    std::ostream& err;
    int jobs = 1;
};

struct DecomposeOptions {
    std::string input;
    double alpha = 0.0;
    double r = 2.0;
    std::string report;
    std::string emit_parts;
    std::string recheck;
};

struct ValidateKernelOptions {
    std::string kernel;
    std::string condition = "size";
    double tol = 1e-6;
    double r = 2.0;
    std::string normalization = "literal";
    std::string out;
    std::optional<double> claimed;
    int min_log2 = -20;
    int max_log2 = 20;
    int points_per_octave = 4;
};

struct HormanderOptions {
    std::string kernel;
    std::optional<double> s;
    std::optional<double> s0;
    std::optional<double> t;
    std::optional<double> t0;
    double tol = 1e-7;
    double r = 2.0;
    std::string normalization = "literal";
    std::optional<double> holder_constant;
    std::string out;
};

struct ApplyOptions {
    std::string kernel;
    std::string input;
    std::string at;
    bool transpose = false;
    std::string normalization = "literal";
    std::string out;
};

struct SolveOptions {
    std::string spec;
    std::string input;
    std::string out;
};

struct AdjointOptions {
    std::string kernel;
    std::uint64_t seed = 0;
    int pairs = 1;
    int cells = 8;
    std::string normalization = "literal";
    std::string out;
};

struct SweepCommandOptions {
    std::string spec;
    std::string p = "2";
    std::string r = "2";
    std::string trials = "oscillatory:count=20";
    std::string refine = "64,128,256";
    std::string out;
    std::string csv;
    std::string plot_data;
    bool no_doubling = false;
};

struct WeakTypeOptions {
    std::string spec;
    std::string trials = "spikes:count=20,width=0.015625";
    std::int64_t cells = 4096;
    double r = 2.0;
    int halvings = 1;
    double threshold = 0.2;
    std::string out;
};

struct StressOptions {
    std::string seeds = "0..99";
    std::string alpha_scales = "0.1,1,10";
    bool mutate = false;
    std::string out;
};

struct SelftestOptions {
    bool verbose = false;
};

int run_decompose(const DecomposeOptions& o, Context& ctx);
int run_validate_kernel(const ValidateKernelOptions& o, Context& ctx);
int run_hormander(const HormanderOptions& o, Context& ctx);
int run_apply(const ApplyOptions& o, Context& ctx);
int run_solve(const SolveOptions& o, Context& ctx);
int run_adjoint_check(const AdjointOptions& o, Context& ctx);
int run_maxreg_sweep(const SweepCommandOptions& o, Context& ctx);
int run_weak_type(const WeakTypeOptions& o, Context& ctx);
int run_czd_stress(const StressOptions& o, Context& ctx);
int run_selftest(const SelftestOptions& o, Context& ctx);

} // namespace vcz::cli

#include "commands.hpp"

#include "vcz/experiments.hpp"
#include "vcz/kernel_validators.hpp"
#include "vcz/operator_norm.hpp"
#include "vcz/quadrature.hpp"
#include "vcz/volterra_operator.hpp"

#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <ostream>
#include <sstream>

namespace vcz::cli {

namespace {

/// Thrown by a selftest case on a mismatch.
struct Mismatch {
    std::string message;
};

void expect(bool condition, const std::string& what)
{
    if (!condition) {
        throw Mismatch{what};
    }
}

void expect_near(double actual, double expected, double tol, const std::string& what)
{
    if (!(std::abs(actual - expected) <= tol)) {
        throw Mismatch{what + ": got " + fmt(actual) + ", expected " + fmt(expected) + " +- " + fmt(tol)};
    }
}

StepFunction scalar(int level, std::vector<double> values)
{
    Eigen::MatrixXd samples = Eigen::Map<Eigen::RowVectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
    return StepFunction(TimeGrid(level, static_cast<std::int64_t>(values.size())), SpatialSpace(1, 2.0), samples);
}

std::shared_ptr<const Semigroup> scalar_semigroup(double a)
{
    return std::make_shared<const Semigroup>(Eigen::MatrixXd::Constant(1, 1, a));
}

/// K(t, s) = 1/t: constant in s.
VolterraKernel constant_in_s_kernel()
{
    VolterraKernel::Info info;
    info.name = "constant-in-s";
    const SpatialSpace space(1, 2.0);
    return VolterraKernel(info, space, space,
                          [](double t, double) { return Eigen::MatrixXd::Constant(1, 1, 1.0 / t); });
}

GeneratorSpec periodic(int m)
{
    return GeneratorSpec::constant(m, BoundaryCondition::periodic);
}

const double ln32 = std::log(1.5);

struct Case {
    const char* name;
    std::function<void()> run;
};

std::vector<Case> corpus()
{
    using std::numbers::ln2;
    return {
        {"bochner norm of zero",
         [] { expect_near(bochner_norm(scalar(0, {0.0, 0.0}), 2.0), 0.0, 0.0, "norm"); }},
        {"bochner norm of a constant vector on (0,2]",
         [] {
             Eigen::MatrixXd v(2, 2);
             v << 3.0, 3.0, 0.0, 0.0;
             const StepFunction f(TimeGrid(0, 2), SpatialSpace(2, 2.0), v);
             expect_near(bochner_norm(f, 2.0), 3.0 * std::sqrt(2.0), 1e-15, "L2 norm");
         }},
        {"bochner L1 norm of the worked example",
         [] { expect_near(bochner_norm(scalar(0, {4.0}), 1.0), 4.0, 0.0, "L1 norm"); }},
        {"weak norm of zero", [] { expect_near(weak_l1_norm(scalar(0, {0.0})), 0.0, 0.0, "weak norm"); }},
        {"weak norm of a two-level function",
         [] { expect_near(weak_l1_norm(scalar(0, {2.0, 1.0, 1.0})), 3.0, 0.0, "weak norm"); }},
        {"weak norm of a single level set",
         [] { expect_near(weak_l1_norm(scalar(-1, {5.0, 5.0, 5.0})), 7.5, 0.0, "weak norm"); }},
        {"distribution function",
         [] {
             const auto f = scalar(0, {2.0, 1.0, 1.0});
             expect_near(distribution_function(scalar(0, {0.0}), 1.0), 0.0, 0.0, "zero");
             expect_near(distribution_function(f, 1.5), 1.0, 0.0, "lambda=1.5");
             expect_near(distribution_function(f, 0.5), 3.0, 0.0, "lambda=0.5");
         }},
        {"induced norms of identity, nilpotent and shear",
         [] {
             for (double r : {1.0, 1.5, 2.0, 3.0, kInfinity}) {
                 const auto b = induced_operator_norm(Eigen::MatrixXd::Identity(3, 3), r);
                 expect(b.lower == 1.0 && b.upper == 1.0, "identity at r=" + fmt(r));
             }
             Eigen::MatrixXd n(2, 2);
             n << 0, 2, 0, 0;
             const auto bn = induced_operator_norm(n, 2.0);
             expect(bn.lower == bn.upper, "nilpotent exact");
             expect_near(bn.upper, 2.0, 1e-14, "nilpotent");
             Eigen::MatrixXd s(2, 2);
             s << 1, 1, 0, 1;
             expect_near(induced_operator_norm(s, 2.0).upper, std::numbers::phi, 1e-14, "shear");
             expect_near(interpolation_upper_bound(s, 2.0), 2.0, 1e-15, "shear interpolation");
         }},
        {"dyadic parent, children, expand, contains",
         [] {
             expect(parent(DyadicCube(0, 3)) == DyadicCube(1, 1), "parent of (3,4]");
             expect(parent(DyadicCube(0, 0)) == DyadicCube(1, 0), "parent of (0,1]");
             expect(parent(parent(DyadicCube(-1, 0))) == DyadicCube(1, 0), "grandparent of (0,1/2]");
             expect(children(DyadicCube(1, 0)) == std::pair{DyadicCube(0, 0), DyadicCube(0, 1)}, "children of (0,2]");
             expect(children(DyadicCube(1, 1)) == std::pair{DyadicCube(0, 2), DyadicCube(0, 3)}, "children of (2,4]");
             expect(expand(DyadicCube(0, 0)) == HalfOpenInterval{0.0, 1.5}, "expand (0,1]");
             expect(expand(DyadicCube(1, 1)) == HalfOpenInterval{1.0, 5.0}, "expand (2,4]");
             expect(expand(DyadicCube(0, 1)) == HalfOpenInterval{0.5, 2.5}, "expand (1,2]");
             expect(contains(DyadicCube(1, 0), DyadicCube(0, 1)), "(0,2] contains (1,2]");
             expect(!contains(DyadicCube(0, 0), DyadicCube(0, 1)), "(0,1] does not contain (1,2]");
             expect(!contains(DyadicCube(1, 1), DyadicCube(0, 0)), "(2,4] does not contain (0,1]");
         }},
        {"cube averages",
         [] {
             const auto f = scalar(0, {4.0});
             const auto a = cube_average(f, DyadicCube(1, 0));
             expect(a.vector(0) == 2.0 && a.norm == 2.0, "(0,2]");
             expect(cube_average(f, DyadicCube(2, 0)).norm == 1.0, "(0,4]");
             expect(cube_average(scalar(0, {0.0}), DyadicCube(3, 0)).norm == 0.0, "zero");
         }},
        {"worked decomposition at alpha = 1",
         [] {
             const auto f = scalar(0, {4.0});
             const auto d = decompose(f, 1.0);
             expect(d.bad.size() == 1 && d.bad[0].cube == DyadicCube(1, 0), "one bad cube (0,2]");
             expect(d.good.samples()(0, 0) == 2.0 && d.good.samples()(0, 1) == 2.0, "g = 2 on (0,2]");
             expect(d.bad[0].part.samples()(0, 0) == 2.0 && d.bad[0].part.samples()(0, 1) == -2.0, "b = (+2,-2)");
             const auto report = verify(d, f, 1.0, 2.0);
             expect(report.passed(), "verify passes");
             expect_near(bochner_norm(d.good, 1.0), 4.0, 0.0, "|g|_1");
             expect_near(bochner_norm(d.good, kInfinity), 2.0, 0.0, "|g|_inf");
             expect_near(bochner_norm(d.bad[0].part, 1.0), 4.0, 0.0, "int |b_1|");
         }},
        {"decomposition below the level keeps f",
         [] {
             const auto f = scalar(-2, {0.5, -1.0, 0.25, 1.0});
             const auto d = decompose(f, 1.0);
             expect(d.bad.empty(), "no bad cubes");
             expect(verify(d, f, 1.0, 2.0).passed(), "verify passes");
         }},
        {"decomposition of zero",
         [] {
             const auto f = scalar(0, {0.0, 0.0});
             const auto d = decompose(f, 1.0);
             expect(d.bad.empty() && d.good.is_zero(), "empty decomposition");
             expect(verify(d, f, 1.0, 2.0).passed(), "vacuous pass");
         }},
        {"mutated bad part fails the mean-zero property",
         [] {
             const auto f = scalar(0, {4.0});
             const auto d = mutate_decomposition(decompose(f, 1.0));
             const auto report = verify(d, f, 1.0, 2.0);
             bool found = false;
             for (const auto& c : report.checks) {
                 if (!c.passed && c.property.find("mean zero") != std::string::npos) {
                     found = c.witness && *c.witness == DyadicCube(1, 0);
                 }
             }
             expect(found, "mean-zero failure with witness (0,2]");
         }},
        {"model kernel evaluation and causality",
         [] {
             const auto k = model_scalar_kernel();
             expect(k(3.0, 1.0)(0, 0) == 0.5, "K(3,1)");
             expect(k(2.0, 1.5)(0, 0) == 2.0, "K(2,1.5)");
             bool threw = false;
             try {
                 (void)k(1.0, 1.0);
             } catch (const CausalityError&) {
                 threw = true;
             }
             expect(threw, "s >= t rejected");
         }},
        {"heat kernel pointwise values",
         [] {
             const double zero[] = {0.0};
             const double one[] = {1.0};
             const double c = 1.0 / std::sqrt(2.0 * std::numbers::pi);
             expect_near(heat_kernel_pointwise(1.0, zero), -0.5 * c, 1e-15, "k(1,0)");
             expect_near(heat_kernel_pointwise(1.0, one), 0.5 * std::exp(-1.0) * c, 1e-15, "k(1,1)");
         }},
        {"heat kernel integrates to zero",
         [] {
             auto k = [](double x) {
                 const double p[] = {x};
                 return heat_kernel_pointwise(1.0, p);
             };
             double total = 0.0;
             for (int i = -40; i < 40; ++i) {
                 total += integrate(k, i, i + 1.0);
             }
             expect_near(total, 0.0, 1e-8, "integral of k(1,x)");
         }},
        {"green kernel of a scalar generator",
         [] {
             const auto k = greens_kernel(scalar_semigroup(1.0));
             expect_near(k(2.0, 1.0)(0, 0), -std::exp(-1.0), 1e-15, "K(1)");
             const auto zero = greens_kernel(scalar_semigroup(0.0));
             expect(zero(2.0, 1.0).isZero(0.0), "A = 0 gives K = 0");
         }},
        {"size constants",
         [] {
             const auto model = validate_size(model_scalar_kernel());
             expect(model.estimate == 1.0 && !model.diverged, "model M0 = 1");
             const auto green = validate_size(greens_kernel_from_generator(periodic(64)));
             expect_near(green.estimate, std::exp(-1.0), 1e-6, "green M0 = 1/e");
             expect(validate_size(power_scalar_kernel(1.5)).diverged, "power 3/2 diverges");
         }},
        {"Holder constants",
         [] {
             const auto s = validate_holder_s(model_scalar_kernel());
             expect(s.estimate >= 1.9 && s.estimate <= 2.0 + 1e-12, "model M1 in [1.9, 2]: " + fmt(s.estimate));
             const auto green = greens_kernel_from_generator(periodic(16));
             expect_near(validate_holder_s(green).estimate, validate_holder_t(green).estimate, 1e-12,
                         "s and t variants agree for convolution kernels");
             expect(validate_holder_s(constant_in_s_kernel()).estimate == 0.0, "constant in s gives 0");
         }},
        {"Hormander integrals of the model kernel",
         [] {
             const auto k = model_scalar_kernel();
             for (double delta : {1e-3, 1.0, 1e3}) {
                 expect_near(hormander_integral_s(k, 1.0 + delta, 1.0, 1e-7).value, ln2, 1e-6, "s > s0");
                 expect_near(hormander_integral_s(k, 1.0, 1.0 + delta, 1e-7).value, ln32, 1e-6, "s < s0");
             }
             expect(hormander_integral_s(constant_in_s_kernel(), 2.0, 1.0, 1e-7).value == 0.0, "constant in s");
         }},
        {"parabolic estimate exponents",
         [] {
             const int none[] = {0};
             expect(parabolic_estimate_check(1, 0, none, 0.0).unbounded, "q = 0 unbounded");
             expect(!parabolic_estimate_check(1, 0, none, 1.5).unbounded, "q = 3/2 bounded");
             const double x[] = {1.0};
             for (double q : {0.0, 0.5, 1.0}) {
                 expect(std::abs(heat_kernel_pointwise(1e12, x)) * std::pow(1e12 + 1.0, q) < 1e-6,
                        "decay at x = 1 as t grows, q = " + fmt(q));
             }
         }},
        {"off-support application",
         [] {
             const auto k = model_scalar_kernel();
             const auto f = scalar(0, {1.0});
             expect_near(apply_off_support(k, f.extended(3), 2.0)(0), ln2, 1e-10, "t = 2");
             expect_near(apply_off_support(k, f.extended(3), 3.0)(0), ln32, 1e-10, "t = 3");
             const auto late = scalar(0, {0.0, 0.0, 1.0});
             expect(apply_off_support(k, late, 1.0)(0) == 0.0, "causality zero");
         }},
        {"bad part application",
         [] {
             const auto k = model_scalar_kernel();
             const auto f = scalar(0, {4.0});
             const auto d = decompose(f, 1.0);
             const auto b = d.bad[0].part.extended(4);
             const double shifted = apply_bad_part(k, b, d.bad[0].cube, 4.0)(0);
             expect_near(shifted, -2.0 * std::log(9.0 / 8.0), 1e-10, "closed form");
             expect_near(apply_off_support(k, b, 4.0)(0), shifted, 1e-10, "shifted equals unshifted");
             const auto late = scalar(0, {0.0, 0.0, 1.0, -1.0});
             expect(apply_bad_part(k, late, DyadicCube(1, 1), 1.0)(0) == 0.0, "zero before the center");
         }},
        {"parabolic solver closed forms",
         [] {
             const auto one = solve_parabolic(Semigroup(Eigen::MatrixXd::Constant(1, 1, 1.0)), scalar(-4, std::vector<double>(16, 1.0)));
             expect_near(one.nodes(0, 16), 1.0 - std::exp(-1.0), 1e-14, "u(1)");
             const auto zero = solve_parabolic(periodic(4), StepFunction(TimeGrid(-3, 8), SpatialSpace(4, 2.0)));
             expect(zero.u.is_zero() && zero.Au.is_zero(), "f = 0");
             const auto flat = solve_parabolic(Semigroup(Eigen::MatrixXd::Zero(1, 1)), scalar(-2, {3.0, 3.0, 3.0, 3.0}));
             expect_near(flat.nodes(0, 4), 3.0, 1e-15, "u = ct");
             expect(flat.transformed().samples().cwiseAbs().maxCoeff() < 1e-15, "Tf = 0");
         }},
        {"transpose application",
         [] {
             const auto k = model_scalar_kernel();
             const auto f = scalar(0, {0.0, 0.0, 1.0});
             expect_near(transpose_apply(k, f, 1.0)(0), ln2, 1e-10, "t = 1");
             expect(transpose_apply(k, scalar(0, {1.0, 0.0, 0.0}), 2.5)(0) == 0.0, "anti-causality zero");
         }},
        {"adjoint pairings",
         [] {
             const auto k = model_scalar_kernel();
             const auto c = adjoint_pairings(k, scalar(0, {1.0, 0.0, 0.0}), scalar(0, {0.0, 0.0, 1.0}));
             expect_near(c.forward, 3.0 * std::log(3.0) - 4.0 * ln2, 1e-10, "closed form");
             expect(c.discrepancy() <= 1e-10, "discrepancy");
             expect(adjoint_check(k, scalar(0, {0.0, 0.0, 0.0}), scalar(0, {0.0, 0.0, 1.0})) == 0.0, "g = 0");
             const auto green = greens_kernel_from_generator(GeneratorSpec::random_diffusion(6, BoundaryCondition::dirichlet, 4.0, 3));
             const auto [g, f] = random_separated_pair(6, 7);
             const auto rc = adjoint_pairings(green, g, f);
             expect(rc.discrepancy() <= 1e-10 * (1.0 + std::abs(rc.forward)), "random matrix kernel");
         }},
        {"energy bound at p = r = 2",
         [] {
             TrialFamily trials;
             trials.count = 20;
             trials.seed = 5;
             const auto spec = GeneratorSpec::random_diffusion(8, BoundaryCondition::dirichlet, 10.0, 1);
             const auto grid = TimeGrid::unit_horizon(64);
             const Semigroup semigroup(assemble_generator(spec));
             for (int i = 0; i < trials.count; ++i) {
                 const auto f = trials.generate(i, grid, spec.size, 2.0);
                 const auto r = trial_ratios(f, solve_parabolic(semigroup, f), 2.0, 2.0);
                 expect(r.au <= 1.0 + 1e-9 && r.total <= 2.0 + 1e-9, "trial " + std::to_string(i));
             }
         }},
        {"kernel mode input has ratio one",
         [] {
             const auto grid = TimeGrid::unit_horizon(32);
             Eigen::MatrixXd v(4, 32);
             for (int i = 0; i < 32; ++i) {
                 v.col(i).setConstant(std::sin(0.3 * i) + 0.5);
             }
             const StepFunction f(grid, SpatialSpace(4, 2.0), v);
             const auto r = trial_ratios(f, solve_parabolic(periodic(4), f), 2.0, 2.0);
             expect_near(r.total, 1.0, 1e-12, "ratio");
         }},
        {"scalar spike response",
         [] {
             const auto f = scalar(-6, [] {
                 std::vector<double> v(64, 0.0);
                 v[8] = 64.0;
                 return v;
             }());
             const auto s = solve_parabolic(Semigroup(Eigen::MatrixXd::Constant(1, 1, 1.0)), f);
             // After the spike u(t) = (1 - e^{-h}) e^{-(t - t1)} with t1 the end of the spike cell.
             const double peak = 64.0 * (1.0 - std::exp(-1.0 / 64.0));
             expect_near(s.nodes(0, 9), peak, 1e-13, "u at the end of the spike");
             expect_near(s.nodes(0, 40), peak * std::exp(-31.0 / 64.0), 1e-13, "u later");
             const double ratio = weak_l1_norm(s.transformed()) / bochner_norm(f, 1.0);
             expect(std::isfinite(ratio) && ratio > 0.0, "finite weak ratio");
         }},
        {"stress suite and mutation detection",
         [] {
             expect(czd_stress(0, 99, {0.1, 1.0, 10.0}).summary() == "100x3 pass", "100x3 pass");
             expect(czd_stress(0, 0, {1.0}).ok(), "zero input passes");
             expect(czd_stress(1, 40, {0.5, 2.0}, true).ok(), "every mutation detected");
         }},
        {"single-entry sweep",
         [] {
             TrialFamily trials;
             trials.count = 10;
             const auto report = maxreg_sweep(periodic(8), {2.0}, {2.0}, trials, {64});
             expect(report.entries.size() == 1, "one entry");
             expect(report.entries[0].constant <= 2.0 + 1e-9, "C(2,2) <= 2");
             expect(report.entries[0].au_constant <= 1.0 + 1e-9, "Au part <= 1");
         }},
    };
}

} // namespace

int run_selftest(const SelftestOptions& o, Context& ctx)
{
    int passed = 0;
    const auto cases = corpus();
    for (const auto& c : cases) {
        std::string failure;
        try {
            c.run();
        } catch (const Mismatch& m) {
            failure = m.message;
        } catch (const std::exception& e) {
            failure = std::string("exception: ") + e.what();
        }
        if (failure.empty()) {
            ++passed;
            if (o.verbose) {
                ctx.out << "PASS " << c.name << '\n';
            }
        } else {
            ctx.out << "FAIL " << c.name << ": " << failure << '\n';
        }
    }
    ctx.out << "selftest: " << passed << '/' << cases.size() << " pass\n";
    return passed == static_cast<int>(cases.size()) ? kOk : kPropertyFailure;
}

} // namespace vcz::cli

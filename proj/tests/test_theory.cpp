#include <doctest.h>

#include <cmath>

#include "lr/algo.hpp"
#include "lr/harness.hpp"
#include "lr/solution_sets.hpp"
#include "lr/theory.hpp"
#include "test_helpers.hpp"

using namespace lr;

TEST_CASE("linear_constants on the two-sided toy: closed-form eigenvalues") {
    const auto ctx = test::b2_context();
    const TheoryConstants c = linear_constants(ctx);
    // 2 Phi_w^T D Phi_w = [[6,4],[4,4]] has eigenvalues 5 -+ sqrt(17).
    CHECK(c.F_w == doctest::Approx(5.0 - std::sqrt(17.0)).epsilon(1e-10));
    CHECK(c.L == doctest::Approx(5.0 + std::sqrt(17.0)).epsilon(1e-10));
    CHECK(c.kappa1 == doctest::Approx(std::sqrt(11.0)).epsilon(1e-12));
    CHECK(c.F_w <= c.L);
    CHECK(c.F_theta > 0.0);
}

TEST_CASE("linear_constants reports exact rank deficiency") {
    const auto ctx = test::b1_context(); // d = 3 > n = 2, so the Gram matrix is singular
    const TheoryConstants c = linear_constants(ctx);
    CHECK(c.F_w == 0.0);
    const TheoryConstants d = schedule_constants(c, 400, 1);
    CHECK(!d.premise_Fw_positive);
}

TEST_CASE("linear_constants on identity features with uniform weights") {
    Vector rho = Vector::Constant(2, 0.5);
    auto mrp = validate_mrp(test::toy_transition(), test::toy_reward(), 0.5, rho);
    LossContext ctx(std::move(mrp), FeatureMap(Matrix::Identity(2, 2)),
                    FeatureMap(Matrix::Identity(2, 2)));
    const TheoryConstants c = linear_constants(ctx);
    CHECK(c.F_w == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.L == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("schedule_constants: geometric decay of a and the K_L limit") {
    const auto ctx = test::b2_context();
    const TheoryConstants base = linear_constants(ctx);
    const TheoryConstants small = schedule_constants(base, 5, 1);
    const TheoryConstants large = schedule_constants(base, 2000, 1);
    CHECK(small.a > large.a);
    CHECK(large.a == doctest::Approx(0.0).epsilon(1e-30));
    // a -> 0 limit: A -> 1 + eta^2 and zeta -> eta^2.
    CHECK(large.A == doctest::Approx(1.0 + large.eta * large.eta).epsilon(1e-10));
    CHECK(large.zeta == doctest::Approx(large.eta * large.eta).epsilon(1e-10));
}

TEST_CASE("schedule_constants degenerates cleanly at F_w = 0") {
    const auto ctx = test::b1_context();
    const TheoryConstants c = schedule_constants(linear_constants(ctx), 400, 1);
    CHECK(c.kappa == 0.0);
    CHECK(c.a == 1.0);
    CHECK(c.zeta == 1.0);
    CHECK(std::isnan(c.J));
    CHECK(std::isnan(c.beta0));
    CHECK(std::isnan(c.sigma));
    CHECK(!c.theorem_applicable());
    CHECK(!c.notes.empty());
}

TEST_CASE("schedule_constants is a pure function") {
    const auto ctx = test::b2_context();
    const TheoryConstants base = linear_constants(ctx);
    const TheoryConstants c1 = schedule_constants(base, 17, 3);
    const TheoryConstants c2 = schedule_constants(base, 17, 3);
    auto same = [](double a, double b) {
        return (std::isnan(a) && std::isnan(b)) || a == b;
    };
    CHECK(same(c1.kappa, c2.kappa));
    CHECK(same(c1.eta, c2.eta));
    CHECK(same(c1.a, c2.a));
    CHECK(same(c1.zeta, c2.zeta));
    CHECK(same(c1.beta0, c2.beta0));
    CHECK(same(c1.beta_k, c2.beta_k));
    CHECK(same(c1.sigma, c2.sigma));
    CHECK(c1.notes == c2.notes);
}

TEST_CASE("a sits in [0,1) exactly when F_w > 0, for K_L >= 1") {
    for (int seed = 0; seed < 10; ++seed) {
        const GeneratedInstance inst = generate_instance(seed, 5, 3);
        const LossContext ctx = inst.make_context();
        const TheoryConstants c = schedule_constants(linear_constants(ctx), 8, 1);
        REQUIRE(c.F_w > 0.0);
        CHECK(c.a >= 0.0);
        CHECK(c.a < 1.0);
    }
    const TheoryConstants degenerate =
        schedule_constants(linear_constants(test::b1_context()), 8, 1);
    CHECK(degenerate.F_w == 0.0);
    CHECK(degenerate.a == 1.0);
}

TEST_CASE("F_w never exceeds 2 kappa1^2 and the 7 kappa1^2 gate stays shut") {
    // Exact linear parameterizations with a probability-diagonal weight matrix
    // keep lambda_min(2 Phi^T D Phi) <= 2 sigma_max(Phi)^2; the report has to
    // say so instead of pretending the contraction gate could open.
    for (int seed = 0; seed < 30; ++seed) {
        const GeneratedInstance inst = generate_instance(1000 + seed, 6, 4);
        const LossContext ctx = inst.make_context();
        const TheoryConstants c = schedule_constants(linear_constants(ctx), 10, 1);
        CHECK(c.F_w <= 2.0 * c.kappa1 * c.kappa1 + 1e-9);
        CHECK(c.fw_le_2kappa1sq);
        CHECK(!c.premise_Fw_gt_7kappa1sq);
        CHECK(!c.theorem_applicable());
    }
}

TEST_CASE("schedule algebra on a synthetic base that passes every gate") {
    // No exact linear instance can reach these constants, but the formulas
    // must still behave when the premises hold.
    TheoryConstants base;
    base.F_w = 10.0;
    base.L = 12.0;
    base.F_theta = 1.0;
    base.kappa1 = 1.0;
    const TheoryConstants c = schedule_constants(base, 3, 4);

    CHECK(c.theorem_applicable());
    CHECK(c.A > 1.0);
    CHECK(c.A < 2.0);
    CHECK(c.B > 3.0 * c.A);
    CHECK(c.J >= 6.0);
    CHECK(c.beta0 > 0.0);
    CHECK(c.beta_k > 0.0);
    CHECK(c.E_factor > 0.0);
    CHECK(c.E_factor < 1.0);
    CHECK(c.G_factor > 0.0);
    CHECK(c.G_factor < 1.0);
    CHECK(c.sigma_sq_first == doctest::Approx(std::max(c.E_factor, c.G_factor)));
    CHECK(c.sigma_sq_later > 0.0);
    CHECK(c.sigma_sq_later < 1.0);
    CHECK(c.sigma > 0.0);
    CHECK(c.sigma < 1.0);

    // x = beta0 kappa1^2 must satisfy the defining quadratic identity
    // E = (1/(8A)) [ (B - 8Ax)^2 - (B^2 - 8A^2) ].
    const double x = c.beta0 * c.kappa1 * c.kappa1;
    const double e_alt =
        ((c.B - 8.0 * c.A * x) * (c.B - 8.0 * c.A * x) - (c.B * c.B - 8.0 * c.A * c.A)) /
        (8.0 * c.A);
    CHECK(c.E_factor == doctest::Approx(e_alt).epsilon(1e-12));
}

namespace {

struct VerifiedRun {
    LossContext ctx;
    Trajectory trajectory;
    TheoryConstants constants;
    ParamPair reference;
};

VerifiedRun make_verified_run(int seed, int T = 20, int K_L = 10, int K_R = 2) {
    const GeneratedInstance inst = generate_instance(seed, 5, 3);
    LossContext ctx = inst.make_context();

    Hyperparams hp;
    hp.T = T;
    hp.K_L = K_L;
    hp.K_R = K_R;
    hp.alpha = Alpha::one_over_l();
    hp.beta = Beta::quarter_kappa_default();

    RunOptions options;
    options.instrument = true;

    Rng rng = Rng(seed).split(99);
    ParamPair init{test::random_vector(rng, 3, 2.0), test::random_vector(rng, 3, 2.0)};
    Trajectory trajectory = run_lr(ctx, init, hp, options);

    const AffineSet f_value = solve_f_value(ctx);
    ParamPair reference{f_value.particular.head(3), f_value.particular.tail(3)};
    TheoryConstants constants = schedule_constants(linear_constants(ctx), K_L, K_R);
    return VerifiedRun{std::move(ctx), std::move(trajectory), std::move(constants),
                       std::move(reference)};
}

} // namespace

TEST_CASE("verify_lemmas: all slacks stay within tolerance on generated instances") {
    for (int seed = 0; seed < 10; ++seed) {
        const VerifiedRun run = make_verified_run(seed);
        const LemmaReport report =
            verify_lemmas(run.ctx, run.trajectory, run.constants, run.reference);
        CHECK(report.pass);
        CHECK(report.max_slack <= report.tol);
        CHECK(report.slack_descent.size() == 20 * 10);
        CHECK(report.slack_inner_step.size() == 20 * 10);
        CHECK(report.slack_outer_step.size() == 20);
    }
}

TEST_CASE("verify_lemmas: a run started at the reference keeps every slack nonpositive") {
    VerifiedRun run = make_verified_run(3, 5, 6, 1);
    Hyperparams hp;
    hp.T = 5;
    hp.K_L = 6;
    hp.K_R = 1;
    hp.alpha = Alpha::one_over_l();
    hp.beta = Beta::quarter_kappa_default();
    RunOptions options;
    options.instrument = true;
    const Trajectory at_ref = run_lr(run.ctx, run.reference, hp, options);
    const LemmaReport report = verify_lemmas(run.ctx, at_ref, run.constants, run.reference);
    CHECK(report.pass);
    CHECK(report.max_slack <= 0.0 + 1e-15);
}

TEST_CASE("verify_lemmas enforces its preconditions") {
    VerifiedRun run = make_verified_run(4);

    SUBCASE("wrong alpha") {
        Trajectory t = run.trajectory;
        t.resolved_alpha = 2.0 / run.constants.L;
        CHECK_THROWS_AS(verify_lemmas(run.ctx, t, run.constants, run.reference), Error);
    }
    SUBCASE("F_w = 0") {
        TheoryConstants degenerate = run.constants;
        degenerate.F_w = 0.0;
        CHECK_THROWS_AS(verify_lemmas(run.ctx, run.trajectory, degenerate, run.reference), Error);
    }
    SUBCASE("reference outside the solution set") {
        ParamPair bad = run.reference;
        bad.theta(0) += 0.1;
        CHECK_THROWS_AS(verify_lemmas(run.ctx, run.trajectory, run.constants, bad), Error);
    }
    SUBCASE("missing instrumentation") {
        Trajectory t = run.trajectory;
        t.inner.reset();
        CHECK_THROWS_AS(verify_lemmas(run.ctx, t, run.constants, run.reference), Error);
    }
}

TEST_CASE("empirical_contraction flags a stationary trajectory as converged") {
    const auto ctx = test::b1_context();
    const AffineSet f_value = solve_f_value(ctx);
    ParamPair ref{f_value.particular.head(3), f_value.particular.tail(3)};

    Hyperparams hp;
    hp.T = 5;
    hp.K_L = 3;
    hp.K_R = 1;
    const Trajectory trajectory = run_lr(ctx, ref, hp);
    const ContractionReport report = empirical_contraction(trajectory, ref, std::sqrt(11.0));
    for (bool flag : report.converged) CHECK(flag);
}

TEST_CASE("empirical_contraction on the two-sided toy run") {
    const auto ctx = test::b2_context();
    Hyperparams hp;
    hp.T = 800;
    hp.K_L = 400;
    hp.K_R = 1;
    hp.alpha = Alpha::one_over_l();
    hp.beta = Beta::scalar(1.0 / 44.0);
    Vector theta0(3), w0(2);
    theta0 << 1.2, 0, 0.3;
    w0 << 0.3, 0.6;
    const Trajectory trajectory = run_lr(ctx, ParamPair{theta0, w0}, hp);

    // Reference: the limit point, i.e. the projection of the final iterate
    // onto the value-equivalent set.
    const AffineSet f_value = solve_f_value(ctx);
    Vector final_stacked(5);
    final_stacked << trajectory.final().theta, trajectory.final().w;
    const Vector proj = membership_and_distance(f_value, final_stacked).projection;
    ParamPair ref{proj.head(3), proj.tail(2)};

    const TheoryConstants c = linear_constants(ctx);
    const ContractionReport report = empirical_contraction(trajectory, ref, c.kappa1);
    REQUIRE(report.ratios.size() == 800);
    for (std::size_t t = 0; t < report.ratios.size(); ++t) {
        if (!report.converged[t]) CHECK(report.ratios[t] < 1.0);
    }
    CHECK(report.max_ratio < 1.0);
    CHECK(report.corollary_shape_ok);
}

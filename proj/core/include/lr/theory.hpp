#pragma once

#include <string>
#include <vector>

#include "lr/losses.hpp"
#include "lr/trajectory.hpp"

namespace lr {

/**
 * Closed-form constants of the convergence analysis, specialized to linear
 * feature maps, plus the step-size schedule and contraction factor built from
 * them.
 *
 * Base fields come from linear_constants; the derived fields are filled by
 * schedule_constants. A derived quantity whose defining expression fails
 * (negative discriminant, division by zero) is left NaN and the reason is
 * appended to `notes` — premise failures are reported, never thrown.
 */
struct TheoryConstants {
    // base (linear_constants)
    double F_w = 0.0;     // strong-convexity modulus of H in w: lambda_min(2 Phi_w^T D Phi_w)
    double L = 0.0;       // gradient Lipschitz modulus of H in w: lambda_max(2 Phi_w^T D Phi_w)
    double F_theta = 0.0; // cross-Lipschitz modulus of grad_w H in theta
    double kappa1 = 0.0;  // value-map Lipschitz bound, max over the two feature maps

    // derived (schedule_constants)
    int K_L = 0;
    int K_R = 0;
    double kappa = 0.0;   // F_w / L
    double eta = 0.0;     // F_theta / F_w
    double a = 1.0;       // (max(1-kappa,0))^{K_L}
    double zeta = 1.0;    // max{a, eta^2 (1-a)}
    double A = 0.0;       // 1 + eta^2 (1-a)
    double B = 0.0;       // F_w / kappa1^2 - A
    double J = 0.0;       // 2 F_w (1-zeta) / kappa1^2 - 2
    double beta0 = 0.0;   // (1/kappa1^2) (A-1) / (B + sqrt(B^2 - 8A^2))
    double beta_k = 0.0;  // (1/kappa1^2) (3J + sqrt(J^2 - 32)) / 32, inner steps k >= 1
    double E_factor = 0.0;        // 8Ax^2 - 2Bx + A at x = beta0 kappa1^2
    double G_factor = 0.0;        // 8ax^2 + 2ax + a at x = beta0 kappa1^2
    double sigma_sq_first = 0.0;  // max(E, G): squared factor of the first inner step
    double sigma_sq_later = 0.0;  // 1 - Jx' + 8x'^2 at x' = beta_k kappa1^2, steps k >= 2
    double sigma = 0.0;           // unsquared per-outer-iteration contraction factor

    // premise flags for the contraction theorem
    bool premise_Fw_positive = false;
    bool premise_Fw_gt_Ftheta = false;
    bool premise_Fw_gt_7kappa1sq = false;
    bool premise_Fw_gt_4kappa1sq_over_1mzeta = false;
    bool premise_B2_ge_8A2 = false;

    // Linear maps with a probability-diagonal D always satisfy F_w <= 2 kappa1^2,
    // which keeps the F_w > 7 kappa1^2 gate out of reach; reported explicitly.
    bool fw_le_2kappa1sq = true;

    bool schedule_derived = false; // schedule_constants ran
    std::vector<std::string> notes;

    bool theorem_applicable() const {
        return premise_Fw_positive && premise_Fw_gt_Ftheta && premise_Fw_gt_7kappa1sq &&
               premise_Fw_gt_4kappa1sq_over_1mzeta && premise_B2_ge_8A2;
    }
};

/// Base constants for the linear case. Eigenvalues of 2 Phi_w^T D Phi_w below
/// 1e-12 * lambda_max are clamped to exactly zero, so rank deficiency reports
/// F_w = 0 rather than rounding noise.
TheoryConstants linear_constants(const LossContext& ctx);

/// Fills the derived schedule fields for the given inner-step counts.
/// Pure: identical inputs produce identical outputs.
TheoryConstants schedule_constants(TheoryConstants base, int K_L, int K_R);

/**
 * Per-step verification report for the three descent/contraction inequalities
 * of the analysis. Slacks are (lhs - rhs) / max(1, |lhs|, |rhs|); the checks
 * are exact theorems under the preconditions, so positive slack beyond
 * floating-point headroom is an implementation bug.
 */
struct LemmaReport {
    std::vector<double> slack_descent;       // per (t,k): loss-gap bound from the descent step
    std::vector<double> slack_inner_step;    // per (t,k): one-step distance contraction
    std::vector<double> slack_outer_step;    // per t: K_L-step distance contraction
    double max_slack = 0.0;
    double tol = 1e-8;
    ParamPair reference;
    bool pass = false;
};

/**
 * Evaluates the three lemma inequalities on an instrumented trajectory against
 * a reference point in the value-equivalent solution set.
 *
 * Preconditions (PreconditionViolated otherwise): the trajectory used
 * alpha = 1/L, F_w > 0, and the reference satisfies both defining constraints
 * within 1e-9.
 */
LemmaReport verify_lemmas(const LossContext& ctx, const Trajectory& trajectory,
                          const TheoryConstants& constants, const ParamPair& reference,
                          double tol = 1e-8);

struct ContractionReport {
    std::vector<double> ratios;     // dist(t+1)/dist(t); NaN where flagged converged
    std::vector<bool> converged;    // dist(t) below the division guard
    double max_ratio = 0.0;         // over non-converged steps
    bool corollary_shape_ok = false; // value_gap(t) <= sqrt(2) kappa1 max_ratio^{t-1} dist(0)
};

/// Per-step distance ratios to a reference pair, with a division guard at
/// dist < 1e-14, plus the value-gap envelope check with the empirical ratio
/// substituted for the theoretical factor.
ContractionReport empirical_contraction(const Trajectory& trajectory, const ParamPair& reference,
                                        double kappa1);

} // namespace lr

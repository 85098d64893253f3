#include "lr/theory.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <limits>

namespace lr {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double spectral_norm(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

} // namespace

TheoryConstants linear_constants(const LossContext& ctx) {
    TheoryConstants c;
    const auto& mrp = ctx.mrp();
    const Matrix& phi_w = ctx.features_w().matrix();
    const Matrix& phi_t = ctx.features_theta().matrix();
    const auto D = mrp.state_weights().asDiagonal();

    const Matrix M = 2.0 * phi_w.transpose() * (D * phi_w);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(M);
    const Vector& ev = eig.eigenvalues();
    c.L = ev(ev.size() - 1);
    double fw = ev(0);
    // Rank deficiency shows up as eigenvalues at rounding-noise scale; report
    // those as exactly zero so the F_w > 0 premise flag is trustworthy.
    if (std::abs(fw) < 1e-12 * std::max(1.0, c.L)) fw = 0.0;
    c.F_w = fw;

    c.F_theta = 2.0 * mrp.discount() * spectral_norm(phi_w.transpose() * (D * (mrp.transition() * phi_t)));
    c.kappa1 = std::max(lipschitz_bound(ctx.features_theta()), lipschitz_bound(ctx.features_w()));
    return c;
}

TheoryConstants schedule_constants(TheoryConstants base, int K_L, int K_R) {
    TheoryConstants c = std::move(base);
    c.K_L = K_L;
    c.K_R = K_R;
    c.schedule_derived = true;
    c.notes.clear();

    const double k1sq = c.kappa1 * c.kappa1;
    if (k1sq <= 0.0) {
        c.notes.emplace_back("kappa1 = 0 (all-zero feature maps): schedule undefined");
        c.kappa = c.eta = c.zeta = c.A = c.B = c.J = kNaN;
        c.a = 1.0;
        c.beta0 = c.beta_k = c.E_factor = c.G_factor = kNaN;
        c.sigma_sq_first = c.sigma_sq_later = c.sigma = kNaN;
        return c;
    }

    c.fw_le_2kappa1sq = c.F_w <= 2.0 * k1sq * (1.0 + 1e-12);
    c.premise_Fw_positive = c.F_w > 0.0;
    c.premise_Fw_gt_Ftheta = c.F_w > c.F_theta;
    c.premise_Fw_gt_7kappa1sq = c.F_w > 7.0 * k1sq;

    if (c.F_w <= 0.0) {
        c.kappa = 0.0;
        c.a = 1.0;
        c.zeta = 1.0;
        c.eta = kNaN;
        c.A = 1.0;
        c.B = c.F_w / k1sq - c.A;
        c.J = kNaN;
        c.beta0 = c.beta_k = c.E_factor = c.G_factor = kNaN;
        c.sigma_sq_first = c.sigma_sq_later = c.sigma = kNaN;
        c.notes.emplace_back("F_w = 0: eta, J and the step-size schedule are undefined");
        c.premise_Fw_gt_4kappa1sq_over_1mzeta = false;
        c.premise_B2_ge_8A2 = false;
        return c;
    }

    c.kappa = c.F_w / c.L;
    c.eta = c.F_theta / c.F_w;
    c.a = std::pow(std::max(1.0 - c.kappa, 0.0), K_L);
    // At a = 1 the factor (1-a) kills the eta^2 term regardless of eta.
    const double eta_term = c.a >= 1.0 ? 0.0 : c.eta * c.eta * (1.0 - c.a);
    c.zeta = std::max(c.a, eta_term);
    c.A = 1.0 + eta_term;
    c.B = c.F_w / k1sq - c.A;
    c.J = 2.0 * c.F_w * (1.0 - c.zeta) / k1sq - 2.0;

    c.premise_Fw_gt_4kappa1sq_over_1mzeta =
        c.zeta < 1.0 && c.F_w > 4.0 * k1sq / (1.0 - c.zeta);
    const double disc0 = c.B * c.B - 8.0 * c.A * c.A;
    c.premise_B2_ge_8A2 = disc0 >= 0.0;

    if (disc0 >= 0.0 && c.B > 0.0 && c.A > 1.0) {
        c.beta0 = (c.A - 1.0) / (k1sq * (c.B + std::sqrt(disc0)));
        const double x = c.beta0 * k1sq;
        c.E_factor = 8.0 * c.A * x * x - 2.0 * c.B * x + c.A;
        c.G_factor = 8.0 * c.a * x * x + 2.0 * c.a * x + c.a;
        c.sigma_sq_first = std::max(c.E_factor, c.G_factor);
    } else {
        c.beta0 = c.E_factor = c.G_factor = c.sigma_sq_first = kNaN;
        if (disc0 < 0.0) {
            c.notes.emplace_back("beta0 undefined: B^2 - 8A^2 < 0 (sqrt imaginary)");
        } else if (c.B <= 0.0) {
            c.notes.emplace_back("beta0 undefined: B <= 0");
        } else {
            c.notes.emplace_back("beta0 degenerate: A = 1 gives a zero step");
        }
    }

    const double discK = c.J * c.J - 32.0;
    if (c.J > 0.0 && discK >= 0.0) {
        c.beta_k = (3.0 * c.J + std::sqrt(discK)) / (32.0 * k1sq);
        const double xk = c.beta_k * k1sq;
        c.sigma_sq_later = 1.0 - c.J * xk + 8.0 * xk * xk;
    } else {
        c.beta_k = c.sigma_sq_later = kNaN;
        c.notes.emplace_back("beta_k undefined: J < sqrt(32) makes sqrt(J^2 - 32) imaginary");
    }

    const double sigma_sq = K_R <= 1 ? c.sigma_sq_first : c.sigma_sq_later;
    c.sigma = sigma_sq >= 0.0 ? std::sqrt(sigma_sq) : kNaN;
    if (!c.theorem_applicable()) {
        c.notes.emplace_back("contraction-theorem premises unsatisfied: sigma check not applicable");
    }
    if (c.fw_le_2kappa1sq) {
        c.notes.emplace_back(
            "F_w <= 2 kappa1^2 holds for every linear map with a probability-diagonal weight "
            "matrix, so the F_w > 7 kappa1^2 gate cannot be met by such instances");
    }
    return c;
}

namespace {

void require_reference_in_fvalue(const LossContext& ctx, const ParamPair& ref) {
    const Vector v_theta = ctx.value_theta(ref.theta);
    const Vector v_w = ctx.value_w(ref.w);
    const Vector bellman = bellman_apply(ctx.mrp(), v_theta);
    const double scale = std::max(1.0, std::max(v_theta.lpNorm<Eigen::Infinity>(),
                                                v_w.lpNorm<Eigen::Infinity>()));
    if ((v_w - bellman).lpNorm<Eigen::Infinity>() > 1e-9 * scale ||
        (v_theta - v_w).lpNorm<Eigen::Infinity>() > 1e-9 * scale) {
        raise(ErrorCode::PreconditionViolated,
              "reference pair does not satisfy the value-equivalence constraints within 1e-9");
    }
}

double scaled_slack(double lhs, double rhs) {
    return (lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

} // namespace

LemmaReport verify_lemmas(const LossContext& ctx, const Trajectory& trajectory,
                          const TheoryConstants& constants, const ParamPair& reference,
                          double tol) {
    if (constants.F_w <= 0.0) {
        raise(ErrorCode::PreconditionViolated, "lemma verification requires F_w > 0");
    }
    if (!trajectory.inner.has_value()) {
        raise(ErrorCode::PreconditionViolated, "lemma verification requires an instrumented trajectory");
    }
    const double alpha_star = 1.0 / constants.L;
    if (std::abs(trajectory.resolved_alpha - alpha_star) > 1e-12 * std::max(1.0, alpha_star)) {
        raise(ErrorCode::PreconditionViolated, "lemma verification requires alpha = 1/L");
    }
    require_reference_in_fvalue(ctx, reference);

    LemmaReport report;
    report.tol = tol;
    report.reference = reference;

    const double F_w = constants.F_w;
    const double L = constants.L;
    const double F_theta = constants.F_theta;
    const double kappa = F_w / L;
    const double eta = F_theta / F_w;
    const auto& inner = *trajectory.inner;

    double max_slack = -std::numeric_limits<double>::infinity();
    auto push = [&max_slack](std::vector<double>& sink, double lhs, double rhs) {
        const double s = scaled_slack(lhs, rhs);
        sink.push_back(s);
        max_slack = std::max(max_slack, s);
    };

    for (std::size_t t = 0; t < inner.w_inner.size(); ++t) {
        const Vector& theta_t = trajectory.records[t].theta;
        const auto& steps = inner.w_inner[t];
        if (steps.size() < 2) continue;
        const int K_L = static_cast<int>(steps.size()) - 1;

        const double theta_gap_sq = (theta_t - reference.theta).squaredNorm();
        const double h_at_ref = loss_h(ctx, theta_t, reference.w);

        for (int k = 0; k < K_L; ++k) {
            const Vector& w_k = steps[k];
            const Vector& w_next = steps[k + 1];

            // Loss-gap bound: H(theta, w*) - H(theta, w^{t,k}) stays below the
            // cross-term allowance minus the descent made by the step.
            const double lhs1 = h_at_ref - loss_h(ctx, theta_t, w_k);
            const double rhs1 = F_theta * F_theta / (2.0 * F_w) * theta_gap_sq -
                                (1.0 / trajectory.resolved_alpha - L / 2.0) *
                                    (w_next - w_k).squaredNorm();
            push(report.slack_descent, lhs1, rhs1);

            // One-step contraction toward the reference online parameter.
            const double lhs2 = (w_next - reference.w).squaredNorm();
            const double rhs2 = (1.0 - kappa) * (w_k - reference.w).squaredNorm() +
                                eta * eta * kappa * theta_gap_sq;
            push(report.slack_inner_step, lhs2, rhs2);
        }

        // K_L-step contraction of the full inner loop.
        const double a_t = std::pow(std::max(1.0 - kappa, 0.0), K_L);
        const double lhs3 = (steps.back() - reference.w).squaredNorm();
        const double rhs3 = a_t * (steps.front() - reference.w).squaredNorm() +
                            eta * eta * (1.0 - a_t) * theta_gap_sq;
        push(report.slack_outer_step, lhs3, rhs3);
    }

    report.max_slack = max_slack;
    report.pass = max_slack <= tol;
    return report;
}

ContractionReport empirical_contraction(const Trajectory& trajectory, const ParamPair& reference,
                                        double kappa1) {
    ContractionReport report;
    const auto& records = trajectory.records;
    if (records.empty()) return report;

    auto dist = [&reference](const TrajectoryRecord& rec) {
        return std::sqrt((rec.theta - reference.theta).squaredNorm() +
                         (rec.w - reference.w).squaredNorm());
    };

    constexpr double kGuard = 1e-14;
    double max_ratio = 0.0;
    for (std::size_t t = 0; t + 1 < records.size(); ++t) {
        const double d = dist(records[t]);
        if (d < kGuard) {
            report.ratios.push_back(kNaN);
            report.converged.push_back(true);
            continue;
        }
        const double ratio = dist(records[t + 1]) / d;
        report.ratios.push_back(ratio);
        report.converged.push_back(false);
        max_ratio = std::max(max_ratio, ratio);
    }
    report.max_ratio = max_ratio;

    // Value-gap envelope with the observed worst ratio in place of sigma.
    const double d0 = dist(records.front());
    bool shape_ok = true;
    for (std::size_t t = 1; t < records.size(); ++t) {
        const double bound = std::sqrt(2.0) * kappa1 *
                             std::pow(max_ratio, static_cast<double>(t) - 1.0) * d0;
        if (records[t].value_gap > bound + 1e-12) {
            shape_ok = false;
            break;
        }
    }
    report.corollary_shape_ok = shape_ok;
    return report;
}

} // namespace lr

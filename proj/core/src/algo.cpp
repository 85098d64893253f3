#include "lr/algo.hpp"

#include <cmath>
#include <sstream>

namespace lr {

void Hyperparams::validate() const {
    if (T < 0 || K_L < 0 || K_R < 0) {
        raise(ErrorCode::SchemaError, "iteration counts T, K_L, K_R must be nonnegative");
    }
    if (!alpha.use_one_over_l && !(alpha.value > 0.0)) {
        raise(ErrorCode::SchemaError, "alpha must be positive");
    }
    if (beta.kind == Beta::Kind::Scalar && !(beta.value > 0.0)) {
        raise(ErrorCode::SchemaError, "beta must be positive");
    }
    if (beta.kind == Beta::Kind::Schedule) {
        for (double b : beta.values) {
            if (!(b > 0.0)) raise(ErrorCode::SchemaError, "beta schedule entries must be positive");
        }
    }
    if (!(tau >= 0.0 && tau <= 1.0)) {
        raise(ErrorCode::SchemaError, "tau must lie in [0, 1]");
    }
}

namespace {

void check_finite(const Vector& iterate, const char* which) {
    if (!iterate.allFinite()) {
        raise(ErrorCode::NonFiniteIterate,
              std::string(which) + " iterate left the finite range (step size too large?)");
    }
}

} // namespace

Vector lookahead(const LossContext& ctx, const Vector& theta, Vector w, double alpha, int steps,
                 std::vector<Vector>* trace) {
    if (trace) trace->push_back(w);
    for (int k = 0; k < steps; ++k) {
        w -= alpha * grad_h_w(ctx, theta, w);
        check_finite(w, "lookahead");
        if (trace) trace->push_back(w);
    }
    return w;
}

Vector replicate(const LossContext& ctx, const Vector& w, Vector theta,
                 const std::vector<double>& beta_schedule, int steps,
                 std::vector<Vector>* trace) {
    if (steps > 0 && beta_schedule.empty()) {
        raise(ErrorCode::SchemaError, "replicate needs at least one step size");
    }
    if (trace) trace->push_back(theta);
    for (int k = 0; k < steps; ++k) {
        const double beta =
            static_cast<std::size_t>(k) < beta_schedule.size() ? beta_schedule[k] : beta_schedule.back();
        theta -= beta * grad_g_theta(ctx, theta, w);
        check_finite(theta, "replicate");
        if (trace) trace->push_back(theta);
    }
    return theta;
}

double resolve_alpha(const LossContext& ctx, const Alpha& alpha) {
    if (!alpha.use_one_over_l) return alpha.value;
    const TheoryConstants base = linear_constants(ctx);
    if (!(base.L > 0.0)) {
        raise(ErrorCode::PreconditionViolated, "alpha = 1/L is undefined for an all-zero online feature map");
    }
    return 1.0 / base.L;
}

std::vector<double> resolve_beta(const LossContext& ctx, const Beta& beta, int K_L, int K_R) {
    const int len = std::max(K_R, 1);
    switch (beta.kind) {
    case Beta::Kind::Scalar:
        return std::vector<double>(len, beta.value);
    case Beta::Kind::Schedule: {
        if (static_cast<int>(beta.values.size()) < K_R) {
            std::ostringstream os;
            os << "beta schedule has " << beta.values.size() << " entries but K_R = " << K_R;
            raise(ErrorCode::SchemaError, os.str());
        }
        return beta.values;
    }
    case Beta::Kind::Default: {
        const TheoryConstants base = linear_constants(ctx);
        if (!(base.kappa1 > 0.0)) {
            raise(ErrorCode::PreconditionViolated, "default beta is undefined for all-zero feature maps");
        }
        return std::vector<double>(len, 1.0 / (4.0 * base.kappa1 * base.kappa1));
    }
    case Beta::Kind::Theorem: {
        const TheoryConstants c = schedule_constants(linear_constants(ctx), K_L, K_R);
        if (!c.theorem_applicable()) {
            std::string why = "theorem step sizes require the contraction premises";
            for (const auto& note : c.notes) why += "; " + note;
            raise(ErrorCode::PremiseViolated, why);
        }
        std::vector<double> schedule(len, c.beta_k);
        schedule[0] = c.beta0;
        return schedule;
    }
    }
    raise(ErrorCode::SchemaError, "unknown beta kind");
}

namespace {

enum class TargetUpdate { Replicate, HardCopy, Polyak };

TrajectoryRecord make_record(const LossContext& ctx, int t, const Vector& theta, const Vector& w,
                             const DistanceHook& dist) {
    TrajectoryRecord rec;
    rec.t = t;
    rec.theta = theta;
    rec.w = w;
    rec.h_loss = loss_h(ctx, theta, w);
    rec.g_loss = loss_g(ctx, theta, w);
    rec.bellman_residual = std::sqrt(rec.h_loss);
    rec.value_gap = std::sqrt(rec.g_loss);
    if (dist) rec.dist_fvalue = dist(theta, w);
    return rec;
}

Trajectory run_loop(const LossContext& ctx, const ParamPair& init, const Hyperparams& hp,
                    TargetUpdate update, const RunOptions& options) {
    hp.validate();
    if (init.theta.size() != ctx.dim_theta() || init.w.size() != ctx.dim_w()) {
        raise(ErrorCode::DimensionMismatch, "initial parameters do not match the feature dimensions");
    }
    if (update != TargetUpdate::Replicate && ctx.dim_theta() != ctx.dim_w()) {
        raise(ErrorCode::SpaceMismatch,
              "parameter copying requires equal theta and w dimensions; only the replicate "
              "update supports distinct parameter spaces");
    }

    Trajectory out;
    out.resolved_alpha = resolve_alpha(ctx, hp.alpha);
    out.resolved_beta = update == TargetUpdate::Replicate
                            ? resolve_beta(ctx, hp.beta, hp.K_L, hp.K_R)
                            : std::vector<double>{};
    if (options.instrument) out.inner.emplace();

    const bool sampled = options.gradients.mode == GradientOptions::Mode::Sampled;
    Rng run_rng(options.gradients.seed);

    Vector theta = init.theta;
    Vector w = init.w;
    out.records.push_back(make_record(ctx, 0, theta, w, options.dist_fvalue));

    for (int t = 0; t < hp.T; ++t) {
        std::vector<Vector>* w_trace = nullptr;
        std::vector<Vector>* theta_trace = nullptr;
        if (out.inner) {
            w_trace = &out.inner->w_inner.emplace_back();
            theta_trace = &out.inner->theta_inner.emplace_back();
        }

        if (!sampled) {
            w = lookahead(ctx, theta, std::move(w), out.resolved_alpha, hp.K_L, w_trace);
        } else {
            // Each phase owns an rng stream split from the run seed; the
            // draws do not depend on instrumentation or record layout.
            Rng phase = run_rng.split(2 * static_cast<std::uint64_t>(t));
            if (w_trace) w_trace->push_back(w);
            for (int k = 0; k < hp.K_L; ++k) {
                w -= out.resolved_alpha *
                     sampled_grad_h_w(ctx, theta, w, phase, options.gradients.batch_size);
                check_finite(w, "lookahead");
                if (w_trace) w_trace->push_back(w);
            }
        }

        switch (update) {
        case TargetUpdate::Replicate:
            if (!sampled) {
                theta = replicate(ctx, w, std::move(theta), out.resolved_beta, hp.K_R, theta_trace);
            } else {
                Rng phase = run_rng.split(2 * static_cast<std::uint64_t>(t) + 1);
                if (theta_trace) theta_trace->push_back(theta);
                for (int k = 0; k < hp.K_R; ++k) {
                    const double beta = static_cast<std::size_t>(k) < out.resolved_beta.size()
                                            ? out.resolved_beta[k]
                                            : out.resolved_beta.back();
                    theta -= beta *
                             sampled_grad_g_theta(ctx, theta, w, phase, options.gradients.batch_size);
                    check_finite(theta, "replicate");
                    if (theta_trace) theta_trace->push_back(theta);
                }
            }
            break;
        case TargetUpdate::HardCopy:
            theta = w;
            if (theta_trace) theta_trace->push_back(theta);
            break;
        case TargetUpdate::Polyak:
            theta = (1.0 - hp.tau) * theta + hp.tau * w;
            if (theta_trace) theta_trace->push_back(theta);
            break;
        }

        out.records.push_back(make_record(ctx, t + 1, theta, w, options.dist_fvalue));
    }
    return out;
}

} // namespace

Trajectory run_lr(const LossContext& ctx, const ParamPair& init, const Hyperparams& hp,
                  const RunOptions& options) {
    return run_loop(ctx, init, hp, TargetUpdate::Replicate, options);
}

Trajectory run_td_copy(const LossContext& ctx, const ParamPair& init, const Hyperparams& hp,
                       const RunOptions& options) {
    return run_loop(ctx, init, hp, TargetUpdate::HardCopy, options);
}

Trajectory run_td_polyak(const LossContext& ctx, const ParamPair& init, const Hyperparams& hp,
                         const RunOptions& options) {
    return run_loop(ctx, init, hp, TargetUpdate::Polyak, options);
}

} // namespace lr

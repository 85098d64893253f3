#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <variant>

#include "lr/losses.hpp"
#include "lr/theory.hpp"
#include "lr/trajectory.hpp"

namespace lr {

/// Lookahead step size: a number, or the token resolving to 1/L.
struct Alpha {
    static Alpha number(double v) { return Alpha{false, v}; }
    static Alpha one_over_l() { return Alpha{true, 0.0}; }

    bool use_one_over_l = true;
    double value = 0.0;
};

/// Replicate step size: a scalar, an explicit per-step schedule, or the token
/// resolving to the analysis schedule (beta0 then beta_k).
struct Beta {
    enum class Kind { Scalar, Schedule, Theorem, Default };

    static Beta scalar(double v) { return Beta{Kind::Scalar, v, {}}; }
    static Beta schedule(std::vector<double> s) { return Beta{Kind::Schedule, 0.0, std::move(s)}; }
    static Beta theorem() { return Beta{Kind::Theorem, 0.0, {}}; }
    /// 1/(4 kappa1^2), safely inside the descent region of the replicate quadratic.
    static Beta quarter_kappa_default() { return Beta{Kind::Default, 0.0, {}}; }

    Kind kind = Kind::Default;
    double value = 0.0;
    std::vector<double> values;
};

struct Hyperparams {
    int T = 0;
    int K_L = 0;
    int K_R = 1;
    Alpha alpha = Alpha::one_over_l();
    Beta beta = Beta::quarter_kappa_default();
    double tau = 0.005; // Polyak coefficient, baselines only

    void validate() const;
};

/// Sampled-gradient mode is opt-in; the analysis and the defaults are for the
/// exact population gradients.
struct GradientOptions {
    enum class Mode { Exact, Sampled };
    Mode mode = Mode::Exact;
    int batch_size = 1;
    std::uint64_t seed = 0;
};

/**
 * K gradient-descent steps on w against the bootstrapped target built from the
 * frozen theta. Appends every iterate (including the input) to *trace when
 * given. Throws NonFiniteIterate if an iterate leaves the finite range.
 */
Vector lookahead(const LossContext& ctx, const Vector& theta, Vector w, double alpha, int steps,
                 std::vector<Vector>* trace = nullptr);

/**
 * K gradient-descent steps on theta toward the frozen w in value space; step k
 * uses beta_schedule[k] (a single value broadcasts). The factor 2 of the
 * quadratic lives inside the gradient, not the step size.
 */
Vector replicate(const LossContext& ctx, const Vector& w, Vector theta,
                 const std::vector<double>& beta_schedule, int steps,
                 std::vector<Vector>* trace = nullptr);

/// Distance hook filled into TrajectoryRecord::dist_fvalue when provided.
using DistanceHook = std::function<double(const Vector& theta, const Vector& w)>;

struct RunOptions {
    bool instrument = false;
    GradientOptions gradients;
    DistanceHook dist_fvalue;
};

/// Resolved step sizes actually used by a run.
struct ResolvedSteps {
    double alpha = 0.0;
    std::vector<double> beta;
};

/// Resolves the alpha token against the context (1/L with L = lambda_max of
/// 2 Phi_w^T D Phi_w). Throws PreconditionViolated when L = 0.
double resolve_alpha(const LossContext& ctx, const Alpha& alpha);

/// Resolves beta to a schedule of length max(K_R, 1). The theorem token throws
/// PremiseViolated when the contraction-theorem gates fail.
std::vector<double> resolve_beta(const LossContext& ctx, const Beta& beta, int K_L, int K_R);

/**
 * The alternating outer loop: per iteration the online parameter takes K_L
 * lookahead steps against the frozen target, then the target takes K_R
 * replicate steps toward the new online value function. Returns T+1 records;
 * record 0 is the initial point.
 */
Trajectory run_lr(const LossContext& ctx, const ParamPair& init, const Hyperparams& hp,
                  const RunOptions& options = {});

/// Baseline: replicate phase replaced by the hard copy theta <- w.
/// Requires equal parameter dimensions on both sides.
Trajectory run_td_copy(const LossContext& ctx, const ParamPair& init, const Hyperparams& hp,
                       const RunOptions& options = {});

/// Baseline: replicate phase replaced by theta <- (1-tau) theta + tau w.
Trajectory run_td_polyak(const LossContext& ctx, const ParamPair& init, const Hyperparams& hp,
                         const RunOptions& options = {});

} // namespace lr

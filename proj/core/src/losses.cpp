#include "lr/losses.hpp"

namespace lr {

LossContext::LossContext(MarkovRewardProcess mrp, FeatureMap features_theta, FeatureMap features_w)
    : mrp_(std::move(mrp)), fm_theta_(std::move(features_theta)), fm_w_(std::move(features_w)) {
    if (fm_theta_.states() != mrp_.state_count() || fm_w_.states() != mrp_.state_count()) {
        raise(ErrorCode::DimensionMismatch, "feature matrix row count does not match state count");
    }
}

bool LossContext::shared_parameter_space() const {
    return fm_theta_.dim() == fm_w_.dim() && fm_theta_.matrix() == fm_w_.matrix();
}

namespace {

// v_w - T v_theta, the Bellman residual in value space.
Vector h_residual(const LossContext& ctx, const Vector& theta, const Vector& w) {
    return ctx.value_w(w) - bellman_apply(ctx.mrp(), ctx.value_theta(theta));
}

} // namespace

double loss_h(const LossContext& ctx, const Vector& theta, const Vector& w) {
    const Vector e = h_residual(ctx, theta, w);
    return (ctx.mrp().state_weights().array() * e.array().square()).sum();
}

Vector grad_h_w(const LossContext& ctx, const Vector& theta, const Vector& w) {
    const Vector e = h_residual(ctx, theta, w);
    return 2.0 * ctx.features_w().matrix().transpose() *
           (ctx.mrp().state_weights().asDiagonal() * e);
}

double loss_g(const LossContext& ctx, const Vector& theta, const Vector& w) {
    const Vector e = ctx.value_theta(theta) - ctx.value_w(w);
    return (ctx.mrp().state_weights().array() * e.array().square()).sum();
}

Vector grad_g_theta(const LossContext& ctx, const Vector& theta, const Vector& w) {
    const Vector e = ctx.value_theta(theta) - ctx.value_w(w);
    return 2.0 * ctx.features_theta().matrix().transpose() *
           (ctx.mrp().state_weights().asDiagonal() * e);
}

Vector sampled_grad_h_w(const LossContext& ctx, const Vector& theta, const Vector& w, Rng& rng,
                        int batch_size) {
    if (batch_size < 1) {
        raise(ErrorCode::PreconditionViolated, "batch_size must be >= 1");
    }
    const Vector v_theta = ctx.value_theta(theta);
    const Vector v_w = ctx.value_w(w);
    const auto& mrp = ctx.mrp();
    Vector acc = Vector::Zero(ctx.dim_w());
    for (int b = 0; b < batch_size; ++b) {
        const Eigen::Index s = rng.categorical(mrp.state_weights());
        const Eigen::Index s_next = rng.categorical(mrp.transition().row(s).transpose());
        const double td = v_w(s) - mrp.reward()(s) - mrp.discount() * v_theta(s_next);
        acc += 2.0 * td * ctx.features_w().matrix().row(s).transpose();
    }
    return acc / static_cast<double>(batch_size);
}

Vector sampled_grad_g_theta(const LossContext& ctx, const Vector& theta, const Vector& w, Rng& rng,
                            int batch_size) {
    if (batch_size < 1) {
        raise(ErrorCode::PreconditionViolated, "batch_size must be >= 1");
    }
    const Vector v_theta = ctx.value_theta(theta);
    const Vector v_w = ctx.value_w(w);
    const auto& mrp = ctx.mrp();
    Vector acc = Vector::Zero(ctx.dim_theta());
    for (int b = 0; b < batch_size; ++b) {
        const Eigen::Index s = rng.categorical(mrp.state_weights());
        acc += 2.0 * (v_theta(s) - v_w(s)) * ctx.features_theta().matrix().row(s).transpose();
    }
    return acc / static_cast<double>(batch_size);
}

} // namespace lr

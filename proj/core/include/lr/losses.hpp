#pragma once

#include "lr/features.hpp"
#include "lr/mrp.hpp"
#include "lr/rng.hpp"

namespace lr {

/**
 * Everything the two losses need: the process, the target-side and
 * online-side feature maps, and the diagonal state-weight matrix D built from
 * the process weights. The two maps may have different parameter dimensions.
 */
class LossContext {
  public:
    LossContext(MarkovRewardProcess mrp, FeatureMap features_theta, FeatureMap features_w);

    const MarkovRewardProcess& mrp() const { return mrp_; }
    const FeatureMap& features_theta() const { return fm_theta_; }
    const FeatureMap& features_w() const { return fm_w_; }

    Eigen::Index states() const { return mrp_.state_count(); }
    Eigen::Index dim_theta() const { return fm_theta_.dim(); }
    Eigen::Index dim_w() const { return fm_w_.dim(); }
    bool shared_parameter_space() const;

    Vector value_theta(const Vector& theta) const { return evaluate(fm_theta_, theta); }
    Vector value_w(const Vector& w) const { return evaluate(fm_w_, w); }

  private:
    MarkovRewardProcess mrp_;
    FeatureMap fm_theta_;
    FeatureMap fm_w_;
};

// Bootstrap loss  H(theta, w) = || v_w - (r + gamma P v_theta) ||_D^2  and
// replication loss  G(theta, w) = || v_theta - v_w ||_D^2.
//
// Gradients carry the factor 2 of the quadratic, i.e. they are the full
// gradients: grad_h_w = 2 Phi_w^T D (v_w - r - gamma P v_theta). Update rules
// subtract step * gradient directly, so a step size beta here corresponds to
// the half-gradient update x - 2 beta * (Phi^T D residual) written with the
// factor pulled out.

double loss_h(const LossContext& ctx, const Vector& theta, const Vector& w);
Vector grad_h_w(const LossContext& ctx, const Vector& theta, const Vector& w);

double loss_g(const LossContext& ctx, const Vector& theta, const Vector& w);
Vector grad_g_theta(const LossContext& ctx, const Vector& theta, const Vector& w);

/**
 * Monte-Carlo estimate of grad_h_w: averages batch_size i.i.d. terms
 * 2 phi_w(s) (v_w(s) - r(s) - gamma v_theta(s')) with s ~ rho, s' ~ P(s,.).
 * Unbiased because the bootstrapped target is linear in the transition
 * expectation.
 */
Vector sampled_grad_h_w(const LossContext& ctx, const Vector& theta, const Vector& w, Rng& rng,
                        int batch_size);

/// Monte-Carlo estimate of grad_g_theta: averages 2 phi_theta(s) (v_theta(s) - v_w(s)), s ~ rho.
Vector sampled_grad_g_theta(const LossContext& ctx, const Vector& theta, const Vector& w, Rng& rng,
                            int batch_size);

} // namespace lr

#pragma once

#include "lr/losses.hpp"
#include "lr/rng.hpp"

namespace lr {

/**
 * Affine solution set of a linear system A x = b, stored as a min-norm
 * particular solution plus an orthonormal basis of the homogeneous direction
 * space. `empty` is set when the system has no solution (least-squares
 * residual above tolerance); the particular then still holds the
 * least-squares point for diagnostics.
 */
struct AffineSet {
    Eigen::Index ambient_dim = 0;
    Vector particular;  // min-norm member (least-squares point when empty)
    Matrix basis;       // ambient_dim x k, orthonormal columns
    bool empty = false;
    double residual = 0.0; // ||A particular - b||_2

    Eigen::Index dim() const { return basis.cols(); }
};

/// Builds the affine solution set of A x = b. Rank cutoff: singular values
/// below 1e-10 * sigma_max are treated as zero. Solvability tolerance:
/// residual above 1e-9 * max(1, ||b||) marks the set empty.
AffineSet solve_affine(const Matrix& A, const Vector& b);

/// Parameters theta with v_theta = T v_theta: the system (I - gamma P) Phi_theta x = r.
AffineSet solve_f_single(const LossContext& ctx);

/// Equal-parameter solutions of the Bellman equation, over theta. Requires the
/// two sides to share one feature map; the result coincides with solve_f_single.
AffineSet solve_f_pair(const LossContext& ctx);

/// Value-equivalent pairs: stacked system over (theta, w) with
/// v_w = T v_theta and v_theta = v_w. Sides may use different feature maps.
AffineSet solve_f_value(const LossContext& ctx);

struct Membership {
    bool is_member = false;
    double residual = 0.0; // distance to the set
    Vector projection;
};

/// Orthogonal projection onto the set plus distance; membership uses
/// tolerance 1e-8 * max(1, ||point||). Throws EmptySet for empty sets.
Membership membership_and_distance(const AffineSet& set, const Vector& point);

/// Diagonal embedding of a theta-space set into the stacked (theta, w) space:
/// particular (p, p), directions (d, d) renormalized.
AffineSet diagonal_embedding(const AffineSet& set);

struct ClaimsReport {
    bool vacuous = false;      // sets empty, nothing to sample
    bool claim1_pass = false;  // F_single <-> diagonal of F_pair, both directions
    bool claim2_pass = false;  // diagonal of F_pair inside F_value
    bool dims_pass = false;    // dim F_pair <= dim F_value <= 2 dim F_single
    double claim1_max_residual = 0.0;
    double claim2_max_residual = 0.0;
    Eigen::Index dim_f_single = 0;
    Eigen::Index dim_f_pair = 0;
    Eigen::Index dim_f_value = 0;
    int samples = 0;

    bool pass() const { return vacuous || (claim1_pass && claim2_pass && dims_pass); }
};

/**
 * Samples random members of the computed sets and checks the membership
 * claims connecting them. Dimension comparison stands in for the cardinality
 * statement, which has no literal meaning for affine continua.
 */
ClaimsReport check_claims(const LossContext& ctx, int sample_count, Rng& rng,
                          double membership_tol = 1e-8);

} // namespace lr

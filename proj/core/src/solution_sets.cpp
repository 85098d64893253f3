#include "lr/solution_sets.hpp"

#include <Eigen/SVD>
#include <algorithm>

namespace lr {

namespace {

constexpr double kRankCutoff = 1e-10;
constexpr double kSolvableTol = 1e-9;

Matrix stacked_system(const LossContext& ctx, Vector& b_out) {
    const Eigen::Index n = ctx.states();
    const Eigen::Index dt = ctx.dim_theta();
    const Eigen::Index dw = ctx.dim_w();
    const auto& mrp = ctx.mrp();
    const Matrix& phi_t = ctx.features_theta().matrix();
    const Matrix& phi_w = ctx.features_w().matrix();

    // Rows 0..n-1:   -gamma P Phi_t theta + Phi_w w = r   (v_w = T v_theta)
    // Rows n..2n-1:   Phi_t theta - Phi_w w = 0           (v_theta = v_w)
    Matrix A(2 * n, dt + dw);
    A.block(0, 0, n, dt) = -mrp.discount() * (mrp.transition() * phi_t);
    A.block(0, dt, n, dw) = phi_w;
    A.block(n, 0, n, dt) = phi_t;
    A.block(n, dt, n, dw) = -phi_w;

    b_out = Vector::Zero(2 * n);
    b_out.head(n) = mrp.reward();
    return A;
}

} // namespace

AffineSet solve_affine(const Matrix& A, const Vector& b) {
    if (A.rows() != b.size()) {
        raise(ErrorCode::DimensionMismatch, "system matrix and right-hand side differ in rows");
    }
    AffineSet set;
    set.ambient_dim = A.cols();

    Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Vector& sv = svd.singularValues();
    const double sigma_max = sv.size() > 0 ? sv(0) : 0.0;
    const double cutoff = kRankCutoff * std::max(sigma_max, 1.0);

    Eigen::Index rank = 0;
    while (rank < sv.size() && sv(rank) > cutoff) ++rank;

    // Min-norm solution through the truncated pseudoinverse.
    const Vector utb = svd.matrixU().transpose() * b;
    Vector y = Vector::Zero(A.cols());
    for (Eigen::Index i = 0; i < rank; ++i) y(i) = utb(i) / sv(i);
    set.particular = svd.matrixV() * y;

    set.basis = svd.matrixV().rightCols(A.cols() - rank);
    set.residual = (A * set.particular - b).norm();
    set.empty = set.residual > kSolvableTol * std::max(1.0, b.norm());
    return set;
}

AffineSet solve_f_single(const LossContext& ctx) {
    const auto& mrp = ctx.mrp();
    const Eigen::Index n = ctx.states();
    const Matrix system = (Matrix::Identity(n, n) - mrp.discount() * mrp.transition()) *
                          ctx.features_theta().matrix();
    return solve_affine(system, mrp.reward());
}

AffineSet solve_f_pair(const LossContext& ctx) {
    if (!ctx.shared_parameter_space()) {
        raise(ErrorCode::SpaceMismatch,
              "equal-parameter solution set requires identical feature maps on both sides");
    }
    // With theta = w the constraint v_w = T v_theta collapses to the
    // fixed-point system, so the set equals solve_f_single's.
    return solve_f_single(ctx);
}

AffineSet solve_f_value(const LossContext& ctx) {
    Vector b;
    const Matrix A = stacked_system(ctx, b);
    return solve_affine(A, b);
}

Membership membership_and_distance(const AffineSet& set, const Vector& point) {
    if (set.empty) {
        raise(ErrorCode::EmptySet, "distance to an empty solution set is undefined");
    }
    if (point.size() != set.ambient_dim) {
        raise(ErrorCode::DimensionMismatch, "point dimension does not match the set's ambient space");
    }
    Membership m;
    const Vector offset = point - set.particular;
    m.projection = set.particular + set.basis * (set.basis.transpose() * offset);
    m.residual = (point - m.projection).norm();
    m.is_member = m.residual <= 1e-8 * std::max(1.0, point.norm());
    return m;
}

AffineSet diagonal_embedding(const AffineSet& set) {
    AffineSet out;
    out.ambient_dim = 2 * set.ambient_dim;
    out.empty = set.empty;
    out.residual = set.residual;
    out.particular = Vector(2 * set.ambient_dim);
    out.particular << set.particular, set.particular;
    out.basis = Matrix(2 * set.ambient_dim, set.dim());
    out.basis << set.basis, set.basis;
    out.basis /= std::sqrt(2.0); // keep columns orthonormal
    return out;
}

ClaimsReport check_claims(const LossContext& ctx, int sample_count, Rng& rng,
                          double membership_tol) {
    ClaimsReport report;
    report.samples = sample_count;

    const AffineSet f_single = solve_f_single(ctx);
    const AffineSet f_pair = solve_f_pair(ctx);
    const AffineSet f_value = solve_f_value(ctx);

    report.dim_f_single = f_single.dim();
    report.dim_f_pair = f_pair.dim();
    report.dim_f_value = f_value.dim();

    if (f_single.empty || f_pair.empty || f_value.empty) {
        report.vacuous = true;
        return report;
    }

    const AffineSet pair_diagonal = diagonal_embedding(f_pair);

    auto random_member = [&rng](const AffineSet& set) {
        Vector coeffs(set.dim());
        for (Eigen::Index i = 0; i < coeffs.size(); ++i) coeffs(i) = 2.0 * rng.normal();
        return Vector(set.particular + set.basis * coeffs);
    };

    double c1_max = 0.0;
    double c2_max = 0.0;
    bool c1_ok = true;
    bool c2_ok = true;
    for (int i = 0; i < sample_count; ++i) {
        // F_single member theta: (theta, theta) must lie in the pair diagonal.
        const Vector theta = random_member(f_single);
        Vector stacked(2 * theta.size());
        stacked << theta, theta;
        const auto fwd = membership_and_distance(pair_diagonal, stacked);
        c1_max = std::max(c1_max, fwd.residual);
        c1_ok = c1_ok && fwd.residual <= membership_tol * std::max(1.0, stacked.norm());

        // F_pair member: must itself solve the fixed-point system.
        const Vector pair_theta = random_member(f_pair);
        const auto back = membership_and_distance(f_single, pair_theta);
        c1_max = std::max(c1_max, back.residual);
        c1_ok = c1_ok && back.residual <= membership_tol * std::max(1.0, pair_theta.norm());

        // Diagonal pair inside F_value.
        Vector pair_stacked(2 * pair_theta.size());
        pair_stacked << pair_theta, pair_theta;
        const auto incl = membership_and_distance(f_value, pair_stacked);
        c2_max = std::max(c2_max, incl.residual);
        c2_ok = c2_ok && incl.residual <= membership_tol * std::max(1.0, pair_stacked.norm());
    }

    report.claim1_pass = c1_ok;
    report.claim2_pass = c2_ok;
    report.claim1_max_residual = c1_max;
    report.claim2_max_residual = c2_max;
    report.dims_pass =
        report.dim_f_pair <= report.dim_f_value && report.dim_f_value <= 2 * report.dim_f_single;
    return report;
}

} // namespace lr

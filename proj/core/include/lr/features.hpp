#pragma once

#include <Eigen/Dense>

#include "lr/errors.hpp"
#include "lr/mrp.hpp"

namespace lr {

/**
 * Linear value-function parameterization v(s) = phi(s)^T x. Rows of the
 * feature matrix are per-state feature vectors, so the value vector for a
 * parameter x is simply Phi * x.
 */
class FeatureMap {
  public:
    explicit FeatureMap(Matrix phi) : phi_(std::move(phi)) {
        if (!phi_.allFinite()) {
            raise(ErrorCode::SchemaError, "feature matrix has non-finite entries");
        }
    }

    Eigen::Index states() const { return phi_.rows(); }
    Eigen::Index dim() const { return phi_.cols(); }
    const Matrix& matrix() const { return phi_; }

  private:
    Matrix phi_;
};

/// Pair of parameter vectors, target side (theta) and online side (w).
struct ParamPair {
    Vector theta;
    Vector w;
};

/// Value vector Phi * param.
Vector evaluate(const FeatureMap& fm, const Vector& param);

/// Jacobian of the value vector with respect to the parameter: Phi^T (d x n).
Matrix jacobian(const FeatureMap& fm);

/// Tightest Lipschitz constant of param -> value map: the spectral norm of Phi.
double lipschitz_bound(const FeatureMap& fm);

} // namespace lr

#include "lr/features.hpp"

#include <Eigen/SVD>

namespace lr {

Vector evaluate(const FeatureMap& fm, const Vector& param) {
    if (param.size() != fm.dim()) {
        raise(ErrorCode::DimensionMismatch, "parameter length does not match feature dimension");
    }
    return fm.matrix() * param;
}

Matrix jacobian(const FeatureMap& fm) {
    return fm.matrix().transpose();
}

double lipschitz_bound(const FeatureMap& fm) {
    if (fm.matrix().size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(fm.matrix());
    return svd.singularValues()(0);
}

} // namespace lr

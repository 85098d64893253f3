#include "lr/mrp.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

namespace lr {

namespace {

constexpr double kRowSumTol = 1e-9;

void check_probability_vector(const Vector& p, const char* what) {
    if ((p.array() < -kRowSumTol).any()) {
        raise(ErrorCode::NegativeProbability, std::string(what) + " has a negative entry");
    }
    if (std::abs(p.sum() - 1.0) > kRowSumTol) {
        std::ostringstream os;
        os << what << " sums to " << p.sum() << ", expected 1";
        raise(ErrorCode::NonStochasticRow, os.str());
    }
}

} // namespace

MarkovRewardProcess validate_mrp(Matrix P, Vector r, double gamma, std::optional<Vector> rho) {
    if (P.rows() != P.cols()) {
        raise(ErrorCode::DimensionMismatch, "transition matrix must be square");
    }
    if (r.size() != P.rows()) {
        raise(ErrorCode::DimensionMismatch, "reward vector length does not match state count");
    }
    if ((P.array() < 0.0).any()) {
        raise(ErrorCode::NegativeProbability, "transition matrix has a negative entry");
    }
    for (Eigen::Index i = 0; i < P.rows(); ++i) {
        const double rowsum = P.row(i).sum();
        if (std::abs(rowsum - 1.0) > kRowSumTol) {
            std::ostringstream os;
            os << "row " << i << " sums to " << rowsum;
            raise(ErrorCode::NonStochasticRow, os.str());
        }
    }
    if (!(gamma >= 0.0 && gamma < 1.0)) {
        std::ostringstream os;
        os << "discount must lie in [0,1), got " << gamma;
        raise(ErrorCode::BadDiscount, os.str());
    }

    Vector weights;
    if (rho.has_value()) {
        if (rho->size() != P.rows()) {
            raise(ErrorCode::DimensionMismatch, "state-weight vector length does not match state count");
        }
        check_probability_vector(*rho, "state-weight vector");
        weights = std::move(*rho);
    } else {
        weights = stationary_distribution(P);
    }
    return MarkovRewardProcess(std::move(P), std::move(r), gamma, std::move(weights));
}

Vector stationary_distribution(const Matrix& P, double tol) {
    const Eigen::Index n = P.rows();
    if (P.cols() != n) {
        raise(ErrorCode::DimensionMismatch, "transition matrix must be square");
    }

    // Eigensolve P^T for eigenvalue 1. A multiple eigenvalue-1 space means the
    // chain is reducible and rho is not well defined.
    Eigen::EigenSolver<Matrix> solver(P.transpose());
    const auto& values = solver.eigenvalues();
    const auto& vectors = solver.eigenvectors();

    const double unit_tol = std::max(tol, 1e-9);
    int unit_count = 0;
    Eigen::Index unit_index = -1;
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        if (std::abs(values[i] - std::complex<double>(1.0, 0.0)) < 1e-8) {
            ++unit_count;
            unit_index = i;
        }
    }
    if (unit_count > 1) {
        raise(ErrorCode::NonUniqueStationary,
              "eigenvalue-1 eigenspace has dimension > 1 (reducible chain)");
    }

    auto finish = [&](Vector rho) -> std::optional<Vector> {
        if ((rho.array() < -unit_tol).any()) return std::nullopt;
        rho = rho.cwiseMax(0.0);
        const double s = rho.sum();
        if (s <= 0.0) return std::nullopt;
        rho /= s;
        const double resid = ((rho.transpose() * P).transpose() - rho).lpNorm<Eigen::Infinity>();
        if (resid > std::max(tol, 1e-10)) return std::nullopt;
        return rho;
    };

    if (unit_index >= 0) {
        Vector candidate = vectors.col(unit_index).real();
        if (candidate.sum() < 0.0) candidate = -candidate;
        if (auto rho = finish(std::move(candidate))) return *rho;
    }

    // Power-iteration fallback: deterministic start at the uniform vector.
    Vector rho = Vector::Constant(n, 1.0 / static_cast<double>(n));
    constexpr int kMaxIter = 1'000'000;
    for (int it = 0; it < kMaxIter; ++it) {
        Vector next = (rho.transpose() * P).transpose();
        next /= next.sum();
        const double delta = (next - rho).lpNorm<Eigen::Infinity>();
        rho = std::move(next);
        if (delta < tol) {
            if (auto out = finish(std::move(rho))) return *out;
            raise(ErrorCode::NonUniqueStationary, "power iteration settled on a non-stationary vector");
        }
    }
    raise(ErrorCode::NoConvergence, "power iteration did not converge within the iteration cap");
}

Vector bellman_apply(const MarkovRewardProcess& mrp, const Vector& v) {
    if (v.size() != mrp.state_count()) {
        raise(ErrorCode::DimensionMismatch, "value vector length does not match state count");
    }
    return mrp.reward() + mrp.discount() * (mrp.transition() * v);
}

Vector exact_value(const MarkovRewardProcess& mrp) {
    const Eigen::Index n = mrp.state_count();
    const Matrix system = Matrix::Identity(n, n) - mrp.discount() * mrp.transition();
    Eigen::PartialPivLU<Matrix> lu(system);
    // gamma < 1 with stochastic P keeps I - gamma P invertible; guard anyway.
    const Vector v = lu.solve(mrp.reward());
    const double resid = (system * v - mrp.reward()).lpNorm<Eigen::Infinity>();
    const double scale = std::max(1.0, mrp.reward().lpNorm<Eigen::Infinity>());
    if (!v.allFinite() || resid > 1e-8 * scale) {
        raise(ErrorCode::SingularSystem, "Bellman system solve failed");
    }
    return v;
}

double weighted_norm(const Vector& v, const Vector& rho) {
    if (v.size() != rho.size()) {
        raise(ErrorCode::DimensionMismatch, "value and weight vectors differ in length");
    }
    return std::sqrt((rho.array() * v.array().square()).sum());
}

} // namespace lr

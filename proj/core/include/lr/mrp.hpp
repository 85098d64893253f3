#pragma once

#include <Eigen/Dense>
#include <optional>

#include "lr/errors.hpp"

namespace lr {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/**
 * A finite Markov reward process: row-stochastic transition matrix P, reward
 * vector r, discount gamma in [0,1), and a state-weight distribution rho.
 *
 * Immutable after construction; build instances through validate_mrp so the
 * stochasticity and dimension invariants always hold.
 */
class MarkovRewardProcess {
  public:
    Eigen::Index state_count() const { return r_.size(); }
    const Matrix& transition() const { return P_; }
    const Vector& reward() const { return r_; }
    double discount() const { return gamma_; }
    const Vector& state_weights() const { return rho_; }

  private:
    MarkovRewardProcess(Matrix P, Vector r, double gamma, Vector rho)
        : P_(std::move(P)), r_(std::move(r)), gamma_(gamma), rho_(std::move(rho)) {}

    friend MarkovRewardProcess validate_mrp(Matrix P, Vector r, double gamma,
                                            std::optional<Vector> rho);

    Matrix P_;
    Vector r_;
    double gamma_;
    Vector rho_;
};

/**
 * Validates and assembles a Markov reward process.
 *
 * Checks: P square and row-stochastic (row sums within 1e-9 of 1, entries
 * nonnegative), r of matching length, gamma in [0,1). When rho is absent it
 * is computed as the stationary distribution of P; when supplied it must be
 * a probability vector of matching length.
 *
 * Throws Error with NonStochasticRow, NegativeProbability, BadDiscount or
 * DimensionMismatch.
 */
MarkovRewardProcess validate_mrp(Matrix P, Vector r, double gamma,
                                 std::optional<Vector> rho = std::nullopt);

/**
 * Stationary distribution of a row-stochastic matrix: the probability vector
 * with rho^T P = rho^T. Solved by eigendecomposition of P^T; falls back to
 * deterministic power iteration when the eigensolver result is unusable.
 *
 * Throws NonUniqueStationary when the eigenvalue-1 eigenspace has dimension
 * greater than one (reducible chain), NoConvergence when the power-iteration
 * cap is hit.
 */
Vector stationary_distribution(const Matrix& P, double tol = 1e-12);

/// Applies the Bellman operator: r + gamma * P * v.
Vector bellman_apply(const MarkovRewardProcess& mrp, const Vector& v);

/// Exact fixed point v* solving (I - gamma P) v = r, by dense LU.
Vector exact_value(const MarkovRewardProcess& mrp);

/// Weighted Euclidean norm sqrt(sum_s rho(s) v(s)^2).
double weighted_norm(const Vector& v, const Vector& rho);

} // namespace lr

#pragma once

#include "so3mean/lie.hpp"
#include "so3mean/sde.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace so3mean {

inline constexpr double kDefaultFrechetTolerance = 1e-12;
inline constexpr std::size_t kDefaultFrechetMaxIterations = 100;

struct FrechetResult {
  GroupElement mean;
  std::vector<AlgebraVector> residuals;  // relative_log(mean, X_j)
  std::size_t iterations = 0;
  double final_step_norm = 0.0;
  std::vector<double> objective_history;  // variance at each iterate, initial guess first

  /// Norm of the average residual.
  double centering() const;
};

/// Euclidean average of the members projected back onto SO(3).
GroupElement projected_average(std::span<const GroupElement> members);

/**
 * Exponential barycenter by the Riemannian fixed-point iteration
 *   E <- E exp(mean_j relative_log(E, X_j)),
 * which is the Gauss-Newton step for the bi-invariant metric. Stops once the
 * step norm is <= tol. Throws NoConvergence after max_iter steps and lets
 * AngleNearPi through for dispersed ensembles.
 */
FrechetResult frechet_mean(std::span<const GroupElement> members,
                           double tol = kDefaultFrechetTolerance,
                           std::size_t max_iter = kDefaultFrechetMaxIterations);

inline FrechetResult frechet_mean(const Ensemble& ensemble,
                                  double tol = kDefaultFrechetTolerance,
                                  std::size_t max_iter = kDefaultFrechetMaxIterations) {
  return frechet_mean(std::span<const GroupElement>(ensemble.members), tol, max_iter);
}

/// (1/N) sum_j distance(g, X_j)^2.
double variance_at(std::span<const GroupElement> members, const GroupElement& g);

/// (1/N) sum_j nu_j nu_j^T.
CovMatrix empirical_covariance(std::span<const AlgebraVector> residuals);

/// Pairwise (cascade) sum; the result depends only on the input order.
AlgebraVector pairwise_sum(std::span<const AlgebraVector> values);

}  // namespace so3mean

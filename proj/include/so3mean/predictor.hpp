#pragma once

#include "so3mean/drift.hpp"
#include "so3mean/lie.hpp"
#include "so3mean/sde.hpp"

#include <cstddef>
#include <string_view>
#include <vector>

namespace so3mean {

/// Mean E_t and error second moment Sigma_t = E[nu nu^T] at time t.
struct PredictionState {
  GroupElement mean;
  CovMatrix cov = CovMatrix::Zero();
  double t = 0.0;
};

/**
 * Covariance law selector.
 *   general        the group-generic law with the -1/3 [[sigma_i, .], sigma_i]
 *                  and 1/4 ad(sigma_i) Sigma ad(sigma_i)^T terms
 *   so3_isotropic  the isotropic SO(3) law: sigma^2 I + (A Sigma + Sigma A^T)
 *                  + (tr(Sigma) I - Sigma) / 8, isotropic noise only
 * The two differ by O(sigma^2 Sigma) and O(Sigma) terms.
 */
enum class CovarianceVariant { general, so3_isotropic };

/// CLI / config spelling: "general-eq7" and "paper-eq9".
std::string_view to_string(CovarianceVariant variant);
CovarianceVariant parse_variant(std::string_view text);

/// sum_{a,b} S_ab L(e_a, e_b): the linear extension of L(nu, nu) to a second moment.
template <typename Bilinear>
AlgebraVector apply_bilinear(const Bilinear& L, const CovMatrix& S) {
  AlgebraVector out = AlgebraVector::Zero();
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      if (S(a, b) != 0.0) out += S(a, b) * L(AlgebraVector::Unit(a), AlgebraVector::Unit(b));
    }
  }
  return out;
}

/// Mean velocity for a general group:
/// h = b(E) + 1/2 [Hess b - [Db ., .] + 1/8 sum_i [[[sigma_i, .], .], sigma_i]] . Sigma
AlgebraVector h_general(const PredictionState& state, const DriftModel& drift,
                        const NoiseModel& noise);

/// SO(3) form with isotropic noise, where the triple-bracket term vanishes:
/// h = b(E) + 1/2 [Hess b - [Db ., .]] . Sigma. Throws NonIsotropicNoise.
AlgebraVector h_so3(const PredictionState& state, const DriftModel& drift,
                    const NoiseModel& noise);

/// Same velocity written with the Levi-Civita connection nabla_u v = [u, v] / 2:
/// h = b(E) + (1/2 Hess b + nabla_. Db .) . Sigma.
AlgebraVector h_connection_form(const PredictionState& state, const DriftModel& drift);

/// dSigma/dt for the selected law.
CovMatrix sigma_rhs(const PredictionState& state, const DriftModel& drift,
                    const NoiseModel& noise, CovarianceVariant variant);

/// Largest admissible trace(Sigma) is ball_radius^2.
struct IntegrationOptions {
  double ball_radius = kDefaultBallRadius;
  double eigenvalue_floor = -1e-12;
};

/**
 * Fixed-step integration of the pair (E, Sigma): 4th-order Runge-Kutta-Munthe-Kaas
 * for the mean (E_{k+1} = E_k exp(increment)) and classical RK4 for Sigma, sharing
 * stages. Sigma is symmetrized after each step. Returns steps + 1 states.
 * Throws CovarianceBlowup when an eigenvalue falls below the floor or the trace
 * exceeds R^2.
 */
std::vector<PredictionState> integrate(const PredictionState& initial, const DriftModel& drift,
                                       const NoiseModel& noise, double horizon,
                                       std::size_t steps, CovarianceVariant variant,
                                       const IntegrationOptions& options = {});

}  // namespace so3mean

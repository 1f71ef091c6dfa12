#include "so3mean/predictor.hpp"

#include "so3mean/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace so3mean {

std::string_view to_string(CovarianceVariant variant) {
  switch (variant) {
    case CovarianceVariant::general:
      return "general-eq7";
    case CovarianceVariant::so3_isotropic:
      return "paper-eq9";
  }
  return "general-eq7";
}

CovarianceVariant parse_variant(std::string_view text) {
  if (text == "general-eq7") return CovarianceVariant::general;
  if (text == "paper-eq9") return CovarianceVariant::so3_isotropic;
  throw ConfigError("unknown variant '" + std::string(text) +
                    "' (expected general-eq7 or paper-eq9)");
}

namespace {

double require_isotropic(const NoiseModel& noise) {
  const auto scale = noise.isotropic_scale();
  if (!scale) throw NonIsotropicNoise("this law requires isotropic noise sigma * (G_1, G_2, G_3)");
  return *scale;
}

// Inverse of the left-trivialized exponential differential, truncated after the
// second commutator as required by a 4th-order Munthe-Kaas scheme.
AlgebraVector dexpinv(const AlgebraVector& u, const AlgebraVector& h) {
  const AlgebraVector uh = bracket(u, h);
  return h + 0.5 * uh + bracket(u, uh) / 12.0;
}

void check_covariance(const CovMatrix& cov, double t, const IntegrationOptions& options) {
  if (!cov.allFinite()) {
    throw CovarianceBlowup("covariance became non-finite at t = " + std::to_string(t));
  }
  const double min_eig = Eigen::SelfAdjointEigenSolver<CovMatrix>(cov, Eigen::EigenvaluesOnly)
                             .eigenvalues()
                             .minCoeff();
  if (min_eig < options.eigenvalue_floor) {
    throw CovarianceBlowup("covariance eigenvalue " + std::to_string(min_eig) + " at t = " +
                           std::to_string(t));
  }
  const double limit = options.ball_radius * options.ball_radius;
  if (cov.trace() > limit) {
    throw CovarianceBlowup("covariance trace " + std::to_string(cov.trace()) +
                           " exceeds R^2 = " + std::to_string(limit));
  }
}

}  // namespace

AlgebraVector h_general(const PredictionState& state, const DriftModel& drift,
                        const NoiseModel& noise) {
  const AlgebraVector b = drift.value(state.mean);
  const AlgebraOperator d = drift.differential(state.mean);
  const BilinearMap hess = drift.hessian(state.mean);
  const auto correction = [&](const AlgebraVector& u, const AlgebraVector& v) -> AlgebraVector {
    AlgebraVector out = hess(u, v) - bracket(d * u, v);
    for (const auto& s : noise.sigmas) out += bracket(bracket(bracket(s, u), v), s) / 8.0;
    return out;
  };
  return b + 0.5 * apply_bilinear(correction, state.cov);
}

AlgebraVector h_so3(const PredictionState& state, const DriftModel& drift,
                    const NoiseModel& noise) {
  require_isotropic(noise);
  const AlgebraVector b = drift.value(state.mean);
  const AlgebraOperator d = drift.differential(state.mean);
  const BilinearMap hess = drift.hessian(state.mean);
  const auto correction = [&](const AlgebraVector& u, const AlgebraVector& v) -> AlgebraVector {
    return hess(u, v) - bracket(d * u, v);
  };
  return b + 0.5 * apply_bilinear(correction, state.cov);
}

AlgebraVector h_connection_form(const PredictionState& state, const DriftModel& drift) {
  const AlgebraVector b = drift.value(state.mean);
  const AlgebraOperator d = drift.differential(state.mean);
  const BilinearMap hess = drift.hessian(state.mean);
  const auto nabla = [](const AlgebraVector& u, const AlgebraVector& v) -> AlgebraVector {
    return 0.5 * bracket(u, v);
  };
  const auto correction = [&](const AlgebraVector& u, const AlgebraVector& v) -> AlgebraVector {
    return 0.5 * hess(u, v) + nabla(u, d * v);
  };
  return b + apply_bilinear(correction, state.cov);
}

CovMatrix sigma_rhs(const PredictionState& state, const DriftModel& drift,
                    const NoiseModel& noise, CovarianceVariant variant) {
  const CovMatrix& cov = state.cov;
  const AlgebraOperator linear = drift.differential(state.mean) - ad(drift.value(state.mean));

  if (variant == CovarianceVariant::so3_isotropic) {
    const double sigma = require_isotropic(noise);
    // E[|nu|^2 Id_{nu-perp}] = tr(Sigma) I - Sigma.
    return sigma * sigma * CovMatrix::Identity() + linear * cov + cov * linear.transpose() +
           (cov.trace() * CovMatrix::Identity() - cov) / 8.0;
  }

  // [[sigma_i, nu], sigma_i] = -ad(sigma_i)^2 nu.
  AlgebraOperator curvature = AlgebraOperator::Zero();
  CovMatrix spread = CovMatrix::Zero();
  for (const auto& s : noise.sigmas) {
    const AlgebraOperator ad_s = ad(s);
    curvature -= ad_s * ad_s;
    spread += ad_s * cov * ad_s.transpose();
  }
  const AlgebraOperator m = linear - curvature / 6.0;
  return noise.diffusion() + m * cov + cov * m.transpose() + spread / 4.0;
}

std::vector<PredictionState> integrate(const PredictionState& initial, const DriftModel& drift,
                                       const NoiseModel& noise, double horizon,
                                       std::size_t steps, CovarianceVariant variant,
                                       const IntegrationOptions& options) {
  if (steps < 1) throw ConfigError("integrate needs at least one step");
  if (!(horizon > 0.0)) throw ConfigError("integration horizon must be > 0");
  if (variant == CovarianceVariant::so3_isotropic) require_isotropic(noise);
  check_covariance(initial.cov, initial.t, options);

  const double dt = horizon / static_cast<double>(steps);
  std::vector<PredictionState> out;
  out.reserve(steps + 1);
  out.push_back(initial);
  out.back().cov = 0.5 * (initial.cov + initial.cov.transpose());

  auto stage = [&](const GroupElement& base, const AlgebraVector& u, const CovMatrix& cov,
                   double t, AlgebraVector& k, CovMatrix& dcov) {
    const PredictionState s{base * group_exp(u), cov, t};
    k = dexpinv(u, h_general(s, drift, noise));
    dcov = sigma_rhs(s, drift, noise, variant);
  };

  for (std::size_t n = 0; n < steps; ++n) {
    const PredictionState& cur = out.back();
    const double t = cur.t;
    AlgebraVector k1, k2, k3, k4;
    CovMatrix c1, c2, c3, c4;
    stage(cur.mean, AlgebraVector::Zero(), cur.cov, t, k1, c1);
    stage(cur.mean, 0.5 * dt * k1, cur.cov + 0.5 * dt * c1, t + 0.5 * dt, k2, c2);
    stage(cur.mean, 0.5 * dt * k2, cur.cov + 0.5 * dt * c2, t + 0.5 * dt, k3, c3);
    stage(cur.mean, dt * k3, cur.cov + dt * c3, t + dt, k4, c4);

    PredictionState next;
    next.mean = cur.mean * group_exp(dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
    next.cov = cur.cov + dt / 6.0 * (c1 + 2.0 * c2 + 2.0 * c3 + c4);
    next.cov = 0.5 * (next.cov + next.cov.transpose());
    next.t = initial.t + static_cast<double>(n + 1) * dt;
    check_covariance(next.cov, next.t, options);
    out.push_back(next);
  }
  return out;
}

}  // namespace so3mean

#include "doctest.h"
#include "oracles.hpp"

#include "so3mean/errors.hpp"
#include "so3mean/frechet.hpp"
#include "so3mean/harness.hpp"
#include "so3mean/sde.hpp"

#include <cmath>
#include <vector>

using namespace so3mean;
using so3mean::testing::Rng;

namespace {

// Classical RK4 on the matrix ODE x' = x hat(b(x)), projected once at the end.
Eigen::Matrix3d reference_flow(const DriftModel& drift, const Eigen::Matrix3d& x0, double horizon,
                               int steps) {
  auto f = [&](const Eigen::Matrix3d& x) -> Eigen::Matrix3d {
    return x * hat(drift.value(project_to_group(x)));
  };
  const double h = horizon / steps;
  Eigen::Matrix3d x = x0;
  for (int k = 0; k < steps; ++k) {
    const Eigen::Matrix3d k1 = f(x), k2 = f(x + 0.5 * h * k1), k3 = f(x + 0.5 * h * k2),
                          k4 = f(x + h * k3);
    x += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return x;
}

}  // namespace

TEST_CASE("noise model") {
  const NoiseModel iso = NoiseModel::isotropic(0.1);
  CHECK(iso.sigmas.size() == 3);
  CHECK((iso.diffusion() - 0.01 * CovMatrix::Identity()).norm() < 1e-17);
  CHECK(iso.isotropic_scale().value() == doctest::Approx(0.1));
  CHECK(NoiseModel::isotropic(0.0).isotropic_scale().value() == 0.0);
  CHECK(NoiseModel{}.isotropic_scale().value() == 0.0);
  CHECK_THROWS_AS(NoiseModel::isotropic(-1.0), ConfigError);

  // Any rotated orthonormal frame counts as isotropic.
  const GroupElement r = group_exp(AlgebraVector(0.3, -0.7, 1.1));
  NoiseModel rotated;
  for (int i = 0; i < 3; ++i) rotated.sigmas.push_back(0.2 * r.matrix().col(i));
  CHECK(rotated.isotropic_scale().value() == doctest::Approx(0.2));

  NoiseModel skewed{{AlgebraVector(0.1, 0, 0), AlgebraVector(0, 0.2, 0), AlgebraVector(0, 0, 0.1)}};
  CHECK_FALSE(skewed.isotropic_scale().has_value());
  NoiseModel single{{AlgebraVector(0.1, 0, 0)}};
  CHECK_FALSE(single.isotropic_scale().has_value());
}

TEST_CASE("path config validation") {
  PathConfig ok;
  CHECK_NOTHROW(ok.validate());
  PathConfig bad = ok;
  bad.horizon = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = ok;
  bad.steps = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = ok;
  bad.ball_radius = 2.3;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad.ball_radius = ball_constants().max_radius;
  CHECK_NOTHROW(bad.validate());
}

TEST_CASE("single step") {
  const GroupElement x = group_exp(AlgebraVector(0.1, 0.2, -0.3));
  const NoiseModel silent = NoiseModel::isotropic(0.0);
  const double dW[3] = {0.5, -0.1, 0.2};
  CHECK(step(x, make_zero_drift(), silent, 1e-3, dW) == x * group_exp(AlgebraVector::Zero()));
  CHECK(distance(step(x, make_zero_drift(), silent, 1e-3, dW), x) < 1e-15);

  const AlgebraVector b0(0.4, -0.2, 0.9);
  const GroupElement moved = step(GroupElement::identity(), make_constant_drift(b0), silent, 0.01, dW);
  CHECK(distance(moved, group_exp(0.01 * b0)) < 1e-15);

  // Diffusion rate: E[d(I, X_1)^2] = 3 sigma^2 dt.
  const double sigma = 0.1, dt = 1e-3;
  const NoiseModel noise = NoiseModel::isotropic(sigma);
  Rng rng(11);
  double mean = 0.0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const double w[3] = {std::sqrt(dt) * rng.normal(), std::sqrt(dt) * rng.normal(),
                         std::sqrt(dt) * rng.normal()};
    const double d = distance(GroupElement::identity(),
                              step(GroupElement::identity(), make_zero_drift(), noise, dt, w));
    mean += d * d / n;
  }
  CHECK(mean == doctest::Approx(3 * sigma * sigma * dt).epsilon(0.05));
}

TEST_CASE("simulate_path") {
  PathConfig config{0.1, 1, 7, kDefaultBallRadius};
  const GroupElement x0 = group_exp(AlgebraVector(0.2, 0, 0));
  const StoppedPath trivial = simulate_path(config, make_zero_drift(), NoiseModel::isotropic(0.0), x0);
  REQUIRE(trivial.states.size() == 2);
  CHECK(trivial.states[0] == x0);
  CHECK(trivial.states[1] == x0 * group_exp(AlgebraVector::Zero()));
  CHECK_FALSE(trivial.tau_step.has_value());

  config = PathConfig{};
  const RunConfig run;
  const StoppedPath a = simulate_path(config, run.drift(), run.noise(), GroupElement(), 5);
  const StoppedPath b = simulate_path(config, run.drift(), run.noise(), GroupElement(), 5);
  const StoppedPath other = simulate_path(config, run.drift(), run.noise(), GroupElement(), 6);
  CHECK(a.states == b.states);
  CHECK_FALSE(a.states == other.states);
  CHECK(a.states.size() == config.steps + 1);
  for (const auto& s : a.states) CHECK(s.is_valid());

  // A tiny ball with strong noise forces exits; frozen afterwards.
  PathConfig tight{1.0, 200, 3, 0.05};
  const StoppedPath exiting = simulate_path(tight, make_zero_drift(), NoiseModel::isotropic(1.0), GroupElement());
  REQUIRE(exiting.tau_step.has_value());
  const std::size_t tau = *exiting.tau_step;
  CHECK(distance(GroupElement(), exiting.states[tau]) >= 0.05);
  for (std::size_t k = 1; k < tau; ++k) CHECK(distance(GroupElement(), exiting.states[k]) < 0.05);
  for (std::size_t k = tau; k < exiting.states.size(); ++k) CHECK(exiting.states[k] == exiting.states[tau]);
  CHECK(exiting.stopped_at(tau));
  CHECK_FALSE(exiting.stopped_at(tau - 1));

  // Starting outside the ball stops at step 0.
  const StoppedPath outside = simulate_path(tight, make_zero_drift(), NoiseModel::isotropic(1.0),
                                            group_exp(AlgebraVector(0.5, 0, 0)));
  CHECK(outside.tau_step == std::optional<std::size_t>(0));
}

TEST_CASE("default regime never leaves the ball") {
  const RunConfig run;
  const auto slices = simulate_ensemble(run.path_config(), run.drift(), run.noise(), GroupElement(), 500);
  CHECK(slices.size() == 101);
  CHECK(slices.back().members.size() == 500);
  CHECK(slices.back().stopped_count == 0);
  for (const auto& slice : slices) {
    for (const auto& x : slice.members) REQUIRE(x.is_valid());
  }
}

TEST_CASE("simulate_ensemble") {
  const RunConfig run;
  const PathConfig config = run.path_config();

  SUBCASE("one path equals simulate_path") {
    const auto slices = simulate_ensemble(config, run.drift(), run.noise(), GroupElement(), 1, 1);
    const StoppedPath path = simulate_path(config, run.drift(), run.noise(), GroupElement(), 0);
    for (std::size_t k = 0; k < slices.size(); ++k) CHECK(slices[k].members[0] == path.states[k]);
  }

  SUBCASE("independent of the worker count") {
    const auto serial = simulate_ensemble(config, run.drift(), run.noise(), GroupElement(), 300, 1);
    const auto parallel = simulate_ensemble(config, run.drift(), run.noise(), GroupElement(), 300, 7);
    for (std::size_t k = 0; k < serial.size(); ++k) {
      CHECK(serial[k].members == parallel[k].members);
      CHECK(serial[k].stopped == parallel[k].stopped);
    }
  }

  SUBCASE("zero noise reproduces the deterministic flow") {
    const auto slices = simulate_ensemble(config, run.drift(), NoiseModel::isotropic(0.0), GroupElement(), 4);
    const Eigen::Matrix3d reference = reference_flow(run.drift(), Eigen::Matrix3d::Identity(), config.horizon,
                                                     10 * static_cast<int>(config.steps));
    for (const auto& x : slices.back().members) {
      CHECK(x == slices.back().members[0]);
      CHECK(distance(x, project_to_group(reference)) < 1e-6);
    }
    // The flow of b(X) = X^T A X is X_t = exp(t A).
    CHECK(distance(slices.back().members[0],
                   GroupElement::from_matrix(so3mean::testing::expm_taylor(0.1 * run.A))) < 1e-12);
  }

  SUBCASE("terminal spread matches 3 sigma^2 T") {
    const auto slices = simulate_ensemble(config, run.drift(), run.noise(), GroupElement(), 2000);
    const FrechetResult mean = frechet_mean(slices.back());
    const double trace = empirical_covariance(mean.residuals).trace();
    CHECK(trace == doctest::Approx(3 * 0.01 * 0.1).epsilon(0.10));
  }

  SUBCASE("constant drift has no mean bias beyond statistical noise") {
    const AlgebraVector b0(0.8, -0.3, 0.5);
    const std::size_t n = 4000;
    PathConfig coarse{0.5, 50, 99, kDefaultBallRadius};
    const NoiseModel noise = NoiseModel::isotropic(0.2);
    const auto slices = simulate_ensemble(coarse, make_constant_drift(b0), noise, GroupElement(), n);
    const GroupElement target = group_exp(coarse.horizon * b0);
    AlgebraVector sum = AlgebraVector::Zero();
    AlgebraVector sum2 = AlgebraVector::Zero();
    for (const auto& x : slices.back().members) {
      const AlgebraVector r = relative_log(target, x);
      sum += r;
      sum2 += r.cwiseProduct(r);
    }
    const AlgebraVector mean = sum / double(n);
    const AlgebraVector sd = (sum2 / double(n) - mean.cwiseProduct(mean)).cwiseSqrt();
    const double dt = coarse.dt();
    for (int k = 0; k < 3; ++k) CHECK(std::abs(mean(k)) < 3.0 * sd(k) / std::sqrt(double(n)) + dt);
  }
}

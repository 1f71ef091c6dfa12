#include "so3mean/sde.hpp"

#include "so3mean/errors.hpp"
#include "so3mean/random.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <string>
#include <thread>

namespace so3mean {

NoiseModel NoiseModel::isotropic(double sigma) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw ConfigError("noise scale sigma must be finite and non-negative");
  }
  return {{sigma * AlgebraVector::UnitX(), sigma * AlgebraVector::UnitY(),
           sigma * AlgebraVector::UnitZ()}};
}

CovMatrix NoiseModel::diffusion() const {
  CovMatrix d = CovMatrix::Zero();
  for (const auto& s : sigmas) d += s * s.transpose();
  return d;
}

std::optional<double> NoiseModel::isotropic_scale(double tol) const {
  if (std::all_of(sigmas.begin(), sigmas.end(), [](const auto& s) { return s.isZero(0.0); })) {
    return 0.0;
  }
  if (sigmas.size() != 3) return std::nullopt;
  Eigen::Matrix3d columns;
  for (int i = 0; i < 3; ++i) columns.col(i) = sigmas[i];
  const Eigen::Matrix3d gram = columns.transpose() * columns;
  const double scale2 = gram.trace() / 3.0;
  if ((gram - scale2 * Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > tol * scale2) {
    return std::nullopt;
  }
  return std::sqrt(scale2);
}

void PathConfig::validate() const {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ConfigError("horizon T must be > 0");
  if (steps < 1) throw ConfigError("steps N must be >= 1");
  if (steps >= std::numeric_limits<std::uint32_t>::max()) throw ConfigError("steps N too large");
  const double r_max = ball_constants().max_radius;
  if (!(ball_radius > 0.0) || !(ball_radius <= r_max)) {
    throw ConfigError("ball radius R must lie in (0, " + std::to_string(r_max) + "]");
  }
}

GroupElement step(const GroupElement& x, const DriftModel& drift, const NoiseModel& noise,
                  double dt, std::span<const double> dW) {
  AlgebraVector increment = drift.value(x) * dt;
  const std::size_t m = std::min(noise.sigmas.size(), dW.size());
  for (std::size_t i = 0; i < m; ++i) increment += noise.sigmas[i] * dW[i];
  return x * group_exp(increment);
}

namespace {

void fill_path(const PathConfig& config, const DriftModel& drift, const NoiseModel& noise,
               const GroupElement& x0, std::uint32_t path_id, const NormalStream& normals,
               StoppedPath& path) {
  const std::size_t n = config.steps;
  const double dt = config.dt();
  const double sqrt_dt = std::sqrt(dt);
  const GroupElement e;
  const std::size_t m = noise.sigmas.size();
  std::vector<double> dW(m);

  path.states.assign(n + 1, x0);
  path.tau_step.reset();
  if (distance(e, x0) >= config.ball_radius) {
    path.tau_step = 0;
    return;
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < m; ++i) {
      dW[i] = sqrt_dt * normals.standard_normal(path_id, static_cast<std::uint32_t>(k),
                                                static_cast<std::uint32_t>(i));
    }
    path.states[k + 1] = step(path.states[k], drift, noise, dt, dW);
    if (distance(e, path.states[k + 1]) >= config.ball_radius) {
      path.tau_step = k + 1;
      std::fill(path.states.begin() + static_cast<std::ptrdiff_t>(k + 2), path.states.end(),
                path.states[k + 1]);
      return;
    }
  }
}

}  // namespace

StoppedPath simulate_path(const PathConfig& config, const DriftModel& drift,
                          const NoiseModel& noise, const GroupElement& x0,
                          std::uint32_t path_id) {
  config.validate();
  StoppedPath path;
  fill_path(config, drift, noise, x0, path_id, NormalStream(config.seed), path);
  return path;
}

std::vector<Ensemble> simulate_ensemble(const PathConfig& config, const DriftModel& drift,
                                        const NoiseModel& noise, const GroupElement& x0,
                                        std::size_t n_paths, unsigned workers) {
  config.validate();
  if (n_paths < 1) throw ConfigError("n_paths must be >= 1");
  if (n_paths > std::numeric_limits<std::uint32_t>::max()) throw ConfigError("n_paths too large");

  const NormalStream normals(config.seed);
  std::vector<StoppedPath> paths(n_paths);

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n_paths));

  // Each path writes only its own slot; the split into strided chunks is
  // irrelevant to the result.
  std::vector<std::exception_ptr> failures(workers);
  auto run = [&](unsigned worker) {
    try {
      for (std::size_t j = worker; j < n_paths; j += workers) {
        fill_path(config, drift, noise, x0, static_cast<std::uint32_t>(j), normals, paths[j]);
      }
    } catch (...) {
      failures[worker] = std::current_exception();
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }

  std::vector<Ensemble> slices(config.steps + 1);
  for (std::size_t k = 0; k <= config.steps; ++k) {
    Ensemble& slice = slices[k];
    slice.members.reserve(n_paths);
    slice.stopped.reserve(n_paths);
    for (const auto& path : paths) {
      slice.members.push_back(path.states[k]);
      const bool stopped = path.stopped_at(k);
      slice.stopped.push_back(stopped ? 1 : 0);
      slice.stopped_count += stopped ? 1 : 0;
    }
  }
  return slices;
}

}  // namespace so3mean

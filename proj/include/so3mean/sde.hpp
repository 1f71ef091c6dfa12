#pragma once

#include "so3mean/drift.hpp"
#include "so3mean/lie.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace so3mean {

/// Diffusion directions sigma_1..sigma_m of W_t = sum_i sigma_i W^i_t.
struct NoiseModel {
  std::vector<AlgebraVector> sigmas;

  /// (sigma G_1, sigma G_2, sigma G_3). sigma = 0 is accepted and means no noise.
  static NoiseModel isotropic(double sigma);

  /// sum_i sigma_i sigma_i^T.
  CovMatrix diffusion() const;

  /// Returns sigma when the directions are sigma times an orthonormal basis of
  /// the algebra (or all vanish), nothing otherwise.
  std::optional<double> isotropic_scale(double tol = 1e-12) const;
};

/// Default ball radius for stopping, below R_max ~ 2.2214.
inline constexpr double kDefaultBallRadius = 2.0;

struct PathConfig {
  double horizon = 0.1;  // T, seconds
  std::size_t steps = 100;
  std::uint64_t seed = 42;
  double ball_radius = kDefaultBallRadius;

  double dt() const { return horizon / static_cast<double>(steps); }

  /// Throws ConfigError when T <= 0, N < 1 or R outside (0, R_max].
  void validate() const;
};

/// Path on the grid t_k = k T / N, frozen after its first exit from B(e, R).
struct StoppedPath {
  std::vector<GroupElement> states;
  std::optional<std::size_t> tau_step;

  bool stopped_at(std::size_t k) const { return tau_step && k >= *tau_step; }
};

/// All paths at one grid time.
struct Ensemble {
  std::vector<GroupElement> members;
  std::vector<std::uint8_t> stopped;  // per-member exit flag
  std::size_t stopped_count = 0;
};

/// x exp(b(x) dt + sum_i sigma_i dW_i). Exponential Euler-Maruyama; the
/// exponential coordinates already produce the Stratonovich solution.
GroupElement step(const GroupElement& x, const DriftModel& drift, const NoiseModel& noise,
                  double dt, std::span<const double> dW);

/// One path, with Brownian increments sqrt(dt) * N(0, 1) keyed by
/// (seed, path_id, step, component).
StoppedPath simulate_path(const PathConfig& config, const DriftModel& drift,
                          const NoiseModel& noise, const GroupElement& x0,
                          std::uint32_t path_id = 0);

/**
 * n_paths independent paths sliced by time: result[k] holds every path at t_k.
 * `workers` = 0 uses the hardware concurrency. The output does not depend on
 * the number of workers.
 */
std::vector<Ensemble> simulate_ensemble(const PathConfig& config, const DriftModel& drift,
                                        const NoiseModel& noise, const GroupElement& x0,
                                        std::size_t n_paths, unsigned workers = 0);

}  // namespace so3mean

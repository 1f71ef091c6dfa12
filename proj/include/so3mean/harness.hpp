#pragma once

#include "so3mean/frechet.hpp"
#include "so3mean/predictor.hpp"
#include "so3mean/sde.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace so3mean {

/// A = hat_std(0.8, -0.4, 0.5), a rotation rate of about 1.02 rad/s.
Eigen::Matrix3d default_drift_matrix();

struct RunConfig {
  Eigen::Matrix3d A = default_drift_matrix();
  double sigma = 0.1;
  double T = 0.1;
  std::size_t N = 100;
  std::size_t n_mc = 500;
  std::uint64_t seed = 42;
  double R = kDefaultBallRadius;
  CovarianceVariant variant = CovarianceVariant::general;

  // Run options, not part of the config file.
  std::filesystem::path outputs = "out";
  bool all_slices = false;
  unsigned workers = 0;

  /// Throws ConfigError on any violated precondition.
  void validate() const;

  /// Config-file keys only: A, sigma, T, N, n_mc, seed, R, variant.
  nlohmann::json to_json() const;

  /// Missing keys keep their defaults; unknown keys and bad values throw ConfigError.
  static RunConfig from_json(const nlohmann::json& j);
  /// IoError when the file cannot be read, ConfigError for bad content.
  static RunConfig load(const std::filesystem::path& path);

  /// FNV-1a 64 of the canonical config JSON, as 16 hex digits.
  std::string hash() const;

  PathConfig path_config() const;
  DriftModel drift() const;
  NoiseModel noise() const;

  /// Smallest multiple of N that is >= 100, so every ensemble slice has a
  /// matching predictor state.
  std::size_t predictor_steps() const;
};

struct PhaseTimings {
  double simulate = 0.0;
  double frechet = 0.0;
  double predict = 0.0;
  double total = 0.0;
};

struct ComparisonReport {
  double mean_distance = 0.0;       // rho(E_ode(T), E_mc(T))
  double cov_rel_error = 0.0;       // |Sigma_pred - Sigma_emp|_F / |Sigma_emp|_F
  std::size_t stopped_paths = 0;
  double residual_centering = 0.0;  // |mean_j nu_j| at the oracle mean
  GroupElement predicted_mean;
  CovMatrix predicted_cov = CovMatrix::Zero();
  FrechetResult oracle;
  CovMatrix empirical_cov = CovMatrix::Zero();
  std::vector<double> slice_mean_distances;  // filled with --all-slices
  PhaseTimings timings;

  nlohmann::json to_json(bool with_timings = true) const;
};

/// Relative Frobenius error; falls back to the absolute error when the
/// reference is exactly zero.
double relative_frobenius_error(const CovMatrix& predicted, const CovMatrix& reference);

/// Writes manifest.json with the config, its hash and the run options.
void write_manifest(const RunConfig& config, const std::string& command);

/// CSV `path_id,step,t,m00..m22,stopped` for one slice.
void write_ensemble_csv(const std::filesystem::path& path, const Ensemble& slice,
                        std::size_t step, double t);
Ensemble read_ensemble_csv(const std::filesystem::path& path);

/// CSV `step,t,m00..m22,s00,s01,s02,s11,s12,s22`.
void write_prediction_csv(const std::filesystem::path& path,
                          const std::vector<PredictionState>& trajectory);

std::vector<PredictionState> run_prediction(const RunConfig& config);

/// Writes manifest.json and ensemble_<step>.csv for every grid time.
std::vector<Ensemble> cmd_simulate(const RunConfig& config);

/// Writes manifest.json and prediction.csv.
std::vector<PredictionState> cmd_predict(const RunConfig& config);

/// Simulates, computes the oracle mean at T, integrates the predictor and writes
/// manifest.json, prediction.csv, the terminal ensemble CSV (all slices with
/// all_slices) and report.json.
ComparisonReport cmd_compare(const RunConfig& config);

/// Runs the comparison without touching the filesystem.
ComparisonReport compare(const RunConfig& config);

/// Renders figure.svg from the report.json and terminal ensemble CSV left by
/// cmd_compare in config.outputs. Returns the SVG text.
std::string cmd_figure(const RunConfig& config);

struct FigureInput {
  std::vector<GroupElement> cloud;
  GroupElement predicted_mean;
  GroupElement oracle_mean;
  std::string config_hash;
};

std::string render_figure_svg(const FigureInput& input);

}  // namespace so3mean

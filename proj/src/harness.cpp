#include "so3mean/harness.hpp"

#include "so3mean/errors.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>

namespace so3mean {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::size_t kMinPredictorSteps = 100;

const char* const kConfigKeys[] = {"A", "sigma", "T", "N", "n_mc", "seed", "R", "variant"};

std::string format_g17(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

json row_major_json(const Eigen::Matrix3d& m) {
  json out = json::array();
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) out.push_back(m(r, c));
  }
  return out;
}

Eigen::Matrix3d matrix_from_json(const json& j, std::string_view key) {
  if (!j.is_array() || j.size() != 9) {
    throw ConfigError(std::string(key) + " must be an array of 9 numbers (row-major)");
  }
  Eigen::Matrix3d m;
  for (int i = 0; i < 9; ++i) {
    if (!j[i].is_number()) throw ConfigError(std::string(key) + " entries must be numbers");
    m(i / 3, i % 3) = j[i].get<double>();
  }
  return m;
}

double number_from_json(const json& j, std::string_view key) {
  if (!j.is_number()) throw ConfigError(std::string(key) + " must be a number");
  return j.get<double>();
}

std::uint64_t count_from_json(const json& j, std::string_view key) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(j.get<std::int64_t>());
  }
  throw ConfigError(std::string(key) + " must be a non-negative integer");
}

void write_text(const fs::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create directory " + path.parent_path().string());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

fs::path ensemble_path(const RunConfig& config, std::size_t step) {
  return config.outputs / ("ensemble_" + std::to_string(step) + ".csv");
}

}  // namespace

Eigen::Matrix3d default_drift_matrix() { return hat_std(Eigen::Vector3d(0.8, -0.4, 0.5)); }

void RunConfig::validate() const {
  if (!A.allFinite()) throw ConfigError("A must be finite");
  try {
    make_conjugation_drift(A);
  } catch (const NotAntisymmetric& e) {
    throw ConfigError(e.what());
  }
  if (!std::isfinite(sigma) || sigma < 0.0) throw ConfigError("sigma must be finite and >= 0");
  if (n_mc < 1) throw ConfigError("n_mc must be >= 1");
  path_config().validate();
}

json RunConfig::to_json() const {
  return json{{"A", row_major_json(A)}, {"sigma", sigma}, {"T", T},   {"N", N},
              {"n_mc", n_mc},           {"seed", seed},   {"R", R},   {"variant", so3mean::to_string(variant)}};
}

RunConfig RunConfig::from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    bool known = false;
    for (const char* k : kConfigKeys) known = known || key == k;
    if (!known) throw ConfigError("unknown config key '" + key + "'");
  }
  RunConfig c;
  if (j.contains("A")) c.A = matrix_from_json(j["A"], "A");
  if (j.contains("sigma")) c.sigma = number_from_json(j["sigma"], "sigma");
  if (j.contains("T")) c.T = number_from_json(j["T"], "T");
  if (j.contains("N")) c.N = count_from_json(j["N"], "N");
  if (j.contains("n_mc")) c.n_mc = count_from_json(j["n_mc"], "n_mc");
  if (j.contains("seed")) c.seed = count_from_json(j["seed"], "seed");
  if (j.contains("R")) c.R = number_from_json(j["R"], "R");
  if (j.contains("variant")) {
    if (!j["variant"].is_string()) throw ConfigError("variant must be a string");
    c.variant = parse_variant(j["variant"].get<std::string>());
  }
  c.validate();
  return c;
}

RunConfig RunConfig::load(const fs::path& path) {
  const std::string text = read_text(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return from_json(j);
}

std::string RunConfig::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : to_json().dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

PathConfig RunConfig::path_config() const { return {T, N, seed, R}; }

DriftModel RunConfig::drift() const { return make_conjugation_drift(A); }

NoiseModel RunConfig::noise() const { return NoiseModel::isotropic(sigma); }

std::size_t RunConfig::predictor_steps() const {
  if (N >= kMinPredictorSteps) return N;
  return N * ((kMinPredictorSteps + N - 1) / N);
}

json ComparisonReport::to_json(bool with_timings) const {
  json j{
      {"mean_distance", mean_distance},
      {"cov_rel_error", cov_rel_error},
      {"stopped_paths", stopped_paths},
      {"residual_centering", residual_centering},
      {"predicted", {{"mean", row_major_json(predicted_mean.matrix())},
                     {"covariance", row_major_json(predicted_cov)}}},
      {"oracle", {{"mean", row_major_json(oracle.mean.matrix())},
                  {"residual_norm_mean", oracle.centering()},
                  {"iterations", oracle.iterations},
                  {"covariance", row_major_json(empirical_cov)}}},
  };
  if (!slice_mean_distances.empty()) j["slice_mean_distances"] = slice_mean_distances;
  if (with_timings) {
    j["timings"] = {{"simulate", timings.simulate},
                    {"frechet", timings.frechet},
                    {"predict", timings.predict},
                    {"total", timings.total}};
  }
  return j;
}

double relative_frobenius_error(const CovMatrix& predicted, const CovMatrix& reference) {
  const double diff = (predicted - reference).norm();
  const double scale = reference.norm();
  return scale > 0.0 ? diff / scale : diff;
}

void write_manifest(const RunConfig& config, const std::string& command) {
  const json manifest{{"command", command},
                      {"config", config.to_json()},
                      {"config_hash", config.hash()},
                      {"seed", config.seed},
                      {"all_slices", config.all_slices},
                      {"predictor_steps", config.predictor_steps()}};
  write_text(config.outputs / "manifest.json", manifest.dump(2) + "\n");
}

void write_ensemble_csv(const fs::path& path, const Ensemble& slice, std::size_t step, double t) {
  std::string text = "path_id,step,t,m00,m01,m02,m10,m11,m12,m20,m21,m22,stopped\n";
  const std::string step_text = std::to_string(step);
  const std::string t_text = format_g17(t);
  for (std::size_t j = 0; j < slice.members.size(); ++j) {
    text += std::to_string(j) + ',' + step_text + ',' + t_text;
    for (double v : slice.members[j].row_major()) text += ',' + format_g17(v);
    text += ',' + std::to_string(slice.stopped.empty() ? 0 : int(slice.stopped[j])) + '\n';
  }
  write_text(path, text);
}

Ensemble read_ensemble_csv(const fs::path& path) {
  std::istringstream in(read_text(path));
  std::string line;
  if (!std::getline(in, line) || line.rfind("path_id,step,t,", 0) != 0) {
    throw IoError(path.string() + " is not an ensemble CSV");
  }
  Ensemble slice;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream row(line);
    std::string field;
    while (std::getline(row, field, ',')) fields.push_back(field);
    if (fields.size() != 13) throw IoError("malformed row in " + path.string());
    std::array<double, 9> m{};
    try {
      for (int i = 0; i < 9; ++i) m[i] = std::stod(fields[3 + i]);
    } catch (const std::exception&) {
      throw IoError("malformed number in " + path.string());
    }
    slice.members.push_back(GroupElement::from_row_major(m));
    const bool stopped = fields[12] == "1";
    slice.stopped.push_back(stopped ? 1 : 0);
    slice.stopped_count += stopped ? 1 : 0;
  }
  if (slice.members.empty()) throw IoError(path.string() + " has no members");
  return slice;
}

void write_prediction_csv(const fs::path& path, const std::vector<PredictionState>& trajectory) {
  std::string text = "step,t,m00,m01,m02,m10,m11,m12,m20,m21,m22,s00,s01,s02,s11,s12,s22\n";
  for (std::size_t k = 0; k < trajectory.size(); ++k) {
    const auto& s = trajectory[k];
    text += std::to_string(k) + ',' + format_g17(s.t);
    for (double v : s.mean.row_major()) text += ',' + format_g17(v);
    for (auto [r, c] : {std::pair{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}}) {
      text += ',' + format_g17(s.cov(r, c));
    }
    text += '\n';
  }
  write_text(path, text);
}

std::vector<PredictionState> run_prediction(const RunConfig& config) {
  config.validate();
  IntegrationOptions options;
  options.ball_radius = config.R;
  return integrate(PredictionState{}, config.drift(), config.noise(), config.T,
                   config.predictor_steps(), config.variant, options);
}

std::vector<Ensemble> cmd_simulate(const RunConfig& config) {
  config.validate();
  auto slices = simulate_ensemble(config.path_config(), config.drift(), config.noise(),
                                  GroupElement::identity(), config.n_mc, config.workers);
  write_manifest(config, "simulate");
  const double dt = config.path_config().dt();
  for (std::size_t k = 0; k < slices.size(); ++k) {
    write_ensemble_csv(ensemble_path(config, k), slices[k], k, static_cast<double>(k) * dt);
  }
  return slices;
}

std::vector<PredictionState> cmd_predict(const RunConfig& config) {
  auto trajectory = run_prediction(config);
  write_manifest(config, "predict");
  write_prediction_csv(config.outputs / "prediction.csv", trajectory);
  return trajectory;
}

namespace {

struct CompareArtifacts {
  ComparisonReport report;
  std::vector<Ensemble> slices;
  std::vector<PredictionState> trajectory;
};

CompareArtifacts run_compare(const RunConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  CompareArtifacts out;
  ComparisonReport& report = out.report;

  auto phase = std::chrono::steady_clock::now();
  out.slices = simulate_ensemble(config.path_config(), config.drift(), config.noise(),
                                 GroupElement::identity(), config.n_mc, config.workers);
  report.timings.simulate = seconds_since(phase);

  phase = std::chrono::steady_clock::now();
  const Ensemble& terminal = out.slices.back();
  report.oracle = frechet_mean(terminal);
  report.empirical_cov = empirical_covariance(report.oracle.residuals);
  report.residual_centering = report.oracle.centering();
  report.stopped_paths = terminal.stopped_count;
  report.timings.frechet = seconds_since(phase);

  phase = std::chrono::steady_clock::now();
  out.trajectory = run_prediction(config);
  report.timings.predict = seconds_since(phase);

  const PredictionState& final_state = out.trajectory.back();
  report.predicted_mean = final_state.mean;
  report.predicted_cov = final_state.cov;
  report.mean_distance = distance(final_state.mean, report.oracle.mean);
  report.cov_rel_error = relative_frobenius_error(final_state.cov, report.empirical_cov);

  if (config.all_slices) {
    const std::size_t stride = config.predictor_steps() / config.N;
    for (std::size_t k = 0; k < out.slices.size(); ++k) {
      const FrechetResult slice_mean = frechet_mean(out.slices[k]);
      report.slice_mean_distances.push_back(
          distance(out.trajectory[k * stride].mean, slice_mean.mean));
    }
  }
  report.timings.total = seconds_since(start);
  return out;
}

}  // namespace

ComparisonReport compare(const RunConfig& config) { return run_compare(config).report; }

ComparisonReport cmd_compare(const RunConfig& config) {
  CompareArtifacts artifacts = run_compare(config);
  write_manifest(config, "compare");
  write_prediction_csv(config.outputs / "prediction.csv", artifacts.trajectory);
  const double dt = config.path_config().dt();
  if (config.all_slices) {
    for (std::size_t k = 0; k < artifacts.slices.size(); ++k) {
      write_ensemble_csv(ensemble_path(config, k), artifacts.slices[k], k,
                         static_cast<double>(k) * dt);
    }
  } else {
    write_ensemble_csv(ensemble_path(config, config.N), artifacts.slices.back(), config.N,
                       static_cast<double>(config.N) * dt);
  }
  json report = artifacts.report.to_json();
  report["config_hash"] = config.hash();
  write_text(config.outputs / "report.json", report.dump(2) + "\n");
  return artifacts.report;
}

std::string cmd_figure(const RunConfig& config) {
  config.validate();
  json report;
  try {
    report = json::parse(read_text(config.outputs / "report.json"));
  } catch (const json::parse_error& e) {
    throw IoError(std::string("report.json is not valid JSON: ") + e.what());
  }
  auto mean_from = [&](const char* section) {
    try {
      std::array<double, 9> m{};
      const json& values = report.at(section).at("mean");
      for (std::size_t i = 0; i < 9; ++i) m[i] = values.at(i).get<double>();
      return GroupElement::from_row_major(m);
    } catch (const json::exception& e) {
      throw IoError(std::string("report.json lacks ") + section + ".mean: " + e.what());
    }
  };
  FigureInput input;
  input.predicted_mean = mean_from("predicted");
  input.oracle_mean = mean_from("oracle");
  input.cloud = read_ensemble_csv(ensemble_path(config, config.N)).members;
  input.config_hash = config.hash();
  std::string svg = render_figure_svg(input);
  write_text(config.outputs / "figure.svg", svg);
  return svg;
}

}  // namespace so3mean

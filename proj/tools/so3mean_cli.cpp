// Command-line driver: simulate | predict | compare | figure | selftest.

#include "so3mean/errors.hpp"
#include "so3mean/harness.hpp"
#include "so3mean/selftest.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

namespace {

enum ExitCode : int { kOk = 0, kFailure = 1, kConfig = 2, kNumerical = 3, kIo = 4 };

struct Flags {
  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<std::string> variant;
  bool all_slices = false;
  unsigned workers = 0;
};

void add_run_flags(CLI::App* cmd, Flags& flags) {
  cmd->add_option("--config", flags.config_path, "JSON config (A, sigma, T, N, n_mc, seed, R, variant)");
  cmd->add_option("--out", flags.out_dir, "output directory")->capture_default_str();
  cmd->add_option("--seed", flags.seed, "override the master seed");
  cmd->add_option("--variant", flags.variant, "covariance law")
      ->check(CLI::IsMember({"general-eq7", "paper-eq9"}));
  cmd->add_flag("--all-slices", flags.all_slices, "compare and dump every time slice");
  cmd->add_option("--workers", flags.workers, "simulation threads (0 = all cores)");
}

so3mean::RunConfig resolve(const Flags& flags) {
  so3mean::RunConfig config =
      flags.config_path.empty() ? so3mean::RunConfig{} : so3mean::RunConfig::load(flags.config_path);
  if (flags.seed) config.seed = *flags.seed;
  if (flags.variant) config.variant = so3mean::parse_variant(*flags.variant);
  config.outputs = flags.out_dir;
  config.all_slices = flags.all_slices;
  config.workers = flags.workers;
  config.validate();
  return config;
}

void print_report(const so3mean::ComparisonReport& r) {
  std::printf("mean_distance      %.6e\n", r.mean_distance);
  std::printf("cov_rel_error      %.6e\n", r.cov_rel_error);
  std::printf("stopped_paths      %zu\n", r.stopped_paths);
  std::printf("residual_centering %.3e\n", r.residual_centering);
  std::printf("oracle iterations  %zu\n", r.oracle.iterations);
  std::printf("time               %.3f s\n", r.timings.total);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frechet mean prediction for diffusions on SO(3)"};
  app.require_subcommand(1);
  Flags flags;

  auto* simulate = app.add_subcommand("simulate", "simulate the SDE ensemble and dump CSV slices");
  auto* predict = app.add_subcommand("predict", "integrate the mean/covariance ODE system");
  auto* compare = app.add_subcommand("compare", "compare prediction with the Monte Carlo Frechet mean");
  auto* figure = app.add_subcommand("figure", "render figure.svg from compare outputs");
  auto* selftest = app.add_subcommand("selftest", "run the invariant suite");
  for (auto* cmd : {simulate, predict, compare, figure}) add_run_flags(cmd, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    if (selftest->parsed()) {
      const bool ok = so3mean::print_selftest(std::cout, so3mean::run_selftest());
      return ok ? kOk : kFailure;
    }
    const so3mean::RunConfig config = resolve(flags);
    if (simulate->parsed()) {
      const auto slices = so3mean::cmd_simulate(config);
      std::printf("wrote %zu slices x %zu paths to %s (stopped at T: %zu)\n", slices.size(),
                  config.n_mc, config.outputs.string().c_str(), slices.back().stopped_count);
    } else if (predict->parsed()) {
      const auto trajectory = so3mean::cmd_predict(config);
      std::printf("wrote %zu states to %s\n", trajectory.size(),
                  (config.outputs / "prediction.csv").string().c_str());
    } else if (compare->parsed()) {
      print_report(so3mean::cmd_compare(config));
    } else if (figure->parsed()) {
      so3mean::cmd_figure(config);
      std::printf("wrote %s\n", (config.outputs / "figure.svg").string().c_str());
    }
  } catch (const so3mean::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const so3mean::IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kIo;
  } catch (const so3mean::Error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  }
  return kOk;
}

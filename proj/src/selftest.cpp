#include "so3mean/selftest.hpp"

#include "so3mean/drift.hpp"
#include "so3mean/harness.hpp"
#include "so3mean/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>

namespace so3mean {

namespace {

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  AlgebraVector vector(double scale = 1.0) {
    return scale * AlgebraVector(normal_(rng_), normal_(rng_), normal_(rng_));
  }
  GroupElement rotation() { return group_exp(vector(1.5)); }
  CovMatrix covariance(double trace) {
    Eigen::Matrix3d m;
    for (int i = 0; i < 9; ++i) m(i / 3, i % 3) = normal_(rng_);
    CovMatrix s = m * m.transpose();
    return s * (trace / s.trace());
  }
  Eigen::Matrix3d matrix() {
    Eigen::Matrix3d m;
    for (int i = 0; i < 9; ++i) m(i / 3, i % 3) = normal_(rng_);
    return m;
  }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

SelftestCheck make_check(std::string name, double tolerance, double observed) {
  return {std::move(name), tolerance, observed, observed <= tolerance};
}

// A drift with a genuinely nonzero Hessian correction: a conjugation part plus
// vee(P X - X^T P^T), differentiated numerically.
DriftModel generic_drift(const Eigen::Matrix3d& skew, const Eigen::Matrix3d& p) {
  return make_finite_difference_drift([skew, p](const GroupElement& x) -> AlgebraVector {
    const Eigen::Matrix3d& m = x.matrix();
    return vee(m.transpose() * skew * m) + vee(p * m - m.transpose() * p.transpose());
  });
}

}  // namespace

std::vector<SelftestCheck> run_selftest(const SelftestOptions& options) {
  const BracketFn& br = options.bracket;
  Sampler sample(options.seed);
  std::vector<SelftestCheck> checks;
  const AlgebraVector e[3] = {AlgebraVector::UnitX(), AlgebraVector::UnitY(),
                              AlgebraVector::UnitZ()};

  {
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
      worst = std::max(worst, (br(e[i], e[(i + 1) % 3]) - e[(i + 2) % 3] * kInvSqrt2).norm());
    }
    checks.push_back(make_check("structure constants [G1,G2]=G3/sqrt2 (cyclic)", 1e-15, worst));
  }

  double commutator = 0.0, jacobi = 0.0, triple = 0.0, outer = 0.0;
  for (int n = 0; n < options.instances; ++n) {
    const AlgebraVector u = sample.vector(), v = sample.vector(), w = sample.vector();
    const Eigen::Matrix3d comm = hat(u) * hat(v) - hat(v) * hat(u);
    commutator = std::max(commutator, (hat(br(u, v)) - comm).norm());
    jacobi = std::max(jacobi, (br(u, br(v, w)) + br(v, br(w, u)) + br(w, br(u, v))).norm());

    AlgebraVector sum_triple = AlgebraVector::Zero();
    CovMatrix sum_outer = CovMatrix::Zero();
    for (const auto& g : e) {
      sum_triple += br(br(br(g, u), u), g);
      const AlgebraVector gu = br(g, u);
      sum_outer += gu * gu.transpose();
    }
    const CovMatrix expected = 0.5 * (u.squaredNorm() * CovMatrix::Identity() - u * u.transpose());
    triple = std::max(triple, sum_triple.norm());
    outer = std::max(outer, (sum_outer - expected).cwiseAbs().maxCoeff());
  }
  checks.push_back(make_check("bracket equals hat commutator", 1e-13, commutator));
  checks.push_back(make_check("Jacobi identity", 1e-12, jacobi));
  checks.push_back(make_check("sum_i [[[G_i,nu],nu],G_i] = 0", 1e-12, triple));
  checks.push_back(make_check("sum_i [G_i,nu](x)[G_i,nu] = |nu|^2/2 Id_perp", 1e-12, outer));

  {
    double roundtrip = 0.0, invariance = 0.0;
    const double max_norm = kSqrt2 * (std::numbers::pi - 0.01);
    for (int n = 0; n < options.instances; ++n) {
      AlgebraVector c = sample.vector(2.0);
      if (c.norm() > max_norm) c *= max_norm / c.norm();
      roundtrip = std::max(roundtrip, (group_log(group_exp(c)) - c).norm());
      const GroupElement g = sample.rotation(), x = sample.rotation(), y = sample.rotation();
      const double d = distance(x, y);
      invariance = std::max({invariance, std::abs(distance(g * x, g * y) - d),
                             std::abs(distance(x * g, y * g) - d)});
    }
    checks.push_back(make_check("log(exp(c)) = c", 1e-10, roundtrip));
    checks.push_back(make_check("distance bi-invariance", 1e-10, invariance));
  }

  {
    const NoiseModel noise = NoiseModel::isotropic(0.1);
    double general_vs_so3 = 0.0, so3_vs_connection = 0.0, cancellation = 0.0;
    for (int n = 0; n < options.instances; ++n) {
      const Eigen::Matrix3d skew = hat_std(sample.vector());
      const DriftModel drift = generic_drift(skew, sample.matrix());
      const PredictionState state{sample.rotation(), sample.covariance(0.1), 0.0};
      const AlgebraVector h = h_so3(state, drift, noise);
      general_vs_so3 = std::max(general_vs_so3, (h_general(state, drift, noise) - h).norm());
      so3_vs_connection = std::max(so3_vs_connection, (h_connection_form(state, drift) - h).norm());

      const DriftModel conj = make_conjugation_drift(skew);
      cancellation = std::max(cancellation,
                              (h_so3(state, conj, noise) - conj.value(state.mean)).norm());
    }
    checks.push_back(make_check("mean velocity: SO(3) form = general form", 1e-12, general_vs_so3));
    checks.push_back(make_check("mean velocity: SO(3) form = connection form", 1e-12,
                                so3_vs_connection));
    checks.push_back(make_check("conjugation drift: h - b(E) = 0", 1e-13, cancellation));
  }

  {
    const double sigma = 0.1, horizon = 0.1;
    const NoiseModel noise = NoiseModel::isotropic(sigma);
    const DriftModel zero = make_zero_drift();
    const auto printed =
        integrate({}, zero, noise, horizon, 100, CovarianceVariant::so3_isotropic).back().cov;
    const auto general = integrate({}, zero, noise, horizon, 100, CovarianceVariant::general).back().cov;
    const double s_printed = 4.0 * sigma * sigma * std::expm1(horizon / 4.0);
    const double s_general = -12.0 * std::expm1(-sigma * sigma * horizon / 12.0);
    checks.push_back(make_check(
        "closed form, isotropic SO(3) law: 4 sigma^2 (e^{T/4} - 1) I", 1e-8,
        (printed - s_printed * CovMatrix::Identity()).norm() / (s_printed * std::sqrt(3.0))));
    checks.push_back(make_check(
        "closed form, general law: 12 (1 - e^{-sigma^2 T/12}) I", 1e-8,
        (general - s_general * CovMatrix::Identity()).norm() / (s_general * std::sqrt(3.0))));

    RunConfig config;
    const auto drift = config.drift();
    const auto a = integrate({}, drift, noise, horizon, 100, CovarianceVariant::general).back().cov;
    const auto b = integrate({}, drift, noise, horizon, 100, CovarianceVariant::so3_isotropic).back().cov;
    checks.push_back(make_check("covariance law gap at sigma = 0.1, T = 0.1", 2e-2,
                                (a - b).norm() / a.norm()));
  }
  return checks;
}

bool print_selftest(std::ostream& out, const std::vector<SelftestCheck>& checks) {
  bool all = true;
  for (const auto& c : checks) {
    char line[200];
    std::snprintf(line, sizeof(line), "[%s] %-58s err %.3e  tol %.1e\n",
                  c.passed ? "PASS" : "FAIL", c.name.c_str(), c.observed, c.tolerance);
    out << line;
    all = all && c.passed;
  }
  out << (all ? "selftest: all checks passed\n" : "selftest: FAILED\n");
  return all;
}

}  // namespace so3mean

#include "so3mean/frechet.hpp"

#include "so3mean/errors.hpp"

#include <string>

namespace so3mean {

namespace {

std::vector<AlgebraVector> residuals_at(std::span<const GroupElement> members,
                                        const GroupElement& g) {
  std::vector<AlgebraVector> out;
  out.reserve(members.size());
  const GroupElement g_inv = g.inverse();
  for (const auto& x : members) out.push_back(group_log(g_inv * x));
  return out;
}

double mean_squared_norm(std::span<const AlgebraVector> residuals) {
  double total = 0.0;
  for (const auto& r : residuals) total += r.squaredNorm();
  return total / static_cast<double>(residuals.size());
}

}  // namespace

double FrechetResult::centering() const {
  if (residuals.empty()) return 0.0;
  return (pairwise_sum(residuals) / static_cast<double>(residuals.size())).norm();
}

AlgebraVector pairwise_sum(std::span<const AlgebraVector> values) {
  if (values.empty()) return AlgebraVector::Zero();
  if (values.size() <= 8) {
    AlgebraVector total = AlgebraVector::Zero();
    for (const auto& v : values) total += v;
    return total;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

GroupElement projected_average(std::span<const GroupElement> members) {
  Eigen::Matrix3d total = Eigen::Matrix3d::Zero();
  for (const auto& x : members) total += x.matrix();
  return project_to_group(total / static_cast<double>(members.size()));
}

FrechetResult frechet_mean(std::span<const GroupElement> members, double tol,
                           std::size_t max_iter) {
  if (members.empty()) throw Error("frechet_mean needs a nonempty ensemble");
  const double n = static_cast<double>(members.size());

  FrechetResult result;
  result.mean = projected_average(members);
  result.residuals = residuals_at(members, result.mean);
  result.objective_history.push_back(mean_squared_norm(result.residuals));

  for (std::size_t it = 1; it <= max_iter; ++it) {
    const AlgebraVector update = pairwise_sum(result.residuals) / n;
    result.iterations = it;
    result.final_step_norm = update.norm();
    result.mean = result.mean * group_exp(update);
    result.residuals = residuals_at(members, result.mean);
    result.objective_history.push_back(mean_squared_norm(result.residuals));
    if (result.final_step_norm <= tol) return result;
  }
  throw NoConvergence("Frechet mean did not reach step norm " + std::to_string(tol) + " in " +
                      std::to_string(max_iter) + " iterations (last step " +
                      std::to_string(result.final_step_norm) + ")");
}

double variance_at(std::span<const GroupElement> members, const GroupElement& g) {
  if (members.empty()) return 0.0;
  return mean_squared_norm(residuals_at(members, g));
}

CovMatrix empirical_covariance(std::span<const AlgebraVector> residuals) {
  if (residuals.empty()) throw Error("empirical_covariance needs at least one residual");
  CovMatrix total = CovMatrix::Zero();
  for (const auto& r : residuals) total += r * r.transpose();
  total /= static_cast<double>(residuals.size());
  return 0.5 * (total + total.transpose());
}

}  // namespace so3mean

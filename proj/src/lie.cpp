#include "so3mean/lie.hpp"

#include "so3mean/errors.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <string>

namespace so3mean {

namespace {

constexpr double kSmallAngle = 1e-4;

}  // namespace

GroupElement GroupElement::from_matrix(const Eigen::Matrix3d& m, double tol) {
  GroupElement g(m, Unchecked{});
  if (!g.is_valid(tol)) {
    throw InvalidRotation("matrix is not a rotation within tolerance " + std::to_string(tol));
  }
  return g;
}

GroupElement GroupElement::from_row_major(const std::array<double, 9>& values, double tol) {
  Eigen::Matrix3d m;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) m(r, c) = values[3 * r + c];
  }
  return from_matrix(m, tol);
}

GroupElement GroupElement::operator*(const GroupElement& other) const {
  GroupElement product(m_ * other.m_, Unchecked{});
  if (!product.is_valid()) return project_to_group(product.m_);
  return product;
}

std::array<double, 9> GroupElement::row_major() const {
  std::array<double, 9> out{};
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) out[3 * r + c] = m_(r, c);
  }
  return out;
}

bool GroupElement::is_valid(double tol) const {
  if (!m_.allFinite()) return false;
  const double orth = (m_.transpose() * m_ - Eigen::Matrix3d::Identity()).norm();
  return orth <= tol && std::abs(m_.determinant() - 1.0) <= tol;
}

Eigen::Matrix3d hat_std(const Eigen::Vector3d& w) {
  Eigen::Matrix3d s;
  // clang-format off
  s <<  0.0,  -w.z(),  w.y(),
        w.z(),  0.0,  -w.x(),
       -w.y(),  w.x(),  0.0;
  // clang-format on
  return s;
}

Eigen::Vector3d vee_std(const Eigen::Matrix3d& m) {
  return 0.5 * Eigen::Vector3d(m(2, 1) - m(1, 2), m(0, 2) - m(2, 0), m(1, 0) - m(0, 1));
}

Eigen::Matrix3d hat(const AlgebraVector& c) { return hat_std(c * kInvSqrt2); }

AlgebraVector vee(const Eigen::Matrix3d& m) { return kSqrt2 * vee_std(m); }

AlgebraOperator ad(const AlgebraVector& u) { return hat_std(u) * kInvSqrt2; }

GroupElement group_exp(const AlgebraVector& c) {
  const Eigen::Vector3d w = c * kInvSqrt2;
  const double theta2 = w.squaredNorm();
  const double theta = std::sqrt(theta2);
  double a;  // sin(theta) / theta
  double b;  // (1 - cos(theta)) / theta^2
  if (theta < kSmallAngle) {
    a = 1.0 - theta2 / 6.0;
    b = 0.5 - theta2 / 24.0;
  } else {
    a = std::sin(theta) / theta;
    b = (1.0 - std::cos(theta)) / theta2;
  }
  const Eigen::Matrix3d W = hat_std(w);
  return GroupElement(Eigen::Matrix3d::Identity() + a * W + b * W * W, GroupElement::Unchecked{});
}

double rotation_angle(const GroupElement& g) {
  const Eigen::Matrix3d& m = g.matrix();
  const double s = vee_std(m).norm();
  const double c = 0.5 * (m.trace() - 1.0);
  return std::atan2(s, c);
}

AlgebraVector group_log(const GroupElement& g) {
  const Eigen::Matrix3d& m = g.matrix();
  const Eigen::Vector3d axis_sin = vee_std(m);  // sin(theta) * axis
  const double s = axis_sin.norm();
  const double theta = std::atan2(s, 0.5 * (m.trace() - 1.0));
  if (theta >= std::numbers::pi - kCutLocusMargin) throw AngleNearPi(theta);
  double factor;  // theta / sin(theta)
  if (theta < kSmallAngle) {
    const double t2 = theta * theta;
    factor = 1.0 + t2 / 6.0 + 7.0 * t2 * t2 / 360.0;
  } else {
    factor = theta / s;
  }
  return kSqrt2 * factor * axis_sin;
}

AlgebraVector relative_log(const GroupElement& y, const GroupElement& x) {
  return group_log(y.inverse() * x);
}

double distance(const GroupElement& y, const GroupElement& x) {
  return kSqrt2 * rotation_angle(y.inverse() * x);
}

GroupElement project_to_group(const Eigen::Matrix3d& m) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d u = svd.matrixU();
  const Eigen::Matrix3d v = svd.matrixV();
  if ((u * v.transpose()).determinant() < 0.0) u.col(2) *= -1.0;
  return GroupElement(u * v.transpose(), GroupElement::Unchecked{});
}

BallConstants ball_constants() {
  // K(X, Y) = |[X, Y]|^2 / 4 on orthonormal pairs, and |[G_1, G_2]| = 1 / sqrt(2).
  const double k = 0.25 * bracket(AlgebraVector::UnitX(), AlgebraVector::UnitY()).squaredNorm();
  const double curvature_bound = std::numbers::pi / (2.0 * std::sqrt(k));
  const double injectivity_radius = kSqrt2 * std::numbers::pi;
  return {k, std::min(curvature_bound, 0.5 * injectivity_radius)};
}

BallSpec::BallSpec(GroupElement center, double radius) : center_(center), radius_(radius) {
  if (!(radius > 0.0) || !(radius < ball_constants().max_radius)) {
    throw InvalidBall("ball radius " + std::to_string(radius) + " outside (0, R_max)");
  }
}

}  // namespace so3mean

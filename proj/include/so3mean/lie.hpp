#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <array>
#include <cmath>
#include <numbers>

namespace so3mean {

/**
 * so(3) coordinates in the orthonormal basis G_i = E_i / sqrt(2), where E_i are
 * the standard skew generators ([E_1, E_2] = E_3) and the inner product is the
 * Frobenius one, <A, B> = tr(A^T B).
 *
 * With this metric a rotation by angle theta about the unit axis n has
 * coordinates sqrt(2) * theta * n and the Riemannian distance is sqrt(2) times
 * the rotation angle.
 */
using AlgebraVector = Eigen::Vector3d;

/// Linear map on algebra coordinates (ad(u), differentials, projectors).
using AlgebraOperator = Eigen::Matrix3d;

/// Symmetric second moment E[nu nu^T] in algebra coordinates.
using CovMatrix = Eigen::Matrix3d;

inline constexpr double kSqrt2 = std::numbers::sqrt2;
inline constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

/// Rotation angles at or above pi - kCutLocusMargin have no usable logarithm.
inline constexpr double kCutLocusMargin = 1e-6;

/// Element of SO(3). Construction from a raw matrix is checked.
class GroupElement {
 public:
  static constexpr double kDefaultTolerance = 1e-9;

  GroupElement() : m_(Eigen::Matrix3d::Identity()) {}

  static GroupElement identity() { return GroupElement(); }

  /// Throws InvalidRotation when m^T m != I or det(m) != 1 within `tol`.
  static GroupElement from_matrix(const Eigen::Matrix3d& m, double tol = kDefaultTolerance);

  /// Row-major 9-tuple.
  static GroupElement from_row_major(const std::array<double, 9>& values,
                                     double tol = kDefaultTolerance);

  const Eigen::Matrix3d& matrix() const { return m_; }
  double operator()(int row, int col) const { return m_(row, col); }

  GroupElement inverse() const { return GroupElement(m_.transpose(), Unchecked{}); }

  /// Group product. Falls back to a polar repair only when rounding pushed the
  /// product outside the invariant band.
  GroupElement operator*(const GroupElement& other) const;

  Eigen::Vector3d act(const Eigen::Vector3d& p) const { return m_ * p; }

  std::array<double, 9> row_major() const;

  bool is_valid(double tol = kDefaultTolerance) const;

  bool operator==(const GroupElement& other) const { return m_ == other.m_; }

 private:
  struct Unchecked {};
  GroupElement(const Eigen::Matrix3d& m, Unchecked) : m_(m) {}

  friend GroupElement group_exp(const AlgebraVector& c);
  friend GroupElement project_to_group(const Eigen::Matrix3d& m);

  Eigen::Matrix3d m_;
};

/// Antisymmetric matrix sum_i c_i G_i.
Eigen::Matrix3d hat(const AlgebraVector& c);

/// Inverse of hat on antisymmetric matrices (the symmetric part is ignored).
AlgebraVector vee(const Eigen::Matrix3d& m);

/// Skew matrix of w in the standard generators E_i, i.e. hat_std(w) p = w x p.
Eigen::Matrix3d hat_std(const Eigen::Vector3d& w);
Eigen::Vector3d vee_std(const Eigen::Matrix3d& m);

/// Lie bracket in coordinates: (u x v) / sqrt(2).
inline AlgebraVector bracket(const AlgebraVector& u, const AlgebraVector& v) {
  return u.cross(v) * kInvSqrt2;
}

/// Matrix of v -> bracket(u, v). Antisymmetric.
AlgebraOperator ad(const AlgebraVector& u);

/// Matrix of the adjoint action v -> vee(g hat(v) g^T). For SO(3) in these
/// coordinates this is the rotation matrix itself.
inline AlgebraOperator Ad(const GroupElement& g) { return g.matrix(); }

/// Rodrigues exponential; rotation angle ||c|| / sqrt(2) about c / ||c||.
GroupElement group_exp(const AlgebraVector& c);

/// Rotation angle in [0, pi], computed with atan2 so it is accurate everywhere.
double rotation_angle(const GroupElement& g);

/// Principal logarithm. Throws AngleNearPi when the angle is >= pi - 1e-6.
AlgebraVector group_log(const GroupElement& g);

/// log(y^{-1} x), the left-trivialized Riemannian logarithm at y.
AlgebraVector relative_log(const GroupElement& y, const GroupElement& x);

/// Riemannian distance sqrt(2) * angle(y^{-1} x). Defined for all pairs.
double distance(const GroupElement& y, const GroupElement& x);

/// Nearest rotation in Frobenius norm (SVD polar factor with det fixed to +1).
GroupElement project_to_group(const Eigen::Matrix3d& m);

struct BallConstants {
  double curvature;   // sectional curvature K, constant on SO(3)
  double max_radius;  // largest admissible regular geodesic ball radius
};

/// K = 1/8 and R_max = pi sqrt(2) / 2 for the Frobenius metric.
BallConstants ball_constants();

/// Regular geodesic ball. The radius is validated against ball_constants().
class BallSpec {
 public:
  BallSpec(GroupElement center, double radius);

  const GroupElement& center() const { return center_; }
  double radius() const { return radius_; }
  bool contains(const GroupElement& x) const { return distance(center_, x) < radius_; }

 private:
  GroupElement center_;
  double radius_;
};

}  // namespace so3mean

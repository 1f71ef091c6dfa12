#pragma once

#include "so3mean/lie.hpp"

#include <array>
#include <functional>

namespace so3mean {

/**
 * Bilinear map g x g -> g stored as one 3x3 slice per output coordinate:
 * B(u, v)_k = u^T slice[k] v.
 */
class BilinearMap {
 public:
  BilinearMap() { slices_.fill(Eigen::Matrix3d::Zero()); }
  explicit BilinearMap(const std::array<Eigen::Matrix3d, 3>& slices) : slices_(slices) {}

  /// Tabulates an arbitrary bilinear callable on the basis.
  template <typename F>
  static BilinearMap from_callable(F&& f) {
    std::array<Eigen::Matrix3d, 3> slices;
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        const AlgebraVector out = f(AlgebraVector::Unit(a), AlgebraVector::Unit(b));
        for (int k = 0; k < 3; ++k) slices[k](a, b) = out(k);
      }
    }
    return BilinearMap(slices);
  }

  AlgebraVector operator()(const AlgebraVector& u, const AlgebraVector& v) const {
    return {u.dot(slices_[0] * v), u.dot(slices_[1] * v), u.dot(slices_[2] * v)};
  }

  const Eigen::Matrix3d& slice(int k) const { return slices_[k]; }

  /// Largest |B(e_a, e_b) - B(e_b, e_a)| over basis pairs.
  double asymmetry() const;

 private:
  std::array<Eigen::Matrix3d, 3> slices_;
};

enum class DerivativeMode { analytic, finite_difference };

/**
 * Drift b: G -> g together with its left-trivialized derivatives at g:
 *   differential(g) u   = d/dt b(g exp(t u))      at t = 0
 *   hessian(g)(u, u)    = d^2/dt^2 b(g exp(t u))  at t = 0
 * One-parameter subgroups through g are geodesics of the bi-invariant metric,
 * so the second derivative is the Riemannian Hessian.
 */
struct DriftModel {
  std::function<AlgebraVector(const GroupElement&)> value;
  std::function<AlgebraOperator(const GroupElement&)> differential;
  std::function<BilinearMap(const GroupElement&)> hessian;
  DerivativeMode mode = DerivativeMode::analytic;
};

/// b(X) = vee(X^T A X). Throws NotAntisymmetric unless |A + A^T| <= 1e-12.
DriftModel make_conjugation_drift(const Eigen::Matrix3d& A);

/// Left-invariant drift b(X) = b0.
DriftModel make_constant_drift(const AlgebraVector& b0);

inline DriftModel make_zero_drift() { return make_constant_drift(AlgebraVector::Zero()); }

/// Default first and second difference steps.
inline constexpr double kFirstDifferenceStep = 1e-4;
inline constexpr double kSecondDifferenceStep = 1e-3;

/**
 * Derivatives by central differences along g exp(t e_a). Off-diagonal Hessian
 * entries use the polarization (Q(e_a + e_b) - Q(e_a - e_b)) / 4, so the result
 * is symmetric by construction.
 */
DriftModel make_finite_difference_drift(std::function<AlgebraVector(const GroupElement&)> value,
                                        double first_step = kFirstDifferenceStep,
                                        double second_step = kSecondDifferenceStep);

}  // namespace so3mean

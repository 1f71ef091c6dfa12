#include "so3mean/drift.hpp"

#include "so3mean/errors.hpp"

#include <algorithm>
#include <string>
#include <utility>

namespace so3mean {

double BilinearMap::asymmetry() const {
  double worst = 0.0;
  for (const auto& s : slices_) worst = std::max(worst, (s - s.transpose()).cwiseAbs().maxCoeff());
  return worst;
}

DriftModel make_conjugation_drift(const Eigen::Matrix3d& A) {
  const double skew_error = (A + A.transpose()).cwiseAbs().maxCoeff();
  if (!(skew_error <= 1e-12)) {
    throw NotAntisymmetric("drift matrix A is not antisymmetric (|A + A^T| = " +
                           std::to_string(skew_error) + ")");
  }
  // Only the skew part is kept so that rounding in the input cannot leak into b.
  const Eigen::Matrix3d a = 0.5 * (A - A.transpose());

  DriftModel drift;
  drift.value = [a](const GroupElement& x) -> AlgebraVector {
    return vee(x.matrix().transpose() * a * x.matrix());
  };
  // b(x exp(tu)) = Ad(exp(-tu)) b(x) = b + t [b, u] + t^2/2 [[b, u], u] + ...
  drift.differential = [value = drift.value](const GroupElement& x) -> AlgebraOperator {
    return ad(value(x));
  };
  drift.hessian = [value = drift.value](const GroupElement& x) {
    const AlgebraVector b = value(x);
    return BilinearMap::from_callable([&b](const AlgebraVector& u, const AlgebraVector& v) {
      return AlgebraVector(0.5 * (bracket(bracket(b, u), v) + bracket(bracket(b, v), u)));
    });
  };
  drift.mode = DerivativeMode::analytic;
  return drift;
}

DriftModel make_constant_drift(const AlgebraVector& b0) {
  DriftModel drift;
  drift.value = [b0](const GroupElement&) { return b0; };
  drift.differential = [](const GroupElement&) -> AlgebraOperator {
    return AlgebraOperator::Zero();
  };
  drift.hessian = [](const GroupElement&) { return BilinearMap(); };
  drift.mode = DerivativeMode::analytic;
  return drift;
}

DriftModel make_finite_difference_drift(std::function<AlgebraVector(const GroupElement&)> value,
                                        double first_step, double second_step) {
  if (!(first_step > 0.0) || !(second_step > 0.0)) {
    throw Error("finite-difference steps must be positive");
  }
  DriftModel drift;
  drift.value = value;
  drift.differential = [value, first_step](const GroupElement& g) -> AlgebraOperator {
    AlgebraOperator d;
    for (int a = 0; a < 3; ++a) {
      const AlgebraVector e = AlgebraVector::Unit(a) * first_step;
      d.col(a) = (value(g * group_exp(e)) - value(g * group_exp(-e))) / (2.0 * first_step);
    }
    return d;
  };
  drift.hessian = [value, second_step](const GroupElement& g) {
    const AlgebraVector center = value(g);
    const double h2 = second_step * second_step;
    // Second difference along g exp(t u).
    auto second = [&](const AlgebraVector& u) -> AlgebraVector {
      const AlgebraVector step = u * second_step;
      return (value(g * group_exp(step)) - 2.0 * center + value(g * group_exp(-step))) / h2;
    };
    std::array<Eigen::Matrix3d, 3> slices;
    for (int a = 0; a < 3; ++a) {
      const AlgebraVector diag = second(AlgebraVector::Unit(a));
      for (int k = 0; k < 3; ++k) slices[k](a, a) = diag(k);
      for (int b = a + 1; b < 3; ++b) {
        const AlgebraVector ea = AlgebraVector::Unit(a);
        const AlgebraVector eb = AlgebraVector::Unit(b);
        const AlgebraVector off = 0.25 * (second(ea + eb) - second(ea - eb));
        for (int k = 0; k < 3; ++k) {
          slices[k](a, b) = off(k);
          slices[k](b, a) = off(k);
        }
      }
    }
    return BilinearMap(slices);
  };
  drift.mode = DerivativeMode::finite_difference;
  return drift;
}

}  // namespace so3mean

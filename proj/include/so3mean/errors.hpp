#pragma once

#include <stdexcept>
#include <string>

namespace so3mean {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A logarithm was requested for a rotation whose angle reached the cut locus.
class AngleNearPi : public Error {
 public:
  explicit AngleNearPi(double angle)
      : Error("rotation angle " + std::to_string(angle) + " too close to pi for a logarithm"),
        angle_(angle) {}
  double angle() const noexcept { return angle_; }

 private:
  double angle_;
};

class InvalidRotation : public Error {
 public:
  using Error::Error;
};

class InvalidBall : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  using Error::Error;
};

class NonIsotropicNoise : public Error {
 public:
  using Error::Error;
};

class CovarianceBlowup : public Error {
 public:
  using Error::Error;
};

class NotAntisymmetric : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace so3mean

#pragma once

#include <array>
#include <cstdint>

namespace so3mean {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
/// Stateless: each (key, counter) pair maps to four independent 32-bit words.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  explicit Philox4x32(Key key) : key_(key) {}
  explicit Philox4x32(std::uint64_t seed)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

  Counter operator()(Counter counter) const;

 private:
  Key key_;
};

/// Uniform double in the open interval (0, 1) built from 52 bits of two words.
double uniform_open01(std::uint32_t hi, std::uint32_t lo);

/// Standard normal quantile (inverse CDF).
double normal_quantile(double u);

/**
 * Gaussian Brownian increments addressed by (path, step, component).
 *
 * Values depend only on the master seed and the address, never on the order in
 * which they are requested, so paths can be simulated on any schedule.
 */
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : philox_(seed) {}

  /// Standard normal variate for the given address.
  double standard_normal(std::uint32_t path, std::uint32_t step, std::uint32_t component) const;

 private:
  Philox4x32 philox_;
};

}  // namespace so3mean

#include "doctest.h"

#include "so3mean/random.hpp"

#include <cmath>
#include <set>

using namespace so3mean;

TEST_CASE("Philox4x32-10 known-answer vectors") {
  // Reference outputs published with Random123 (kat_vectors).
  {
    const Philox4x32 gen(Philox4x32::Key{0, 0});
    const auto out = gen({0, 0, 0, 0});
    CHECK(out == Philox4x32::Counter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  }
  {
    const Philox4x32 gen(Philox4x32::Key{0xffffffff, 0xffffffff});
    const auto out = gen({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff});
    CHECK(out == Philox4x32::Counter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  }
  {
    const Philox4x32 gen(Philox4x32::Key{0xa4093822, 0x299f31d0});
    const auto out = gen({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344});
    CHECK(out == Philox4x32::Counter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
  }
}

TEST_CASE("uniforms stay inside the open interval") {
  CHECK(uniform_open01(0, 0) > 0.0);
  CHECK(uniform_open01(0xffffffff, 0xffffffff) < 1.0);
  CHECK(std::isfinite(normal_quantile(uniform_open01(0, 0))));
  CHECK(std::isfinite(normal_quantile(uniform_open01(0xffffffff, 0xffffffff))));
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0));
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-14));
}

TEST_CASE("normal stream is addressable and well distributed") {
  const NormalStream a(42), b(42), c(43);
  CHECK(a.standard_normal(3, 7, 1) == b.standard_normal(3, 7, 1));
  CHECK(a.standard_normal(3, 7, 1) != c.standard_normal(3, 7, 1));
  CHECK(a.standard_normal(3, 7, 0) != a.standard_normal(3, 7, 1));
  CHECK(a.standard_normal(3, 7, 2) != a.standard_normal(3, 7, 0));

  // Moments over 3 x 20000 variates.
  const int n = 20000;
  double sum = 0.0, sum2 = 0.0, sum4 = 0.0;
  std::set<double> distinct;
  for (int i = 0; i < n; ++i) {
    for (std::uint32_t k = 0; k < 3; ++k) {
      const double z = a.standard_normal(static_cast<std::uint32_t>(i), 0, k);
      sum += z;
      sum2 += z * z;
      sum4 += z * z * z * z;
      distinct.insert(z);
    }
  }
  const double m = 3.0 * n;
  CHECK(std::abs(sum / m) < 4.0 / std::sqrt(m));
  CHECK(std::abs(sum2 / m - 1.0) < 4.0 * std::sqrt(2.0 / m));
  CHECK(std::abs(sum4 / m - 3.0) < 4.0 * std::sqrt(96.0 / m));
  CHECK(distinct.size() == static_cast<std::size_t>(m));
}

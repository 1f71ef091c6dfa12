#include "doctest.h"

#include "so3mean/selftest.hpp"

#include <sstream>
#include <string>

using namespace so3mean;

namespace {

bool passed(const std::vector<SelftestCheck>& checks, const std::string& prefix) {
  for (const auto& c : checks) {
    if (c.name.rfind(prefix, 0) == 0) return c.passed;
  }
  FAIL("no check named " << prefix);
  return false;
}

}  // namespace

TEST_CASE("selftest passes on the shipped bracket") {
  const auto checks = run_selftest();
  CHECK(checks.size() == 13);
  std::ostringstream out;
  CHECK(print_selftest(out, checks));
  CHECK(out.str().find("[FAIL]") == std::string::npos);
  CHECK(out.str().find("all checks passed") != std::string::npos);
}

TEST_CASE("selftest notices a sign-flipped bracket") {
  SelftestOptions options;
  options.bracket = [](const AlgebraVector& u, const AlgebraVector& v) -> AlgebraVector {
    return -bracket(u, v);
  };
  const auto checks = run_selftest(options);
  CHECK_FALSE(passed(checks, "structure constants"));
  CHECK_FALSE(passed(checks, "bracket equals hat commutator"));
  // Both bracket-sum identities are invariant under a global sign flip: the
  // triple sum is odd in the bracket and vanishes anyway, the outer sum is even.
  CHECK(passed(checks, "sum_i [[[G_i,nu],nu],G_i]"));
  CHECK(passed(checks, "sum_i [G_i,nu](x)[G_i,nu]"));
  std::ostringstream out;
  CHECK_FALSE(print_selftest(out, checks));
}

TEST_CASE("selftest notices a mis-scaled bracket") {
  SelftestOptions options;
  options.bracket = [](const AlgebraVector& u, const AlgebraVector& v) -> AlgebraVector {
    return u.cross(v);
  };
  const auto checks = run_selftest(options);
  CHECK_FALSE(passed(checks, "structure constants"));
  CHECK_FALSE(passed(checks, "sum_i [G_i,nu](x)[G_i,nu]"));
  CHECK(passed(checks, "Jacobi identity"));
}

#pragma once

#include "so3mean/lie.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace so3mean {

using BracketFn = std::function<AlgebraVector(const AlgebraVector&, const AlgebraVector&)>;

struct SelftestCheck {
  std::string name;
  double tolerance = 0.0;
  double observed = 0.0;  // worst error over the randomized instances
  bool passed = false;
};

struct SelftestOptions {
  /// Bracket under test for the algebra identities; swap it to check that the
  /// suite notices a broken bracket.
  BracketFn bracket = [](const AlgebraVector& u, const AlgebraVector& v) { return so3mean::bracket(u, v); };
  int instances = 100;
  std::uint64_t seed = 20240917;
};

std::vector<SelftestCheck> run_selftest(const SelftestOptions& options = {});

/// One line per check; returns true when every check passed.
bool print_selftest(std::ostream& out, const std::vector<SelftestCheck>& checks);

}  // namespace so3mean

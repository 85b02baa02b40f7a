#pragma once

#include "hjb/problem.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace hjb {

struct Violation {
  std::string check;
  Vec x;
  double t = 0.0;
  /// Offending inequality lhs <= rhs that failed.
  double lhs = 0.0;
  double rhs = 0.0;
  std::string detail;
};

struct ValidationReport {
  int samples = 0;
  std::vector<std::string> checks_run;
  std::vector<Violation> violations;

  [[nodiscard]] bool passed() const { return violations.empty(); }
  [[nodiscard]] bool has_violation(const std::string& check) const;
};

/// Monte-Carlo spot checks of the structural hypotheses on a problem:
/// coercivity of ell and growth of b, sigma (controlled problems), the bound
/// and Lipschitz quotient of s, midpoint convexity of z -> f, the growth
/// bound on |f| and the Lipschitz bound in u. Violations are collected with
/// their witness points, never thrown.
ValidationReport validate_assumptions(const ProblemSpec& spec, int sample_count, double domain_radius,
                                      std::uint64_t seed = 12345);

}  // namespace hjb

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The hmimo Authors

#ifndef HMIMO_VALIDATION_HPP
#define HMIMO_VALIDATION_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace hmimo {

struct ValidationCheck {
  std::string name;
  double achieved = 0.0;   ///< error measure, or statistic
  double tolerance = 0.0;  ///< pass when achieved <= tolerance
  bool passed = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;

  bool all_passed() const;
};

/// Closed forms against quadrature, special functions against integral
/// representations, solver self-consistency and the equivalent-SINR law.
/// Takes a few seconds.
ValidationReport run_validation(std::uint64_t seed = 1, int threads = 0);

/// One "PASS|FAIL name achieved <= tolerance detail" line per check.
std::string format_report(const ValidationReport& report);

}  // namespace hmimo

#endif  // HMIMO_VALIDATION_HPP

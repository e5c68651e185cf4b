#pragma once

#include <string>
#include <vector>

namespace nch {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Fast oracle and invariant checks runnable from the installed binary.
std::vector<CheckResult> run_selftest();

/// Lemma-style bounds of the phi functions at n log-spaced points of
/// [a_min, a_max]; returns the number of violations and fills `detail` with
/// the first one.
std::size_t count_phi_bound_violations(double a_min, double a_max, std::size_t n, std::string* detail);

/// Largest relative gap between series and closed forms of phi0 and phi1 on
/// n points around the switch-over argument.
double phi_switch_gap(std::size_t n);

}  // namespace nch

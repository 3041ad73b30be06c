#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pdelearn::cli {

struct CheckResult {
  std::string suite;
  std::string name;
  double max_residual;
  double tolerance;
  bool passed;
};

// Suites: identities, gradients, truncation, orthonormality, all.
// Throws ConfigError on an unknown suite name.
std::vector<CheckResult> run_suite(const std::string& suite);

void print_report(std::ostream& os, const std::vector<CheckResult>& results);

}  // namespace pdelearn::cli

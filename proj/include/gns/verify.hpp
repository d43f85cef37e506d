#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gns {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// Runs the full acceptance suite, one criterion per entry, printing one
/// pass/fail line per criterion to `out` as it goes.
std::vector<CriterionResult> run_acceptance(std::ostream& out);

/// True when every criterion passed.
bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace gns

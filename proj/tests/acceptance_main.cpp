// Acceptance suite: one pass/fail line per criterion, nonzero exit on failure.

#include <iostream>

#include "gns/verify.hpp"

int main() {
  auto results = gns::run_acceptance(std::cout);
  int failed = 0;
  for (const auto& r : results)
    if (!r.pass) ++failed;
  std::cout << results.size() - failed << "/" << results.size() << " criteria passed"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
